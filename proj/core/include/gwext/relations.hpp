#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwext/monte_carlo.hpp"
#include "gwext/process.hpp"
#include "gwext/solver.hpp"
#include "gwext/types.hpp"

namespace gwext {

// Relation of a pair (A, B): `implies` reads "survival in A implies survival
// in B", equivalently q(A) >= q(B) entrywise.
enum class RelationKind {
    implies,
    implied_by,
    equivalent,
    incomparable,
    indeterminate,
};
std::string to_string(RelationKind k);
// Arrow rendering for matrices.
std::string relation_arrow(RelationKind k);

struct Relation {
    RelationKind kind = RelationKind::indeterminate;
    // Sup of qA - qB resp. qB - qA over the compared window.
    double margin_forward = 0.0;
    double margin_backward = 0.0;
    std::string method;  // criterion that produced the verdict
};

// Verdict thresholds: entries within `tol` count as equal; a directed or
// crossing claim needs a margin above 3*tol, anything between is surfaced as
// indeterminate rather than guessed.
Relation compare_extinction_vectors(const ProbVector& qA, const ProbVector& qB,
                                    double tol);

struct RatioInfimum {
    bool empty_eligible = true;
    double value = 1.0;
    std::optional<TypeId> argmin;
    std::uint64_t eligible_count = 0;
};
// Windowed infimum of (1-qB_x)/(1-qA_x) over types with qA_x < 1 - 1e-12.
// A decreasing trend toward 0 across growing windows is evidence for
// q(A) < q(B) somewhere.
RatioInfimum ratio_infimum(const ProbVector& qA, const ProbVector& qB,
                           const Window& window);

struct SingletonTestResult {
    bool singleton = true;
    double gap = 0.0;  // sup over the reporting window
    FixedPointRun maximal;  // never-visit fixed point
    FixedPointRun minimal;  // extinct-without-visiting fixed point
};
// Gap between the extremal fixed points of the zeroed map; a positive gap
// certifies survival-with-avoidance is possible.
SingletonTestResult singleton_test(const ProcessSpec& spec, const SubsetSpec& B,
                                   const Window& window, const SolveConfig& cfg);

// Estimate of P_x(survive in A, extinct in B); a positive lower confidence
// bound is evidence for q(A) != q(B).
MCEstimate mc_relation_check(const ProcessSpec& spec, TypeId x,
                             const SubsetSpec& A, const SubsetSpec& B,
                             const MCConfig& mc);

enum class ConditionVerdict { pass, fail, advisory_pass, advisory_fail };
std::string to_string(ConditionVerdict v);

struct FamilyConditionReport {
    ConditionVerdict disjoint = ConditionVerdict::pass;           // C1
    ConditionVerdict nontrivial = ConditionVerdict::pass;         // C2
    ConditionVerdict pairwise_distinct = ConditionVerdict::pass;  // C3
    ConditionVerdict union_dominance = ConditionVerdict::advisory_pass;   // C4
    ConditionVerdict union_separation = ConditionVerdict::advisory_pass;  // C5
    std::vector<std::vector<RelationKind>> relation_matrix;
    std::vector<std::string> notes;

    bool regular_up_to_advisory() const {
        return disjoint == ConditionVerdict::pass &&
               nontrivial == ConditionVerdict::pass &&
               pairwise_distinct == ConditionVerdict::pass;
    }
    std::string to_json(const std::vector<std::string>& names) const;
};

struct FamilyCheckOptions {
    double tol = 1e-4;             // relation verdict tolerance
    double c2_slack_factor = 10.0;  // entries below 1 - factor*trunc_tol
    std::uint32_t max_union_bits = 6;  // cap for exhaustive union checks
    // Exact union builders; fall back to predicate unions of the listed
    // members when absent. `union_excluding` covers partition families whose
    // all-but-one unions are complements.
    std::function<SubsetSpec(const std::vector<std::size_t>&)> union_of;
    std::function<SubsetSpec(std::size_t)> union_excluding;
};

// Regularity report for a family with one solved vector per member. The two
// union conditions quantify over infinitely many unions and are advisory.
FamilyConditionReport check_family_conditions(
    const ProcessSpec& spec, const std::vector<SubsetSpec>& family,
    const std::vector<ExtinctionResult>& solved, const Window& window,
    const SolveConfig& cfg, const FamilyCheckOptions& opts = {});

}  // namespace gwext
