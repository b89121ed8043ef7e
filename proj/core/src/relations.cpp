#include "gwext/relations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace gwext {

std::string to_string(RelationKind k) {
    switch (k) {
        case RelationKind::implies: return "implies";
        case RelationKind::implied_by: return "implied-by";
        case RelationKind::equivalent: return "equivalent";
        case RelationKind::incomparable: return "incomparable";
        case RelationKind::indeterminate: return "indeterminate";
    }
    return "?";
}

std::string relation_arrow(RelationKind k) {
    switch (k) {
        case RelationKind::implies: return "=>";
        case RelationKind::implied_by: return "<=";
        case RelationKind::equivalent: return "<=>";
        case RelationKind::incomparable: return "<!>";
        case RelationKind::indeterminate: return "?";
    }
    return "?";
}

std::string to_string(ConditionVerdict v) {
    switch (v) {
        case ConditionVerdict::pass: return "pass";
        case ConditionVerdict::fail: return "fail";
        case ConditionVerdict::advisory_pass: return "advisory-pass";
        case ConditionVerdict::advisory_fail: return "advisory-fail";
    }
    return "?";
}

Relation compare_extinction_vectors(const ProbVector& qA, const ProbVector& qB,
                                    double tol) {
    if (qA.size() != qB.size())
        throw std::invalid_argument(
            "compare_extinction_vectors: windows differ");
    Relation r;
    r.method = "vector-order";
    double up = 0.0, down = 0.0;
    for (std::uint64_t i = 0; i < qA.size(); ++i) {
        double d = qA.at_index(i) - qB.at_index(i);
        if (d > up) up = d;
        if (-d > down) down = -d;
    }
    r.margin_forward = up;
    r.margin_backward = down;
    const double decisive = 3.0 * tol;
    if (up <= tol && down <= tol)
        r.kind = RelationKind::equivalent;
    else if (down <= tol && up > decisive)
        r.kind = RelationKind::implies;
    else if (up <= tol && down > decisive)
        r.kind = RelationKind::implied_by;
    else if (up > decisive && down > decisive)
        r.kind = RelationKind::incomparable;
    else
        r.kind = RelationKind::indeterminate;
    return r;
}

RatioInfimum ratio_infimum(const ProbVector& qA, const ProbVector& qB,
                           const Window& window) {
    if (qA.size() != qB.size())
        throw std::invalid_argument("ratio_infimum: windows differ");
    RatioInfimum out;
    std::uint64_t n = std::min(window.size, qA.size());
    for (std::uint64_t i = 0; i < n; ++i) {
        double a = qA.at_index(i);
        if (a >= 1.0 - 1e-12) continue;
        double ratio = (1.0 - qB.at_index(i)) / (1.0 - a);
        ++out.eligible_count;
        if (out.empty_eligible || ratio < out.value) {
            out.value = ratio;
            out.argmin = TypeId{i};
        }
        out.empty_eligible = false;
    }
    return out;
}

SingletonTestResult singleton_test(const ProcessSpec& spec, const SubsetSpec& B,
                                   const Window& window, const SolveConfig& cfg) {
    SingletonTestResult out;
    out.maximal = solve_q0(spec, B, window, cfg);
    out.minimal = solve_qXA(spec, B, window, cfg);
    out.gap = ProbVector::sup_diff_prefix(out.maximal.vector, out.minimal.vector,
                                          cfg.reporting_window);
    out.singleton = out.gap <= 2.0 * cfg.inner_tol;
    return out;
}

MCEstimate mc_relation_check(const ProcessSpec& spec, TypeId x,
                             const SubsetSpec& A, const SubsetSpec& B,
                             const MCConfig& mc) {
    return estimate_event(spec, x, McEvent::survive_A_extinct_B, A, B, mc);
}

namespace {

bool is_dominant(RelationKind k) {
    return k == RelationKind::implies || k == RelationKind::equivalent;
}

}  // namespace

FamilyConditionReport check_family_conditions(
    const ProcessSpec& spec, const std::vector<SubsetSpec>& family,
    const std::vector<ExtinctionResult>& solved, const Window& window,
    const SolveConfig& cfg, const FamilyCheckOptions& opts) {
    if (family.size() != solved.size())
        throw std::invalid_argument(
            "check_family_conditions: one solved vector per subset required");
    const std::size_t K = family.size();
    FamilyConditionReport report;

    // C1: pairwise disjointness, exact on the window.
    for (std::uint64_t t = 0; t < window.size && report.disjoint == ConditionVerdict::pass; ++t) {
        std::size_t owner = K;
        for (std::size_t i = 0; i < K; ++i) {
            if (!family[i].contains(TypeId{t})) continue;
            if (owner != K) {
                report.disjoint = ConditionVerdict::fail;
                report.notes.push_back("C1: " + family[owner].name + " and " +
                                       family[i].name + " share type " +
                                       spec.label(TypeId{t}));
                break;
            }
            owner = i;
        }
    }

    // C2: each solved vector dips below one.
    for (std::size_t i = 0; i < K; ++i) {
        double min_entry = 1.0;
        std::uint64_t n = std::min(window.size, solved[i].vector.size());
        for (std::uint64_t t = 0; t < n; ++t)
            min_entry = std::min(min_entry, solved[i].vector.at_index(t));
        if (min_entry > 1.0 - opts.c2_slack_factor * cfg.trunc_tol) {
            report.nontrivial = ConditionVerdict::fail;
            report.notes.push_back("C2: " + family[i].name +
                                   " shows no extinction deficit on the window");
        }
    }

    // Pairwise relation matrix on the reporting prefix of the window.
    std::uint64_t cmp_len = window.size;
    for (const auto& r : solved) cmp_len = std::min(cmp_len, r.vector.size());
    auto prefix = [&](const ProbVector& v) {
        std::vector<double> vals(v.values().begin(),
                                 v.values().begin() + cmp_len);
        return ProbVector(Window{cmp_len}, std::move(vals));
    };
    std::vector<ProbVector> member_prefix;
    member_prefix.reserve(K);
    for (const auto& r : solved) member_prefix.push_back(prefix(r.vector));

    report.relation_matrix.assign(K, std::vector<RelationKind>(K,
                                                RelationKind::equivalent));
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) {
            if (i == j) continue;
            report.relation_matrix[i][j] =
                compare_extinction_vectors(member_prefix[i], member_prefix[j],
                                           opts.tol)
                    .kind;
        }

    // C3: no distinct pair equivalent.
    for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = i + 1; j < K; ++j)
            if (report.relation_matrix[i][j] == RelationKind::equivalent) {
                report.pairwise_distinct = ConditionVerdict::fail;
                report.notes.push_back("C3: " + family[i].name + " and " +
                                       family[j].name +
                                       " have matching vectors on the window");
            }

    // Union solves, cached by member mask.
    std::map<std::vector<std::size_t>, ProbVector> union_cache;
    auto solve_union = [&](std::vector<std::size_t> idx) -> const ProbVector& {
        std::sort(idx.begin(), idx.end());
        auto it = union_cache.find(idx);
        if (it != union_cache.end()) return it->second;
        SubsetSpec u;
        if (idx.size() == K - 1 && opts.union_excluding) {
            std::size_t excluded = 0;
            std::vector<bool> present(K, false);
            for (auto i : idx) present[i] = true;
            for (std::size_t i = 0; i < K; ++i)
                if (!present[i]) excluded = i;
            u = opts.union_excluding(excluded);
        } else if (opts.union_of) {
            u = opts.union_of(idx);
        } else {
            std::vector<SubsetSpec> parts;
            std::string name = "union(";
            for (auto i : idx) {
                parts.push_back(family[i]);
                name += family[i].name + ",";
            }
            name += ")";
            u = union_subset(name, std::move(parts));
        }
        ExtinctionResult r = solve_q(spec, u, cfg);
        return union_cache.emplace(std::move(idx), prefix(r.vector))
            .first->second;
    };

    // C4 (advisory): whenever some member implies a representable union, the
    // union of all such members implies it too.
    bool c4_violated = false;
    bool c4_sampled = false;
    {
        std::vector<std::vector<std::size_t>> targets;
        if (K <= opts.max_union_bits) {
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << K); ++mask) {
                std::vector<std::size_t> idx;
                for (std::size_t i = 0; i < K; ++i)
                    if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
                targets.push_back(std::move(idx));
            }
        } else {
            c4_sampled = true;
            for (std::size_t i = 0; i < K; ++i) targets.push_back({i});
            std::vector<std::size_t> all(K);
            for (std::size_t i = 0; i < K; ++i) all[i] = i;
            targets.push_back(std::move(all));
        }
        for (const auto& target : targets) {
            const ProbVector& qU = solve_union(target);
            std::vector<std::size_t> dominating;
            for (std::size_t i = 0; i < K; ++i) {
                Relation rel =
                    compare_extinction_vectors(member_prefix[i], qU, opts.tol);
                if (is_dominant(rel.kind)) dominating.push_back(i);
            }
            if (dominating.empty()) continue;
            const ProbVector& qDom = solve_union(dominating);
            Relation rel = compare_extinction_vectors(qDom, qU, opts.tol);
            if (!is_dominant(rel.kind)) {
                c4_violated = true;
                report.notes.push_back(
                    "C4: dominating members fail to dominate union of " +
                    std::to_string(target.size()) + " members");
                break;
            }
        }
    }
    report.union_dominance = c4_violated ? ConditionVerdict::advisory_fail
                                         : ConditionVerdict::advisory_pass;
    if (c4_sampled)
        report.notes.push_back(
            "C4 checked on sampled unions only (family too large)");

    // C5 (advisory): a member never implies the union of the members it does
    // not imply.
    bool c5_violated = false;
    for (std::size_t i = 0; i < K; ++i) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0; j < K; ++j) {
            if (j == i) continue;
            RelationKind k = report.relation_matrix[i][j];
            if (k == RelationKind::implied_by || k == RelationKind::incomparable)
                rest.push_back(j);
        }
        if (rest.empty()) continue;
        const ProbVector& qU = solve_union(rest);
        Relation rel = compare_extinction_vectors(member_prefix[i], qU, opts.tol);
        if (is_dominant(rel.kind)) {
            c5_violated = true;
            report.notes.push_back("C5: " + family[i].name +
                                   " implies the union of members it does not "
                                   "imply individually");
        }
    }
    report.union_separation = c5_violated ? ConditionVerdict::advisory_fail
                                          : ConditionVerdict::advisory_pass;
    report.notes.push_back(
        "C4/C5 are advisory: the conditions quantify over infinitely many "
        "unions and were checked on window-representable unions only");
    return report;
}

std::string FamilyConditionReport::to_json(
    const std::vector<std::string>& names) const {
    nlohmann::json j;
    j["C1_disjoint"] = gwext::to_string(disjoint);
    j["C2_nontrivial"] = gwext::to_string(nontrivial);
    j["C3_pairwise_distinct"] = gwext::to_string(pairwise_distinct);
    j["C4_union_dominance"] = gwext::to_string(union_dominance);
    j["C5_union_separation"] = gwext::to_string(union_separation);
    j["regular_up_to_advisory"] = regular_up_to_advisory();
    nlohmann::json matrix = nlohmann::json::array();
    for (std::size_t i = 0; i < relation_matrix.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < relation_matrix[i].size(); ++k)
            row.push_back(gwext::to_string(relation_matrix[i][k]));
        matrix.push_back(row);
    }
    j["relation_matrix"] = matrix;
    j["names"] = names;
    j["notes"] = notes;
    return j.dump(2);
}

}  // namespace gwext
