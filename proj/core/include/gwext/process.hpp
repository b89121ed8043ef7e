#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gwext/offspring.hpp"
#include "gwext/types.hpp"

namespace gwext {

// A multitype branching process: a typeset (finite or countably infinite,
// enumerated canonically) together with a deterministic law per type.
// Immutable after construction; all queries are pure.
class ProcessSpec {
public:
    static constexpr std::uint64_t kCountablyInfinite =
        std::numeric_limits<std::uint64_t>::max();

    ProcessSpec(std::string name, std::uint64_t type_count,
                std::function<OffspringLaw(TypeId)> law_of,
                std::function<std::string(TypeId)> label = {});

    const std::string& name() const { return name_; }
    std::uint64_t type_count() const { return type_count_; }
    bool finite() const { return type_count_ != kCountablyInfinite; }
    bool in_typeset(TypeId t) const {
        return type_count_ == kCountablyInfinite || t.index < type_count_;
    }

    OffspringLaw law(TypeId t) const;
    std::string label(TypeId t) const;

    // Largest window that fits in the typeset.
    Window clamp(Window w) const {
        if (finite() && w.size > type_count_) return Window{type_count_};
        return w;
    }

private:
    std::string name_;
    std::uint64_t type_count_;
    std::function<OffspringLaw(TypeId)> law_of_;
    std::function<std::string(TypeId)> label_;
};

// G_x(s) for each x in `at`. Values of s outside its window are replaced by
// `outside_value`; both supports the truncation schemes and makes evaluation
// total on infinite typesets.
ProbVector eval_generating_function(const ProcessSpec& spec, const ProbVector& s,
                                    const std::vector<TypeId>& at,
                                    double outside_value);

// Expected number of type-y children of a type-x parent.
double mean_matrix_entry(const ProcessSpec& spec, TypeId x, TypeId y);

// Directed graph on window types with an edge (x,y) iff the mean matrix
// entry m_xy is positive; children outside the window are dropped.
struct TypeGraph {
    Window window;
    std::vector<std::vector<std::uint32_t>> out;  // adjacency by index
};
TypeGraph type_graph(const ProcessSpec& spec, const Window& window);

// Strongly connected components of the windowed type graph, each sorted;
// singletons are valid classes (paths of length zero).
std::vector<std::vector<std::uint32_t>> irreducible_classes(
    const ProcessSpec& spec, const Window& window);

struct NonSingularReport {
    bool non_singular = true;
    // Classes in which every member has exactly one in-class child a.s.
    std::vector<std::vector<std::uint32_t>> violating_classes;
};
NonSingularReport is_non_singular(const ProcessSpec& spec, const Window& window);

// True iff the windowed type graph has a single irreducible class.
bool is_irreducible_on(const ProcessSpec& spec, const Window& window);

// Branching process realizing a given acyclic implication graph: vertex i
// bears 0 children with probability 1-b and 3 children with probability b,
// each child placed independently at i (weight 1/2) or uniformly across the
// direct out-neighbors (total weight 1/2). Sinks keep all mass at i. The
// accompanying family is the singletons {i}.
struct CanonicalDagProcess {
    ProcessSpec spec;
    std::vector<SubsetSpec> singleton_family;
};
CanonicalDagProcess canonical_process_from_dag(
    std::uint32_t vertex_count,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges, double b);

}  // namespace gwext
