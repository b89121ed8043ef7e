#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gwext/family_graph.hpp"
#include "gwext/process.hpp"
#include "gwext/solver.hpp"
#include "gwext/types.hpp"

namespace gwext::examples {

// Grid typesets enumerate pairs diagonally: (level+phase) ascending, then
// level ascending, so windows grow uniformly in both coordinates.
struct GridPoint {
    std::uint64_t level = 0;  // first coordinate
    std::uint64_t phase = 0;  // second coordinate
};
std::uint64_t grid_index(GridPoint p);
GridPoint grid_point(std::uint64_t index);
std::string grid_label(TypeId t);
inline TypeId grid_type(std::uint64_t level, std::uint64_t phase) {
    return TypeId{grid_index({level, phase})};
}

// Level-phase lattice walk. Types (level i, phase j) reproduce as:
//   (0,0):   one (1,0) child with probability q;
//   (0,j):   one (0,j-1) child with probability p, j >= 1;
//   (i,0):   one (i,1) child surely and one (i+1,0) child w.p. q, i >= 1;
//   (i,j):   geometric (i-1,j) children with mean r^(1-j) and one (i,j+1)
//            child surely, i,j >= 1.
struct LevelPhaseParams {
    double p = 0.1;
    double q = 0.5;
    double r = 1.0;
    void validate() const;
};
ProcessSpec level_phase_process(const LevelPhaseParams& params);

// Row i of the lattice.
SubsetSpec level_subset(std::uint64_t i);
// Column j of the lattice.
SubsetSpec phase_subset(std::uint64_t j);
// Stripe i: the even-phase half of row i plus the whole column 2i+1.
// Stripes partition the lattice.
SubsetSpec stripe_subset(std::uint64_t i);
// Union of every stripe except i (the complement, since stripes partition).
SubsetSpec stripe_complement(std::uint64_t i);

std::vector<SubsetSpec> level_family(std::uint64_t first, std::uint64_t count);
std::vector<SubsetSpec> stripe_family(std::uint64_t count);

// Lattice walk on the quadrant: every type (i,j) bears no children w.p. 1/3,
// or three children of one of the types (i,j), (i,j+1), (i+1,j) with
// probabilities 1/2, 1/12, 1/12.
ProcessSpec quadrant_process();
// Survival at (i1,j1) implies survival at (i2,j2) iff i1<=i2 and j1<=j2.
bool quadrant_implies(GridPoint a, GridPoint b);
// Family graph of the singleton family on a side*side block; boundary
// vertices are open (their successors continue beyond the window). Ships
// exact cardinality descriptors (both collections countably infinite).
FamilyGraph quadrant_window_graph(std::uint32_t side);

// Family graph of an oriented binary tree with lateral edges: each parent
// implies its two children, and each vertex ending in a "-" is implied by
// its right sibling and that sibling's all-left descendants. Window holds
// all vertices up to the given depth (2^(depth+1)-1 of them); the deepest
// layer is open. Ships exact descriptors: primitives countably infinite,
// chain representatives uncountable.
FamilyGraph lateral_tree_graph(std::uint32_t depth);

// i-fold composition of the geometric pgf with mean r^(1-j), evaluated via
// the closed form 1/(1-F(s)) = r^(i(j-1))/(1-s) + sum_{l<i} r^(l(j-1)).
double geometric_composition(std::uint64_t i, std::uint64_t j, double r,
                             double s);

// Partial sum of sum_j C(i+j-1, j-1) r^(-i(j-1)) p^j with a ratio-test
// verdict: convergent iff p/r^i < 1. Accumulated in log space.
struct SeriesResult {
    double partial_sum = 0.0;
    bool convergent = false;
    double ratio = 0.0;
};
SeriesResult frozen_descendant_series(std::uint64_t i, double p, double r,
                                      std::uint64_t terms);

// Sweep of level extinction values at a reporting type across r values.
struct SweepSpec {
    std::vector<double> r_values;
    std::uint64_t levels = 6;           // solve rows 1..levels
    GridPoint report_type{0, 0};
    std::string output_path;
    double distinct_threshold = 1e-3;
};
struct SweepRow {
    double r = 0.0;
    std::uint64_t level = 0;
    double q_value = 1.0;
    bool converged = false;
    double residual = 0.0;
    // Distinct level values at the spec threshold and at one order looser
    // and tighter, repeated on each row of the same r.
    int distinct_count = 0;
    int distinct_count_loose = 0;
    int distinct_count_tight = 0;
};
std::vector<SweepRow> run_level_sweep(double p, double q, const SweepSpec& sweep,
                                      const SolveConfig& cfg,
                                      unsigned threads = 0);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
int distinct_value_count(std::vector<double> values, double threshold);

}  // namespace gwext::examples
