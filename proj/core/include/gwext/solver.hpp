#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwext/process.hpp"
#include "gwext/types.hpp"

namespace gwext {

struct SolveConfig {
    double inner_tol = 1e-12;   // fixed-point residual per window
    double trunc_tol = 1e-8;    // stabilization across truncation steps
    std::vector<std::uint64_t> window_schedule = {16,  32,   64,   128,  256,
                                                  512, 1024, 2048, 4096, 8192};
    std::uint64_t max_inner_iters = 2'000'000;
    bool joint_schedule = true;  // grow immortal and sterile cutoffs together
    std::uint64_t reporting_window = 16;

    void validate() const;
};

// key=value file, '#' starts a comment. Unknown keys are rejected.
SolveConfig load_solve_config(const std::string& path);
SolveConfig parse_solve_config(const std::string& text);

// One fixed-point iteration run on a single windowed system. The solver
// iterates on survival deficits u = 1 - s, which stay representable when
// entries hug 1; `deficits` carries them at full precision alongside the
// rounded probability vector.
struct FixedPointRun {
    ProbVector vector;
    std::vector<double> deficits;
    double residual = 0.0;
    std::uint64_t iterations = 0;
    bool converged = false;
};

struct TruncationStep {
    std::uint64_t window = 0;
    std::uint64_t live_target = 0;      // k: live types inside the target set
    std::uint64_t live_complement = 0;  // l': live types outside it
    double sup_delta = 0.0;             // vs previous step, reporting window
    std::uint64_t iterations = 0;
    double residual = 0.0;
};

struct ExtinctionResult {
    ProbVector vector;
    std::vector<double> deficits;
    double residual = 0.0;
    std::uint64_t iterations_used = 0;
    std::vector<std::uint64_t> windows_used;
    bool converged = false;
    std::vector<TruncationStep> monotonicity_log;
    // Set when the truncation guarantee is not backed by irreducibility on
    // the largest scheduled window.
    bool advisory = false;
    std::string method;

    std::string to_json(const ProcessSpec* spec = nullptr) const;
};

// Minimal fixed point of the modified finite system in which target-set
// types with label >= k never die and complement types with label >= lprime
// have no offspring; labels count enumeration order within each side.
// Children beyond the window contribute 0 (target side) or 1 (complement).
FixedPointRun solve_finite_modified(const ProcessSpec& spec, const SubsetSpec& A,
                                    std::uint64_t k, std::uint64_t lprime,
                                    const Window& window, const SolveConfig& cfg);

// Extinction probability vector q(A). Finite typesets that fit in the
// largest scheduled window are solved exactly (maximal fixed point of the
// zeroed map, then forward iteration); countable typesets go through the
// double truncation scheme, coupled or nested per the config.
ExtinctionResult solve_q(const ProcessSpec& spec, const SubsetSpec& A,
                         const SolveConfig& cfg);

// Maximal fixed point of the zeroed map (never-visit probabilities):
// iterate from 1 with outside value 1.
FixedPointRun solve_q0(const ProcessSpec& spec, const SubsetSpec& A,
                       const Window& window, const SolveConfig& cfg);

// Minimal fixed point of the zeroed map (extinct without visiting):
// iterate from 0 with outside value 0.
FixedPointRun solve_qXA(const ProcessSpec& spec, const SubsetSpec& A,
                        const Window& window, const SolveConfig& cfg);

// Partial extinction vector over the reporting window: entry x solves
// q_x({x}). Requires non-singularity on the largest scheduled window.
ExtinctionResult solve_partial(const ProcessSpec& spec, const SolveConfig& cfg);

// Sup-norm of s - G(s) over the window; `outside_value` substitutes entries
// beyond the window of s.
double residual(const ProcessSpec& spec, const ProbVector& s,
                const Window& window, double outside_value = 1.0);

// For s with s <= G(s), every entry below 1 must stay below the matching
// singleton extinction bound. Returns the offending coordinates.
struct UpperBoundViolation {
    TypeId type;
    double value = 0.0;
    double bound = 0.0;
};
std::vector<UpperBoundViolation> verify_upper_bound(const ProcessSpec& spec,
                                                    const ProbVector& s,
                                                    const ProbVector& qtilde,
                                                    double tol);

namespace detail {

// Per-coordinate role inside a compiled windowed system.
enum class CoordKind : std::uint8_t { live, pinned_zero, pinned_one };

// Compiled windowed system, evaluated on survival deficits u = 1 - s. Every
// law has a cancellation-free complement form (the geometric factor deficit
// is m*u/(1+m*u)), so entries within eps of 1 in s-space keep full relative
// precision.
class WindowSystem {
public:
    // `mode` assigns roles to window types; `boundary` values children
    // beyond the window (in s-space).
    WindowSystem(const ProcessSpec& spec, const Window& window,
                 const std::function<CoordKind(TypeId)>& mode,
                 const std::function<double(TypeId)>& boundary);

    // Deficit state with live coordinates at 1 - live_value.
    std::vector<double> initial(double live_value) const;
    // One Jacobi sweep in deficit space; returns sup |out - in|.
    double sweep(const std::vector<double>& in, std::vector<double>& out) const;
    FixedPointRun iterate(double live_value, double inner_tol,
                          std::uint64_t max_iters) const;
    // Iterate from a given deficit state. A monotone front can cross the
    // window at sub-tolerance magnitude, so small deltas must stay quiet for
    // a window-diameter of sweeps before the run counts as converged; an
    // exactly zero delta is a fixed point of the rounded map.
    FixedPointRun iterate_from(std::vector<double> start, double inner_tol,
                               std::uint64_t max_iters) const;
    const Window& window() const { return window_; }

private:
    struct Comp {
        std::uint32_t slot;
        CountComponent::Law law;
        double p = 0.0;
        std::uint32_t n = 0;
        double mean = 0.0;
        std::vector<std::pair<std::uint32_t, double>> pmf;
    };
    struct Term {
        double coeff;
        double const_log = 0.0;  // log of the folded boundary factors
        std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;  // slot, count
    };
    struct Coord {
        CoordKind kind = CoordKind::live;
        bool joint = false;
        bool constant_one_deficit = false;  // boundary forces u = 1
        double const_deficit = 0.0;  // joint: mass of terms with a dead factor
        double const_log = 0.0;      // product: folded boundary log-factors
        std::vector<Comp> comps;
        std::vector<Term> terms;
    };

    double eval_coord(const Coord& c, const std::vector<double>& u) const;

    Window window_;
    std::vector<Coord> coords_;
};

}  // namespace detail

}  // namespace gwext
