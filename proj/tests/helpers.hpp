#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "gwext/monte_carlo.hpp"
#include "gwext/process.hpp"
#include "gwext/types.hpp"

namespace gwext::testing {

// Single-type process {no children w.p. 1/2, three children w.p. 1/2}.
inline ProcessSpec cubic_process() {
    auto law = [](TypeId) {
        return joint_law({{0.5, {}}, {0.5, {{TypeId{0}, 3}}}});
    };
    return ProcessSpec("cubic", 1, law);
}

// Single-type process {no children w.p. 1-a, two children w.p. a}.
inline ProcessSpec binary_process(double a) {
    auto law = [a](TypeId) {
        return joint_law({{1.0 - a, {}}, {a, {{TypeId{0}, 2}}}});
    };
    return ProcessSpec("binary", 1, law);
}

// Two types: the first spawns one child of the second w.p. a, nothing
// otherwise; the second follows the supplied law.
inline ProcessSpec feeder_process(double a, OffspringLaw second) {
    auto shared = std::make_shared<OffspringLaw>(std::move(second));
    auto law = [a, shared](TypeId t) -> OffspringLaw {
        if (t.index == 0)
            return product_law({CountComponent::bernoulli(TypeId{1}, a)});
        return *shared;
    };
    return ProcessSpec("feeder", 2, law);
}

// Self-supporting cubic type plus an unreachable second type.
inline ProcessSpec cubic_with_unreachable() {
    auto law = [](TypeId t) -> OffspringLaw {
        if (t.index == 0)
            return joint_law({{0.5, {}}, {0.5, {{TypeId{0}, 3}}}});
        return barren_law();
    };
    return ProcessSpec("cubic+island", 2, law);
}

inline SubsetSpec only_type(std::uint64_t i) {
    return SubsetSpec{"{" + std::to_string(i) + "}",
                      [i](TypeId t) { return t.index == i; }, true};
}

// Minimal root of f on [0,1] by bisection; f(0) and f(1) must straddle 0.
inline double bisect_root(const std::function<double(double)>& f, double lo,
                          double hi, int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo <= 0.0) == (fm <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Minimal fixed point of a scalar pgf on [0,1]: smallest root of g(s) - s.
inline double scalar_minimal_fixed_point(const std::function<double(double)>& g) {
    // Iterate from 0; plain functional iteration converges monotonically.
    double s = 0.0;
    for (int i = 0; i < 200000; ++i) {
        double next = g(s);
        if (std::abs(next - s) < 1e-15) return next;
        s = next;
    }
    return s;
}

// Random finite-type specs for property tests. Non-singular by rejection,
// criticality bounded away from 1 so simulations resolve quickly.
struct RandomSpecOptions {
    std::uint32_t max_types = 6;
    bool bound_criticality = true;
};

ProcessSpec random_finite_spec(std::mt19937_64& rng,
                               const RandomSpecOptions& opts = {});

// Spectral radius of the mean matrix by power iteration.
double mean_spectral_radius(const ProcessSpec& spec);

}  // namespace gwext::testing
