#include <cmath>

#include "doctest.h"
#include "gwext/examples.hpp"
#include "gwext/solver.hpp"
#include "helpers.hpp"

using namespace gwext;
using namespace gwext::testing;
namespace ex = gwext::examples;

TEST_SUITE_BEGIN("solver");

TEST_CASE("scalar oracles for minimal fixed points") {
    SolveConfig cfg;
    SUBCASE("cubic law") {
        // Oracle: smallest root of 0.5 + 0.5 s^3 = s in (0,1).
        double oracle = bisect_root(
            [](double s) { return 0.5 + 0.5 * s * s * s - s; }, 0.01, 0.99);
        CHECK(oracle == doctest::Approx(0.6180339887498949).epsilon(1e-12));
        auto res = solve_q(cubic_process(), only_type(0), cfg);
        CHECK(res.converged);
        CHECK(res.vector[TypeId{0}] == doctest::Approx(oracle).epsilon(1e-10));
    }
    SUBCASE("binary law with a = 3/4") {
        double oracle = bisect_root(
            [](double s) { return 0.25 + 0.75 * s * s - s; }, 0.0, 0.9);
        CHECK(oracle == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        auto res = solve_q(binary_process(0.75), only_type(0), cfg);
        CHECK(res.converged);
        CHECK(res.vector[TypeId{0}] == doctest::Approx(oracle).epsilon(1e-10));
    }
    SUBCASE("random single-type laws match bisection") {
        std::mt19937_64 rng(23);
        RandomSpecOptions opts;
        opts.max_types = 1;
        opts.bound_criticality = false;
        for (int trial = 0; trial < 20; ++trial) {
            ProcessSpec spec = random_finite_spec(rng, opts);
            auto g = [&](double s) {
                ProbVector v(Window{1}, s);
                return eval_generating_function(spec, v, {TypeId{0}},
                                                1.0)[TypeId{0}];
            };
            double oracle = scalar_minimal_fixed_point(g);
            auto res = solve_q(spec, only_type(0), cfg);
            CHECK(res.vector[TypeId{0}] ==
                  doctest::Approx(oracle).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("immortal coordinates are pinned to zero") {
    SolveConfig cfg;
    ProcessSpec spec = cubic_process();
    auto run = solve_finite_modified(spec, only_type(0), 0, 1, Window{1}, cfg);
    CHECK(run.vector[TypeId{0}] == 0.0);
}

TEST_CASE("empty subset solves to all ones") {
    SolveConfig cfg;
    auto res = solve_q(cubic_process(), empty_subset(), cfg);
    CHECK(res.converged);
    CHECK(res.vector[TypeId{0}] == 1.0);
}

TEST_CASE("truncation monotonicity in the two cutoffs") {
    ex::LevelPhaseParams params{0.1, 0.5, 1.0};
    ProcessSpec spec = ex::level_phase_process(params);
    SolveConfig cfg;
    Window window{256};
    auto L1 = ex::level_subset(1);
    std::uint64_t nA = 0, nC = 0;
    for (std::uint64_t i = 0; i < window.size; ++i)
        (L1.contains(TypeId{i}) ? nA : nC)++;
    SUBCASE("nondecreasing in the immortal cutoff") {
        std::vector<double> prev;
        for (std::uint64_t k : std::vector<std::uint64_t>{2, 4, 8, nA}) {
            auto run = solve_finite_modified(spec, L1, k, nC, window, cfg);
            if (!prev.empty())
                for (std::uint64_t i = 0; i < window.size; ++i)
                    CHECK(run.vector.at_index(i) >= prev[i] - 1e-12);
            prev = run.vector.values();
        }
    }
    SUBCASE("nonincreasing in the sterile cutoff") {
        std::vector<double> prev;
        for (std::uint64_t l : std::vector<std::uint64_t>{8, 32, 128, nC}) {
            auto run = solve_finite_modified(spec, L1, nA, l, window, cfg);
            if (!prev.empty())
                for (std::uint64_t i = 0; i < window.size; ++i)
                    CHECK(run.vector.at_index(i) <= prev[i] + 1e-12);
            prev = run.vector.values();
        }
    }
}

TEST_CASE("monotone generation recursion") {
    // Iterates from the zero start are pointwise nondecreasing.
    using gwext::detail::CoordKind;
    using gwext::detail::WindowSystem;
    ex::LevelPhaseParams params{0.1, 0.5, 1.0};
    ProcessSpec spec = ex::level_phase_process(params);
    auto L1 = ex::level_subset(1);
    Window window{64};
    WindowSystem sys(
        spec, window, [](TypeId) { return CoordKind::live; },
        [&](TypeId t) { return L1.contains(t) ? 0.0 : 1.0; });
    // Deficits start at 1 and must never increase.
    std::vector<double> cur = sys.initial(0.0), next(window.size);
    for (int it = 0; it < 200; ++it) {
        sys.sweep(cur, next);
        for (std::uint64_t i = 0; i < window.size; ++i)
            CHECK(next[i] <= cur[i] + 1e-14);
        cur.swap(next);
    }
}

TEST_CASE("level solves stabilize and respect the strict chain at r=1") {
    ex::LevelPhaseParams params{0.1, 0.5, 1.0};
    ProcessSpec spec = ex::level_phase_process(params);
    SolveConfig cfg;
    auto t00 = ex::grid_type(0, 0);
    auto q1 = solve_q(spec, ex::level_subset(1), cfg);
    auto q2 = solve_q(spec, ex::level_subset(2), cfg);
    auto q3 = solve_q(spec, ex::level_subset(3), cfg);
    CHECK(q1.converged);
    CHECK(q2.converged);
    CHECK(q3.converged);
    CHECK(q1.vector[t00] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(q2.vector[t00] - q1.vector[t00] > 10 * cfg.trunc_tol);
    CHECK(q3.vector[t00] - q2.vector[t00] > 10 * cfg.trunc_tol);
}

TEST_CASE("levels coincide when descent dominates") {
    // r well below p: all level vectors match the partial one.
    ex::LevelPhaseParams params{0.1, 0.5, 0.05};
    ProcessSpec spec = ex::level_phase_process(params);
    SolveConfig cfg;
    auto q1 = solve_q(spec, ex::level_subset(1), cfg);
    auto q2 = solve_q(spec, ex::level_subset(2), cfg);
    CHECK(ProbVector::sup_diff_prefix(q1.vector, q2.vector, 16) <=
          2 * cfg.trunc_tol);
}

TEST_CASE("never-visit fixed point") {
    SolveConfig cfg;
    SUBCASE("zero on the subset itself") {
        auto run = solve_q0(cubic_process(), only_type(0), Window{1}, cfg);
        CHECK(run.vector[TypeId{0}] == 0.0);
    }
    SUBCASE("feeder type never visits with probability 1-a") {
        ProcessSpec spec = feeder_process(0.3, barren_law());
        auto run = solve_q0(spec, only_type(1), Window{2}, cfg);
        CHECK(run.vector[TypeId{0}] == doctest::Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("unreachable subset is never visited") {
        ProcessSpec spec = cubic_with_unreachable();
        auto run = solve_q0(spec, only_type(1), Window{2}, cfg);
        CHECK(run.vector[TypeId{0}] == 1.0);
    }
}

TEST_CASE("extinct-without-visiting fixed point") {
    SolveConfig cfg;
    SUBCASE("zero on the subset") {
        auto run = solve_qXA(cubic_process(), only_type(0), Window{1}, cfg);
        CHECK(run.vector[TypeId{0}] == 0.0);
    }
    SUBCASE("extremal pair differ on the island example") {
        ProcessSpec spec = cubic_with_unreachable();
        auto q0 = solve_q0(spec, only_type(1), Window{2}, cfg);
        auto qxa = solve_qXA(spec, only_type(1), Window{2}, cfg);
        CHECK(q0.vector[TypeId{0}] == doctest::Approx(1.0));
        CHECK(qxa.vector[TypeId{0}] ==
              doctest::Approx(0.6180339887498949).epsilon(1e-10));
    }
    SUBCASE("subcritical with empty subset reaches one") {
        ProcessSpec spec = binary_process(0.0);  // dies immediately
        auto run = solve_qXA(spec, empty_subset(), Window{1}, cfg);
        CHECK(run.vector[TypeId{0}] == doctest::Approx(1.0));
        ProcessSpec sub("sub", 1, [](TypeId) {
            return joint_law({{0.75, {}}, {0.25, {{TypeId{0}, 1}}}});
        });
        auto run2 = solve_qXA(sub, empty_subset(), Window{1}, cfg);
        CHECK(run2.vector[TypeId{0}] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("extremal property of the zeroed map fixed points") {
    // Any fixed point of the zeroed map lies between the extremal pair.
    std::mt19937_64 rng(31);
    SolveConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        ProcessSpec spec = random_finite_spec(rng);
        const std::uint64_t n = spec.type_count();
        SubsetSpec A = only_type(rng() % n);
        auto top = solve_q0(spec, A, Window{n}, cfg);
        auto bottom = solve_qXA(spec, A, Window{n}, cfg);
        for (std::uint64_t i = 0; i < n; ++i)
            CHECK(bottom.vector.at_index(i) <= top.vector.at_index(i) + 1e-12);
    }
}

TEST_CASE("partial extinction vector") {
    SolveConfig cfg;
    SUBCASE("supercritical single type matches the global value") {
        auto res = solve_partial(cubic_process(), cfg);
        CHECK(res.vector[TypeId{0}] ==
              doctest::Approx(0.6180339887498949).epsilon(1e-10));
    }
    SUBCASE("singular process is rejected") {
        ProcessSpec clone("clone", 1, [](TypeId) {
            return product_law({CountComponent::deterministic(TypeId{0}, 1)});
        });
        CHECK_THROWS_AS(solve_partial(clone, cfg), std::invalid_argument);
    }
    SUBCASE("dominates level vectors at r=1") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.0};
        ProcessSpec spec = ex::level_phase_process(params);
        SolveConfig fast = cfg;
        fast.reporting_window = 6;
        auto partial = solve_partial(spec, fast);
        auto q2 = solve_q(spec, ex::level_subset(2), fast);
        for (std::uint64_t i = 0; i < 6; ++i)
            CHECK(partial.vector.at_index(i) >=
                  q2.vector.at_index(i) - 2 * fast.trunc_tol);
    }
}

TEST_CASE("residual diagnostics") {
    SolveConfig cfg;
    ProcessSpec spec = cubic_process();
    SUBCASE("all-ones is a fixed point") {
        CHECK(residual(spec, ProbVector(Window{1}, 1.0), Window{1}) == 0.0);
    }
    SUBCASE("solver output satisfies its own residual contract") {
        auto res = solve_q(spec, only_type(0), cfg);
        CHECK(residual(spec, res.vector, Window{1}) <= 10 * cfg.inner_tol);
    }
    SUBCASE("zero vector misses by the childless mass") {
        CHECK(residual(spec, ProbVector(Window{1}, 0.0), Window{1}) ==
              doctest::Approx(0.5));
    }
}

TEST_CASE("upper bound verification") {
    SolveConfig cfg;
    ProcessSpec spec = cubic_with_unreachable();
    auto partial = solve_partial(spec, cfg);
    SUBCASE("fixed points pass") {
        auto q = solve_q(spec, full_subset(), cfg);
        CHECK(verify_upper_bound(spec, q.vector, partial.vector, 1e-9).empty());
        ProbVector ones(Window{2}, 1.0);
        CHECK(verify_upper_bound(spec, ones, partial.vector, 1e-9).empty());
    }
    SUBCASE("precondition failure names the coordinate") {
        // 0.9 > G(0.9) for the cubic law, so this is not sub-fixed.
        ProbVector bad(Window{2}, std::vector<double>{0.9, 1.0});
        CHECK_THROWS_WITH_AS(
            verify_upper_bound(spec, bad, partial.vector, 1e-9),
            doctest::Contains("coordinate 0"), std::invalid_argument);
    }
    SUBCASE("violations are reported") {
        // Claim a partial bound below the true fixed point.
        ProbVector fake(Window{2}, std::vector<double>{0.3, 0.3});
        auto q = solve_q(spec, full_subset(), cfg);
        auto violations = verify_upper_bound(spec, q.vector, fake, 1e-9);
        REQUIRE(!violations.empty());
        CHECK(violations[0].type.index == 0);
    }
}

TEST_CASE("config parsing") {
    SUBCASE("round trip") {
        SolveConfig cfg = parse_solve_config(
            "inner_tol = 1e-10\n"
            "trunc_tol=1e-6  # loose\n"
            "window_schedule = 8, 16, 32\n"
            "max_inner_iters=1000\n"
            "joint_schedule=false\n"
            "reporting_window=4\n");
        CHECK(cfg.inner_tol == 1e-10);
        CHECK(cfg.trunc_tol == 1e-6);
        CHECK(cfg.window_schedule == std::vector<std::uint64_t>{8, 16, 32});
        CHECK(cfg.max_inner_iters == 1000);
        CHECK_FALSE(cfg.joint_schedule);
        CHECK(cfg.reporting_window == 4);
    }
    SUBCASE("rejections") {
        CHECK_THROWS(parse_solve_config("window_schedule=32,16\n"));
        CHECK_THROWS(parse_solve_config("unknown_key=1\n"));
        CHECK_THROWS(parse_solve_config("inner_tol=-1\n"));
        CHECK_THROWS(parse_solve_config("inner_tol\n"));
    }
}

TEST_CASE("result serialization carries diagnostics") {
    SolveConfig cfg;
    auto res = solve_q(cubic_process(), only_type(0), cfg);
    std::string j = res.to_json();
    CHECK(j.find("\"residual\"") != std::string::npos);
    CHECK(j.find("\"monotonicity_log\"") != std::string::npos);
    CHECK(j.find("\"converged\": true") != std::string::npos);
}

TEST_SUITE_END();
