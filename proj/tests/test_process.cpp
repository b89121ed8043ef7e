#include <cmath>

#include "doctest.h"
#include "gwext/examples.hpp"
#include "gwext/process.hpp"
#include "helpers.hpp"

using namespace gwext;
using namespace gwext::testing;
namespace ex = gwext::examples;

TEST_SUITE_BEGIN("process");

TEST_CASE("pgf at one is one and constant term at zero") {
    ProcessSpec spec = cubic_process();
    ProbVector one(Window{1}, 1.0);
    ProbVector zero(Window{1}, 0.0);
    CHECK(eval_generating_function(spec, one, {TypeId{0}}, 1.0)[TypeId{0}] ==
          1.0);
    CHECK(eval_generating_function(spec, zero, {TypeId{0}}, 1.0)[TypeId{0}] ==
          0.5);
}

TEST_CASE("affine single-child pgf") {
    // Type (0,0) bears one (1,0) child w.p. q; at s_(1,0) = 0.6, q = 0.5 the
    // value is 0.5 + 0.5*0.6.
    ex::LevelPhaseParams params{0.1, 0.5, 1.0};
    ProcessSpec spec = ex::level_phase_process(params);
    ProbVector s(Window{16}, 1.0);
    s[ex::grid_type(1, 0)] = 0.6;
    double v = eval_generating_function(spec, s, {ex::grid_type(0, 0)},
                                        1.0)[TypeId{0}];
    CHECK(v == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("unknown type and bad outside value are rejected") {
    ProcessSpec spec = cubic_process();
    ProbVector s(Window{1}, 0.5);
    CHECK_THROWS_AS(eval_generating_function(spec, s, {TypeId{3}}, 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(eval_generating_function(spec, s, {TypeId{0}}, 1.5),
                    std::invalid_argument);
}

TEST_CASE("geometric pgf closed form") {
    for (double m : {0.3, 1.0, 2.5}) {
        CountComponent c = CountComponent::geometric(TypeId{0}, m);
        for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            CHECK(c.pgf(s) ==
                  doctest::Approx(1.0 / (1.0 + m * (1.0 - s))).epsilon(1e-14));
        }
        CHECK(c.prob_zero() == doctest::Approx(1.0 / (1.0 + m)));
    }
}

TEST_CASE("mean matrix entries") {
    ex::LevelPhaseParams params{0.1, 0.5, 0.7};
    ProcessSpec spec = ex::level_phase_process(params);
    SUBCASE("geometric descent mean is r^(1-j)") {
        for (std::uint64_t i : {1, 2, 3})
            for (std::uint64_t j : {1, 2, 3}) {
                double want = std::pow(0.7, 1.0 - static_cast<double>(j));
                CHECK(mean_matrix_entry(spec, ex::grid_type(i, j),
                                        ex::grid_type(i - 1, j)) ==
                      doctest::Approx(want).epsilon(1e-12));
            }
    }
    SUBCASE("ladder mean is q") {
        CHECK(mean_matrix_entry(spec, ex::grid_type(0, 0), ex::grid_type(1, 0)) ==
              doctest::Approx(0.5));
    }
    SUBCASE("no children means zero row") {
        ProcessSpec barren("barren", 2, [](TypeId) { return barren_law(); });
        CHECK(mean_matrix_entry(barren, TypeId{0}, TypeId{0}) == 0.0);
        CHECK(mean_matrix_entry(barren, TypeId{0}, TypeId{1}) == 0.0);
    }
    SUBCASE("same-type mean on the quadrant walk is 3/2") {
        ProcessSpec quad = ex::quadrant_process();
        CHECK(mean_matrix_entry(quad, ex::grid_type(2, 3), ex::grid_type(2, 3)) ==
              doctest::Approx(1.5));
    }
}

TEST_CASE("mean entries match finite differences of the pgf") {
    std::mt19937_64 rng(7);
    auto value_at = [](const ProcessSpec& spec, std::uint64_t x, std::uint64_t y,
                       double sy) {
        ProbVector s(Window{spec.type_count()}, 1.0);
        s[TypeId{y}] = sy;
        return eval_generating_function(spec, s, {TypeId{x}}, 1.0)[TypeId{0}];
    };
    for (int trial = 0; trial < 10; ++trial) {
        ProcessSpec spec = random_finite_spec(rng);
        const std::uint64_t n = spec.type_count();
        const double h = 1e-4;
        for (std::uint64_t x = 0; x < n; ++x)
            for (std::uint64_t y = 0; y < n; ++y) {
                // One-sided differences from below with one Richardson step.
                double g1 = value_at(spec, x, y, 1.0);
                double dh = (g1 - value_at(spec, x, y, 1.0 - h)) / h;
                double dh2 = (g1 - value_at(spec, x, y, 1.0 - h / 2)) / (h / 2);
                double fd = 2.0 * dh2 - dh;
                double m = mean_matrix_entry(spec, TypeId{x}, TypeId{y});
                CHECK(std::abs(m - fd) <= 1e-6 * (1.0 + std::abs(m)));
            }
    }
}

TEST_CASE("monotonicity of the generating map") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        ProcessSpec spec = random_finite_spec(rng);
        const std::uint64_t n = spec.type_count();
        std::vector<double> lo(n), hi(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            double a = unit(rng), b = unit(rng);
            lo[i] = std::min(a, b);
            hi[i] = std::max(a, b);
        }
        std::vector<TypeId> at;
        for (std::uint64_t i = 0; i < n; ++i) at.push_back(TypeId{i});
        ProbVector glo = eval_generating_function(
            spec, ProbVector(Window{n}, lo), at, 0.0);
        ProbVector ghi = eval_generating_function(
            spec, ProbVector(Window{n}, hi), at, 0.0);
        for (std::uint64_t i = 0; i < n; ++i)
            CHECK(glo.at_index(i) <= ghi.at_index(i) + 1e-14);
    }
}

TEST_CASE("type graph of the quadrant walk") {
    ProcessSpec spec = ex::quadrant_process();
    TypeGraph g = type_graph(spec, Window{32});
    // (i,j) points to itself, (i,j+1) and (i+1,j) only.
    std::uint64_t at = ex::grid_index({1, 1});
    std::vector<std::uint32_t> want = {
        static_cast<std::uint32_t>(ex::grid_index({1, 1})),
        static_cast<std::uint32_t>(ex::grid_index({1, 2})),
        static_cast<std::uint32_t>(ex::grid_index({2, 1}))};
    std::sort(want.begin(), want.end());
    CHECK(g.out[at] == want);
}

TEST_CASE("type graph rejects empty window and drops boundary children") {
    ProcessSpec spec = ex::quadrant_process();
    CHECK_THROWS_AS(type_graph(spec, Window{0}), std::invalid_argument);
    TypeGraph g = type_graph(spec, Window{3});
    for (const auto& out : g.out)
        for (auto v : out) CHECK(v < 3);
}

TEST_CASE("irreducible classes") {
    SUBCASE("four-cycle window of the lattice walk") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.0};
        ProcessSpec spec = ex::level_phase_process(params);
        // Window of 5 covers (0,0),(0,1),(1,0),(0,2),(1,1).
        auto classes = irreducible_classes(spec, Window{5});
        // (0,0) -> (1,0) -> (1,1) -> (0,1) -> (0,0) is one class.
        bool found = false;
        for (const auto& c : classes)
            if (c.size() == 4) {
                found = true;
                CHECK(c == std::vector<std::uint32_t>{
                               0,
                               static_cast<std::uint32_t>(ex::grid_index({0, 1})),
                               static_cast<std::uint32_t>(ex::grid_index({1, 0})),
                               static_cast<std::uint32_t>(ex::grid_index({1, 1}))});
            }
        CHECK(found);
    }
    SUBCASE("quadrant walk classes are singletons") {
        ProcessSpec spec = ex::quadrant_process();
        auto classes = irreducible_classes(spec, Window{16});
        CHECK(classes.size() == 16);
    }
    SUBCASE("barren process has singleton classes") {
        ProcessSpec barren("barren", 3, [](TypeId) { return barren_law(); });
        CHECK(irreducible_classes(barren, Window{3}).size() == 3);
    }
}

TEST_CASE("non-singularity detection") {
    SUBCASE("clone process is singular") {
        ProcessSpec clone("clone", 1, [](TypeId) {
            return product_law({CountComponent::deterministic(TypeId{0}, 1)});
        });
        auto report = is_non_singular(clone, Window{1});
        CHECK_FALSE(report.non_singular);
        REQUIRE(report.violating_classes.size() == 1);
    }
    SUBCASE("cubic process is non-singular") {
        CHECK(is_non_singular(cubic_process(), Window{1}).non_singular);
    }
    SUBCASE("lattice window is non-singular") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.0};
        ProcessSpec spec = ex::level_phase_process(params);
        CHECK(is_non_singular(spec, Window{5}).non_singular);
    }
}

TEST_CASE("canonical process from a dag") {
    SUBCASE("two-vertex placement weights") {
        auto built = canonical_process_from_dag(2, {{0, 1}}, 0.9);
        // Vertex 0 splits children between itself and vertex 1; sinks keep
        // everything. Check via mean matrix: three children, each placed
        // at 0 or 1 with probability 1/2 each; sink mean is 3b.
        CHECK(mean_matrix_entry(built.spec, TypeId{0}, TypeId{0}) ==
              doctest::Approx(0.9 * 3 * 0.5));
        CHECK(mean_matrix_entry(built.spec, TypeId{0}, TypeId{1}) ==
              doctest::Approx(0.9 * 3 * 0.5));
        CHECK(mean_matrix_entry(built.spec, TypeId{1}, TypeId{1}) ==
              doctest::Approx(0.9 * 3));
        CHECK(built.singleton_family.size() == 2);
        CHECK(built.singleton_family[1].contains(TypeId{1}));
        CHECK_FALSE(built.singleton_family[1].contains(TypeId{0}));
    }
    SUBCASE("edgeless single vertex keeps all mass") {
        auto built = canonical_process_from_dag(1, {}, 0.8);
        CHECK(mean_matrix_entry(built.spec, TypeId{0}, TypeId{0}) ==
              doctest::Approx(2.4));
    }
    SUBCASE("rejects cycles and weak branching") {
        CHECK_THROWS_AS(canonical_process_from_dag(2, {{0, 1}, {1, 0}}, 0.9),
                        std::invalid_argument);
        CHECK_THROWS_AS(canonical_process_from_dag(1, {}, 0.5),
                        std::invalid_argument);
    }
    SUBCASE("laws are valid distributions") {
        auto built = canonical_process_from_dag(4, {{0, 1}, {0, 2}, {1, 3}}, 0.75);
        for (std::uint64_t v = 0; v < 4; ++v)
            CHECK_NOTHROW(built.spec.law(TypeId{v}).validate());
    }
}

TEST_SUITE_END();
