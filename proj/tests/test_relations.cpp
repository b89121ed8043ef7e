#include <cmath>

#include "doctest.h"
#include "gwext/examples.hpp"
#include "gwext/relations.hpp"
#include "helpers.hpp"

using namespace gwext;
using namespace gwext::testing;
namespace ex = gwext::examples;

TEST_SUITE_BEGIN("relations");

namespace {

ProbVector take_prefix(const ExtinctionResult& r, std::uint64_t n) {
    return ProbVector(Window{n},
                      std::vector<double>(r.vector.values().begin(),
                                          r.vector.values().begin() + n));
}

}  // namespace

TEST_CASE("vector comparison verdicts") {
    const double tol = 1e-4;
    SUBCASE("identical vectors are equivalent") {
        ProbVector a(Window{4}, std::vector<double>{0.1, 0.5, 0.9, 1.0});
        Relation r = compare_extinction_vectors(a, a, tol);
        CHECK(r.kind == RelationKind::equivalent);
    }
    SUBCASE("dominance yields implies") {
        ProbVector a(Window{2}, std::vector<double>{0.8, 0.9});
        ProbVector b(Window{2}, std::vector<double>{0.5, 0.9});
        CHECK(compare_extinction_vectors(a, b, tol).kind ==
              RelationKind::implies);
        CHECK(compare_extinction_vectors(b, a, tol).kind ==
              RelationKind::implied_by);
    }
    SUBCASE("crossings yield incomparable") {
        ProbVector a(Window{2}, std::vector<double>{0.8, 0.2});
        ProbVector b(Window{2}, std::vector<double>{0.2, 0.8});
        CHECK(compare_extinction_vectors(a, b, tol).kind ==
              RelationKind::incomparable);
    }
    SUBCASE("margins in the gray band are surfaced as indeterminate") {
        ProbVector a(Window{1}, std::vector<double>{0.50020});
        ProbVector b(Window{1}, std::vector<double>{0.5});
        CHECK(compare_extinction_vectors(a, b, tol).kind ==
              RelationKind::indeterminate);
    }
    SUBCASE("window mismatch is rejected") {
        ProbVector a(Window{1}, 0.5);
        ProbVector b(Window{2}, 0.5);
        CHECK_THROWS_AS(compare_extinction_vectors(a, b, tol),
                        std::invalid_argument);
    }
    SUBCASE("swap symmetry on random vectors") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> av(6), bv(6);
            for (int i = 0; i < 6; ++i) {
                av[i] = unit(rng);
                bv[i] = unit(rng);
            }
            ProbVector a(Window{6}, av), b(Window{6}, bv);
            RelationKind fwd = compare_extinction_vectors(a, b, tol).kind;
            RelationKind rev = compare_extinction_vectors(b, a, tol).kind;
            switch (fwd) {
                case RelationKind::implies:
                    CHECK(rev == RelationKind::implied_by);
                    break;
                case RelationKind::implied_by:
                    CHECK(rev == RelationKind::implies);
                    break;
                default:
                    CHECK(rev == fwd);
            }
        }
    }
}

TEST_CASE("level verdicts across the three regimes") {
    SolveConfig cfg;
    cfg.trunc_tol = 1e-6;
    const double tol = 1e-4;
    auto verdict = [&](double r) {
        ex::LevelPhaseParams params{0.1, 0.5, r};
        ProcessSpec spec = ex::level_phase_process(params);
        auto q1 = solve_q(spec, ex::level_subset(1), cfg);
        auto q2 = solve_q(spec, ex::level_subset(2), cfg);
        return compare_extinction_vectors(take_prefix(q1, 16),
                                          take_prefix(q2, 16), tol)
            .kind;
    };
    CHECK(verdict(0.05) == RelationKind::equivalent);
    CHECK(verdict(1.0) == RelationKind::implied_by);  // higher level implies lower
    CHECK(verdict(1.5) == RelationKind::incomparable);
}

TEST_CASE("ratio infimum") {
    SUBCASE("identical vectors give one") {
        ProbVector a(Window{3}, std::vector<double>{0.2, 0.5, 0.8});
        auto out = ratio_infimum(a, a, Window{3});
        CHECK_FALSE(out.empty_eligible);
        CHECK(out.value == doctest::Approx(1.0));
    }
    SUBCASE("vanishing numerator gives zero") {
        ProbVector a(Window{2}, std::vector<double>{0.5, 0.9});
        ProbVector b(Window{2}, 1.0);
        auto out = ratio_infimum(a, b, Window{2});
        CHECK(out.value == doctest::Approx(0.0));
    }
    SUBCASE("all-ones first vector leaves nothing eligible") {
        ProbVector a(Window{2}, 1.0);
        ProbVector b(Window{2}, 0.5);
        auto out = ratio_infimum(a, b, Window{2});
        CHECK(out.empty_eligible);
        CHECK(out.eligible_count == 0);
    }
    SUBCASE("decreasing trend across growing windows at r=1") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.0};
        ProcessSpec spec = ex::level_phase_process(params);
        SolveConfig cfg;
        cfg.trunc_tol = 1e-6;
        cfg.reporting_window = 64;
        auto q1 = solve_q(spec, ex::level_subset(1), cfg);
        auto q2 = solve_q(spec, ex::level_subset(2), cfg);
        std::uint64_t n = std::min<std::uint64_t>(
            {64, q1.vector.size(), q2.vector.size()});
        ProbVector a(Window{n}, std::vector<double>(q1.vector.values().begin(),
                                                    q1.vector.values().begin() + n));
        ProbVector b(Window{n}, std::vector<double>(q2.vector.values().begin(),
                                                    q2.vector.values().begin() + n));
        double v16 = ratio_infimum(a, b, Window{16}).value;
        double v32 = ratio_infimum(a, b, Window{32}).value;
        double v64 = ratio_infimum(a, b, Window{64}).value;
        CHECK(v32 <= v16 + 1e-12);
        CHECK(v64 <= v32 + 1e-12);
        CHECK(v64 < v16);
    }
    SUBCASE("equivalent vectors keep the infimum near one") {
        ProbVector a(Window{3}, std::vector<double>{0.2, 0.5, 0.8});
        std::vector<double> bv = {0.20004, 0.49996, 0.80004};
        ProbVector b(Window{3}, bv);
        const double tol = 1e-3;
        REQUIRE(compare_extinction_vectors(a, b, tol).kind ==
                RelationKind::equivalent);
        CHECK(ratio_infimum(a, b, Window{3}).value >= 1.0 - 10 * tol);
    }
}

TEST_CASE("singleton test on the zeroed map") {
    SolveConfig cfg;
    SUBCASE("whole typeset trivially collapses") {
        auto out = singleton_test(cubic_process(), full_subset(), Window{1}, cfg);
        CHECK(out.singleton);
        CHECK(out.gap == 0.0);
    }
    SUBCASE("unreachable island splits the pair") {
        auto out = singleton_test(cubic_with_unreachable(), only_type(1),
                                  Window{2}, cfg);
        CHECK_FALSE(out.singleton);
        CHECK(out.gap == doctest::Approx(1.0 - 0.6180339887498949).epsilon(1e-8));
    }
    SUBCASE("subcritical irreducible pair collapses") {
        ProcessSpec sub("sub", 2, [](TypeId t) {
            return product_law({CountComponent::bernoulli(
                TypeId{1 - t.index}, 0.45)});
        });
        auto out = singleton_test(sub, only_type(1), Window{2}, cfg);
        CHECK(out.singleton);
    }
    SUBCASE("level-zero avoidance across the two regimes") {
        SolveConfig wide = cfg;
        for (double r : {0.5, 1.5}) {
            ex::LevelPhaseParams params{0.1, 0.5, r};
            ProcessSpec spec = ex::level_phase_process(params);
            auto out = singleton_test(spec, ex::level_subset(0), Window{1024},
                                      wide);
            if (r < 1.0)
                CHECK(out.singleton);
            else
                CHECK(out.gap > 0.05);
        }
    }
}

TEST_CASE("mc relation check") {
    MCConfig mc;
    mc.trials = 4000;
    mc.seed = 99;
    SUBCASE("survival and extinction in the same set is impossible") {
        auto est = mc_relation_check(cubic_process(), TypeId{0}, only_type(0),
                                     only_type(0), mc);
        CHECK(est.point == 0.0);
        CHECK(est.successes == 0);
    }
    SUBCASE("lattice walk survival avoiding the bottom level") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.5};
        ProcessSpec spec = ex::level_phase_process(params);
        MCConfig wide = mc;
        wide.horizon = 120;
        auto est = mc_relation_check(spec, ex::grid_type(1, 1), full_subset(),
                                     ex::level_subset(0), wide);
        CHECK(est.ci_low > 0.0);
    }
    SUBCASE("no survival avoiding the bottom level in the descent regime") {
        ex::LevelPhaseParams params{0.1, 0.5, 0.5};
        ProcessSpec spec = ex::level_phase_process(params);
        MCConfig wide = mc;
        wide.horizon = 60;
        auto est = mc_relation_check(spec, ex::grid_type(1, 1), full_subset(),
                                     ex::level_subset(0), wide);
        CHECK(est.point < 0.002);
        CHECK(est.ci_high < 0.01);
    }
}

TEST_CASE("family regularity report") {
    SolveConfig cfg;
    cfg.trunc_tol = 1e-5;
    FamilyCheckOptions opts;
    SUBCASE("levels one to five at r=1 pass the core conditions") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.0};
        ProcessSpec spec = ex::level_phase_process(params);
        auto family = ex::level_family(1, 5);
        std::vector<ExtinctionResult> solved;
        for (const auto& A : family) solved.push_back(solve_q(spec, A, cfg));
        opts.max_union_bits = 5;
        auto report = check_family_conditions(spec, family, solved, Window{16},
                                              cfg, opts);
        CHECK(report.disjoint == ConditionVerdict::pass);
        CHECK(report.nontrivial == ConditionVerdict::pass);
        CHECK(report.pairwise_distinct == ConditionVerdict::pass);
        CHECK(report.union_dominance == ConditionVerdict::advisory_pass);
        CHECK(report.union_separation == ConditionVerdict::advisory_pass);
        CHECK(report.regular_up_to_advisory());
        // Chain structure: higher levels imply lower ones.
        CHECK(report.relation_matrix[2][0] == RelationKind::implies);
        CHECK(report.relation_matrix[0][2] == RelationKind::implied_by);
    }
    SUBCASE("duplicated subset fails disjointness") {
        ProcessSpec spec = cubic_with_unreachable();
        std::vector<SubsetSpec> family = {only_type(0), only_type(0)};
        std::vector<ExtinctionResult> solved;
        for (const auto& A : family) solved.push_back(solve_q(spec, A, cfg));
        auto report =
            check_family_conditions(spec, family, solved, Window{2}, cfg, opts);
        CHECK(report.disjoint == ConditionVerdict::fail);
        CHECK(report.pairwise_distinct == ConditionVerdict::fail);
    }
    SUBCASE("stripe family fails the union separation advisory at r=1.5") {
        ex::LevelPhaseParams params{0.1, 0.5, 1.5};
        ProcessSpec spec = ex::level_phase_process(params);
        auto family = ex::stripe_family(5);
        std::vector<ExtinctionResult> solved;
        for (const auto& A : family) solved.push_back(solve_q(spec, A, cfg));
        FamilyCheckOptions stripe_opts;
        stripe_opts.max_union_bits = 0;  // skip the exponential dominance scan
        stripe_opts.union_excluding = [](std::size_t i) {
            return ex::stripe_complement(i);
        };
        auto report = check_family_conditions(spec, family, solved, Window{16},
                                              cfg, stripe_opts);
        CHECK(report.union_separation == ConditionVerdict::advisory_fail);
    }
}

TEST_SUITE_END();
