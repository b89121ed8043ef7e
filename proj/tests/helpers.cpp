#include "helpers.hpp"

#include "gwext/process.hpp"

namespace gwext::testing {

double mean_spectral_radius(const ProcessSpec& spec) {
    const std::uint64_t n = spec.type_count();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j)
            m[i][j] = mean_matrix_entry(spec, TypeId{i}, TypeId{j});
    std::vector<double> v(n, 1.0), w(n);
    double lambda = 0.0;
    for (int it = 0; it < 200; ++it) {
        double norm = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            w[i] = 0.0;
            for (std::uint64_t j = 0; j < n; ++j) w[i] += m[i][j] * v[j];
            norm = std::max(norm, w[i]);
        }
        if (norm == 0.0) return 0.0;
        lambda = norm;
        for (std::uint64_t i = 0; i < n; ++i) v[i] = w[i] / norm;
    }
    return lambda;
}

ProcessSpec random_finite_spec(std::mt19937_64& rng,
                               const RandomSpecOptions& opts) {
    std::uniform_int_distribution<std::uint32_t> type_count(1, opts.max_types);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::uint32_t n = type_count(rng);
        auto laws = std::make_shared<std::vector<OffspringLaw>>();
        for (std::uint32_t t = 0; t < n; ++t) {
            if (unit(rng) < 0.5) {
                // Explicit joint law with 2-4 outcomes.
                std::uint32_t outcomes = 2 + (rng() % 3);
                std::vector<JointOutcome> list;
                double total = 0.0;
                for (std::uint32_t o = 0; o < outcomes; ++o) {
                    JointOutcome out;
                    out.prob = 0.1 + unit(rng);
                    total += out.prob;
                    std::uint32_t kids = rng() % 3;
                    for (std::uint32_t c = 0; c < kids; ++c)
                        out.children.push_back(
                            {TypeId{rng() % n}, 1 + (rng() % 2) % 2});
                    list.push_back(std::move(out));
                }
                // Guarantee a childless outcome so extinction is reachable.
                list[0].children.clear();
                for (auto& o : list) o.prob /= total;
                (*laws).push_back(joint_law(std::move(list)));
            } else {
                std::uint32_t comps = 1 + (rng() % 2);
                std::vector<CountComponent> list;
                std::vector<std::uint32_t> targets;
                for (std::uint32_t c = 0; c < comps; ++c) {
                    std::uint32_t target = rng() % n;
                    bool seen = false;
                    for (auto s : targets) seen = seen || s == target;
                    if (seen) continue;
                    targets.push_back(target);
                    switch (rng() % 3) {
                        case 0:
                            list.push_back(CountComponent::bernoulli(
                                TypeId{target}, 0.8 * unit(rng)));
                            break;
                        case 1:
                            list.push_back(CountComponent::geometric(
                                TypeId{target}, 0.05 + 0.9 * unit(rng)));
                            break;
                        default:
                            list.push_back(CountComponent::explicit_finite(
                                TypeId{target}, {{0, 0.6}, {2, 0.4}}));
                            break;
                    }
                }
                if (list.empty())
                    list.push_back(
                        CountComponent::bernoulli(TypeId{rng() % n}, 0.3));
                (*laws).push_back(product_law(std::move(list)));
            }
        }
        ProcessSpec spec(
            "random", n, [laws](TypeId t) { return (*laws)[t.index]; });
        if (!is_non_singular(spec, Window{n}).non_singular) continue;
        if (opts.bound_criticality) {
            double rho = mean_spectral_radius(spec);
            if (rho > 0.85 && rho < 1.2) continue;
        }
        return spec;
    }
    throw std::runtime_error("random_finite_spec: rejection loop exhausted");
}

}  // namespace gwext::testing
