#include "gwext/monte_carlo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace gwext {

void MCConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("MCConfig: trials >= 1");
    if (horizon < 1) throw std::invalid_argument("MCConfig: horizon >= 1");
    if (population_cap < 1)
        throw std::invalid_argument("MCConfig: population_cap >= 1");
    if (!(ci_level > 0.0 && ci_level < 1.0))
        throw std::invalid_argument("MCConfig: ci_level in (0,1)");
}

namespace {

// Acklam's rational approximation of the standard normal quantile.
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > phigh) {
        q = std::sqrt(-2 * std::log(1 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

double wilson_bound(std::uint64_t k, std::uint64_t n, double ci_level, bool upper) {
    if (n == 0) return upper ? 1.0 : 0.0;
    if (k == 0 && !upper) return 0.0;
    if (k >= n && upper) return 1.0;
    double z = normal_quantile(0.5 + ci_level / 2.0);
    double phat = static_cast<double>(k) / static_cast<double>(n);
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (phat + z2 / (2.0 * n)) / denom;
    double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    double v = upper ? center + half : center - half;
    if (v < 0.0) v = 0.0;
    if (v > 1.0) v = 1.0;
    return v;
}

std::uint64_t sample_count(const CountComponent& c, RngStream& rng) {
    switch (c.law) {
        case CountComponent::Law::bernoulli:
            return rng.next_unit() < c.p ? 1 : 0;
        case CountComponent::Law::deterministic:
            return c.n;
        case CountComponent::Law::geometric: {
            double theta = c.mean / (1.0 + c.mean);
            double u = rng.next_unit();
            // P(N <= n) = 1 - theta^(n+1)
            double x = std::log1p(-u) / std::log(theta);
            if (!(x >= 0.0)) return 0;
            if (x >= 9e15) return 9'000'000'000'000'000ULL;
            return static_cast<std::uint64_t>(x);
        }
        case CountComponent::Law::explicit_finite: {
            double u = rng.next_unit();
            double acc = 0.0;
            for (const auto& [count, prob] : c.pmf) {
                acc += prob;
                if (u < acc) return count;
            }
            return c.pmf.empty() ? 0 : c.pmf.back().first;
        }
    }
    return 0;
}

struct MemberFlags {
    bool in_a = false;
    bool in_b = false;
};

class TrajectoryEngine {
public:
    TrajectoryEngine(const ProcessSpec& spec, const SubsetSpec& A,
                     const SubsetSpec* B)
        : spec_(spec), a_(A), b_(B) {}

    const MemberFlags& flags(std::uint64_t idx) {
        auto it = member_cache_.find(idx);
        if (it != member_cache_.end()) return it->second;
        MemberFlags f;
        f.in_a = a_.contains(TypeId{idx});
        f.in_b = b_ != nullptr && b_->contains(TypeId{idx});
        return member_cache_.emplace(idx, f).first->second;
    }

    const OffspringLaw& law(std::uint64_t idx) {
        auto it = law_cache_.find(idx);
        if (it != law_cache_.end()) return it->second;
        return law_cache_.emplace(idx, spec_.law(TypeId{idx})).first->second;
    }

    TrajectorySummary run(TypeId initial, const MCConfig& mc, RngStream& rng,
                          const std::function<bool(std::uint64_t)>* reach_a = nullptr);

private:
    const ProcessSpec& spec_;
    const SubsetSpec& a_;
    const SubsetSpec* b_;
    std::unordered_map<std::uint64_t, MemberFlags> member_cache_;
    std::unordered_map<std::uint64_t, OffspringLaw> law_cache_;
};

TrajectorySummary TrajectoryEngine::run(TypeId initial, const MCConfig& mc,
                                        RngStream& rng,
                                        const std::function<bool(std::uint64_t)>* reach_a) {
    TrajectorySummary out;
    std::unordered_map<std::uint64_t, std::uint64_t> population;
    population[initial.index] = 1;
    std::uint64_t total = 1;
    std::uint64_t a_count = flags(initial.index).in_a ? 1 : 0;
    std::uint64_t b_count = flags(initial.index).in_b ? 1 : 0;
    out.visited_B = b_count > 0;
    std::uint64_t last_a_positive_end = a_count > 0 ? 1 : 0;  // gen idx + 1

    for (std::uint64_t gen = 0;; ++gen) {
        if (total == 0) {
            out.terminal = Terminal::extinct;
            out.generations_run = gen;
            break;
        }
        if (total > mc.population_cap) {
            out.terminal = Terminal::cap_exceeded;
            out.generations_run = gen;
            break;
        }
        if (gen >= mc.horizon) {
            out.terminal = Terminal::horizon;
            out.generations_run = gen;
            break;
        }
        std::unordered_map<std::uint64_t, std::uint64_t> next;
        std::uint64_t next_total = 0, next_a = 0, next_b = 0;
        bool capped = false;
        auto add_child = [&](std::uint64_t idx, std::uint64_t count) {
            if (count == 0) return;
            next[idx] += count;
            next_total += count;
            const MemberFlags& f = flags(idx);
            if (f.in_a) next_a += count;
            if (f.in_b) {
                next_b += count;
                out.visited_B = true;
            }
        };
        for (const auto& [idx, count] : population) {
            const OffspringLaw& law = this->law(idx);
            for (std::uint64_t c = 0; c < count && !capped; ++c) {
                if (law.is_joint()) {
                    double u = rng.next_unit();
                    double acc = 0.0;
                    const auto& outcomes = law.joint().outcomes;
                    const JointOutcome* chosen =
                        outcomes.empty() ? nullptr : &outcomes.back();
                    for (const auto& o : outcomes) {
                        acc += o.prob;
                        if (u < acc) {
                            chosen = &o;
                            break;
                        }
                    }
                    if (chosen)
                        for (const auto& [child, cnt] : chosen->children)
                            add_child(child.index, cnt);
                } else {
                    for (const auto& comp : law.product().components)
                        add_child(comp.child.index, sample_count(comp, rng));
                }
                if (next_total > mc.population_cap) capped = true;
            }
            if (capped) break;
        }
        if (capped) {
            // The next generation is only partially built; classify from
            // the last completed one (visits already recorded).
            out.terminal = Terminal::cap_exceeded;
            out.generations_run = gen + 1;
            total += next_total;  // population is over the cap either way
            break;
        }
        population.swap(next);
        total = next_total;
        a_count = next_a;
        b_count = next_b;
        if (a_count > 0) last_a_positive_end = gen + 2;
    }
    out.final_population = total;
    out.final_a_count = a_count;
    out.final_b_count = b_count;
    if (a_count == 0) out.extinct_in_A_at = last_a_positive_end;
    return out;
}

// Which window types can place a descendant in A; types beyond the window
// are conservatively assumed able to.
struct ReachOracle {
    std::uint64_t window = 0;
    std::vector<bool> reaches;

    bool operator()(std::uint64_t idx) const {
        return idx >= window ? true : reaches[idx];
    }
};

ReachOracle build_reach_oracle(const ProcessSpec& spec, const SubsetSpec& A,
                               std::uint64_t fallback_window) {
    ReachOracle oracle;
    oracle.window = spec.finite() ? spec.type_count() : fallback_window;
    std::uint64_t n = oracle.window;
    std::vector<std::vector<std::uint32_t>> parents(n);
    for (std::uint64_t i = 0; i < n; ++i)
        for (TypeId child : spec.law(TypeId{i}).child_types())
            if (child.index < n)
                parents[child.index].push_back(static_cast<std::uint32_t>(i));
    oracle.reaches.assign(n, false);
    std::vector<std::uint32_t> queue;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (A.contains(TypeId{i})) {
            oracle.reaches[i] = true;
            queue.push_back(static_cast<std::uint32_t>(i));
        }
        // An in-window parent of an out-of-window child may reach A through
        // territory we cannot see; stay conservative.
        if (!spec.finite())
            for (TypeId child : spec.law(TypeId{i}).child_types())
                if (child.index >= n && !oracle.reaches[i]) {
                    oracle.reaches[i] = true;
                    queue.push_back(static_cast<std::uint32_t>(i));
                }
    }
    while (!queue.empty()) {
        std::uint32_t v = queue.back();
        queue.pop_back();
        for (std::uint32_t p : parents[v])
            if (!oracle.reaches[p]) {
                oracle.reaches[p] = true;
                queue.push_back(p);
            }
    }
    return oracle;
}

MCEstimate finish_estimate(std::uint64_t successes, std::uint64_t failures,
                           std::uint64_t censored, const MCConfig& mc) {
    MCEstimate e;
    e.trials = mc.trials;
    e.successes = successes;
    e.failures = failures;
    e.censored = censored;
    e.point = static_cast<double>(successes) / static_cast<double>(mc.trials);
    e.censored_fraction =
        static_cast<double>(censored) / static_cast<double>(mc.trials);
    e.ci_low = wilson_lower(successes, mc.trials, mc.ci_level);
    e.ci_high = wilson_upper(successes + censored, mc.trials, mc.ci_level);
    return e;
}

}  // namespace

double wilson_lower(std::uint64_t k, std::uint64_t n, double ci_level) {
    return wilson_bound(k, n, ci_level, false);
}

double wilson_upper(std::uint64_t k, std::uint64_t n, double ci_level) {
    return wilson_bound(k, n, ci_level, true);
}

TrajectorySummary simulate_trajectory(const ProcessSpec& spec, TypeId initial,
                                      const SubsetSpec& A, const SubsetSpec* B,
                                      const MCConfig& mc, RngStream& rng) {
    mc.validate();
    if (!spec.in_typeset(initial))
        throw std::domain_error("simulate_trajectory: unknown initial type");
    TrajectoryEngine engine(spec, A, B);
    return engine.run(initial, mc, rng);
}

MCEstimate estimate_extinction(const ProcessSpec& spec, TypeId x,
                               const SubsetSpec& A, const MCConfig& mc) {
    mc.validate();
    TrajectoryEngine engine(spec, A, nullptr);
    ReachOracle reach = build_reach_oracle(spec, A, 512);
    std::function<bool(std::uint64_t)> reach_fn = [&](std::uint64_t i) {
        return reach(i);
    };
    std::uint64_t successes = 0, failures = 0, censored = 0;
    for (std::uint64_t t = 0; t < mc.trials; ++t) {
        RngStream rng = RngStream::for_trial(mc.seed, t);
        TrajectorySummary run = engine.run(x, mc, rng, &reach_fn);
        if (run.terminal == Terminal::extinct) {
            ++successes;
        } else if (run.final_a_count > 0) {
            ++failures;
        } else if (!run.a_repopulable) {
            ++successes;
        } else {
            ++censored;
        }
    }
    return finish_estimate(successes, failures, censored, mc);
}

MCEstimate estimate_event(const ProcessSpec& spec, TypeId x, McEvent event,
                          const SubsetSpec& A, const SubsetSpec& B,
                          const MCConfig& mc) {
    mc.validate();
    TrajectoryEngine engine(spec, A, &B);
    std::uint64_t successes = 0, failures = 0, censored = 0;
    for (std::uint64_t t = 0; t < mc.trials; ++t) {
        RngStream rng = RngStream::for_trial(mc.seed, t);
        TrajectorySummary run = engine.run(x, mc, rng);
        bool alive = run.terminal != Terminal::extinct;
        bool survive_a = alive && run.final_a_count > 0;
        switch (event) {
            case McEvent::never_visit_B:
                if (!run.visited_B)
                    ++successes;
                else
                    ++failures;
                break;
            case McEvent::survive_A_never_visit_B:
                if (run.visited_B || !alive)
                    ++failures;
                else if (survive_a)
                    ++successes;
                else
                    ++censored;
                break;
            case McEvent::survive_A_extinct_B:
                if (!alive || run.final_b_count > 0)
                    ++failures;
                else if (survive_a)
                    ++successes;
                else
                    ++censored;
                break;
        }
    }
    return finish_estimate(successes, failures, censored, mc);
}

std::string MCEstimate::to_json() const {
    nlohmann::json j;
    j["point"] = point;
    j["ci_low"] = ci_low;
    j["ci_high"] = ci_high;
    j["trials"] = trials;
    j["censored_fraction"] = censored_fraction;
    j["successes"] = successes;
    j["failures"] = failures;
    j["censored"] = censored;
    return j.dump(2);
}

std::string MCEstimate::csv_header() {
    return "point,ci_low,ci_high,trials,censored_fraction";
}

std::string MCEstimate::to_csv_row() const {
    std::ostringstream out;
    out.precision(12);
    out << point << ',' << ci_low << ',' << ci_high << ',' << trials << ','
        << censored_fraction;
    return out.str();
}

}  // namespace gwext
