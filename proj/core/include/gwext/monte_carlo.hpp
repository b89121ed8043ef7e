#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gwext/process.hpp"
#include "gwext/types.hpp"

namespace gwext {

struct MCConfig {
    std::uint64_t trials = 10'000;
    std::uint64_t horizon = 200;         // max generations per run
    std::uint64_t population_cap = 100'000;  // total individuals per generation
    std::uint64_t seed = 1;
    double ci_level = 0.95;

    void validate() const;
};

struct MCEstimate {
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t trials = 0;
    double censored_fraction = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
    std::uint64_t censored = 0;

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

enum class Terminal { extinct, cap_exceeded, horizon };

struct TrajectorySummary {
    std::uint64_t generations_run = 0;
    // First generation from which the target set stayed empty to the end of
    // the run; absent while the set is still occupied.
    std::optional<std::uint64_t> extinct_in_A_at;
    bool visited_B = false;
    Terminal terminal = Terminal::extinct;
    std::uint64_t final_population = 0;
    std::uint64_t final_a_count = 0;
    std::uint64_t final_b_count = 0;
    // Meaningful only when the run ends alive with A empty: true when some
    // survivor could still place a descendant in A.
    bool a_repopulable = false;
};

// Deterministic per-trial random stream (splitmix64). Streams derived from
// the same master seed are reproducible regardless of scheduling; the seed
// is scrambled so per-trial streams start at scattered orbit positions
// rather than consecutive ones.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(scramble(seed)) {}
    static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial) {
        return RngStream(master_seed + 0x9E3779B97F4A7C15ULL * (trial + 1));
    }
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0,1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t scramble(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

enum class McEvent {
    survive_A_never_visit_B,
    survive_A_extinct_B,
    never_visit_B,
};

TrajectorySummary simulate_trajectory(const ProcessSpec& spec, TypeId initial,
                                      const SubsetSpec& A, const SubsetSpec* B,
                                      const MCConfig& mc, RngStream& rng);

// Probability of extinction in A starting from a single type-x individual.
// Runs hitting the cap or horizon with A occupied count as survival; runs
// with A empty but still repopulable are censored, never silently classified.
MCEstimate estimate_extinction(const ProcessSpec& spec, TypeId x,
                               const SubsetSpec& A, const MCConfig& mc);

MCEstimate estimate_event(const ProcessSpec& spec, TypeId x, McEvent event,
                          const SubsetSpec& A, const SubsetSpec& B,
                          const MCConfig& mc);

// Wilson score interval bounds for k successes in n trials.
double wilson_lower(std::uint64_t k, std::uint64_t n, double ci_level);
double wilson_upper(std::uint64_t k, std::uint64_t n, double ci_level);

}  // namespace gwext
