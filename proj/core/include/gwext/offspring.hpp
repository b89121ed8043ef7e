#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gwext/types.hpp"

namespace gwext {

// One independent offspring count aimed at a fixed child type.
//
// Geometric(mean m) has support {0,1,2,...} with P(count = n) = (1-t)t^n,
// t = m/(1+m), so P(count >= 1) = m/(1+m) and the pgf is 1/(1+m(1-s)).
struct CountComponent {
    enum class Law { bernoulli, deterministic, geometric, explicit_finite };

    TypeId child;
    Law law = Law::bernoulli;
    double p = 0.0;        // bernoulli success probability
    std::uint32_t n = 0;   // deterministic count
    double mean = 0.0;     // geometric mean
    std::vector<std::pair<std::uint32_t, double>> pmf;  // explicit finite

    static CountComponent bernoulli(TypeId child, double p);
    static CountComponent deterministic(TypeId child, std::uint32_t n);
    static CountComponent geometric(TypeId child, double mean);
    static CountComponent explicit_finite(
        TypeId child, std::vector<std::pair<std::uint32_t, double>> pmf);

    // pgf of the count evaluated at s in [0,1].
    double pgf(double s) const;
    double expected_count() const;
    double prob_zero() const;
    double prob_one() const;

    void validate() const;
};

// A joint outcome: with probability `prob`, the finite multiset `children`
// (child type, count) is produced.
struct JointOutcome {
    double prob = 0.0;
    std::vector<std::pair<TypeId, std::uint32_t>> children;
};

struct ExplicitJointLaw {
    std::vector<JointOutcome> outcomes;
};

// Independent per-child-type counts; component child types are pairwise
// distinct so the pgf is the product of component pgfs.
struct IndependentProductLaw {
    std::vector<CountComponent> components;
};

struct OffspringLaw {
    std::variant<ExplicitJointLaw, IndependentProductLaw> form;

    bool is_joint() const {
        return std::holds_alternative<ExplicitJointLaw>(form);
    }
    const ExplicitJointLaw& joint() const {
        return std::get<ExplicitJointLaw>(form);
    }
    const IndependentProductLaw& product() const {
        return std::get<IndependentProductLaw>(form);
    }

    // Probabilities must sum to 1 within 1e-12 for explicit forms.
    void validate() const;

    // All child types mentioned with positive mean, deduplicated.
    std::vector<TypeId> child_types() const;
};

inline OffspringLaw joint_law(std::vector<JointOutcome> outcomes) {
    return OffspringLaw{ExplicitJointLaw{std::move(outcomes)}};
}

inline OffspringLaw product_law(std::vector<CountComponent> components) {
    return OffspringLaw{IndependentProductLaw{std::move(components)}};
}

// Law with no offspring at all.
inline OffspringLaw barren_law() {
    return joint_law({JointOutcome{1.0, {}}});
}

}  // namespace gwext
