#include "gwext/offspring.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gwext {

CountComponent CountComponent::bernoulli(TypeId child, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bernoulli: p outside [0,1]");
    CountComponent c;
    c.child = child;
    c.law = Law::bernoulli;
    c.p = p;
    return c;
}

CountComponent CountComponent::deterministic(TypeId child, std::uint32_t n) {
    CountComponent c;
    c.child = child;
    c.law = Law::deterministic;
    c.n = n;
    return c;
}

CountComponent CountComponent::geometric(TypeId child, double mean) {
    if (!(mean > 0.0))
        throw std::invalid_argument("geometric: mean must be positive");
    CountComponent c;
    c.child = child;
    c.law = Law::geometric;
    c.mean = mean;
    return c;
}

CountComponent CountComponent::explicit_finite(
    TypeId child, std::vector<std::pair<std::uint32_t, double>> pmf) {
    CountComponent c;
    c.child = child;
    c.law = Law::explicit_finite;
    c.pmf = std::move(pmf);
    c.validate();
    return c;
}

double CountComponent::pgf(double s) const {
    switch (law) {
        case Law::bernoulli:
            return (1.0 - p) + p * s;
        case Law::deterministic: {
            double r = 1.0;
            for (std::uint32_t i = 0; i < n; ++i) r *= s;
            return r;
        }
        case Law::geometric:
            return 1.0 / (1.0 + mean * (1.0 - s));
        case Law::explicit_finite: {
            double acc = 0.0;
            for (const auto& [count, prob] : pmf) {
                double r = 1.0;
                for (std::uint32_t i = 0; i < count; ++i) r *= s;
                acc += prob * r;
            }
            return acc;
        }
    }
    return 1.0;
}

double CountComponent::expected_count() const {
    switch (law) {
        case Law::bernoulli:
            return p;
        case Law::deterministic:
            return static_cast<double>(n);
        case Law::geometric:
            return mean;
        case Law::explicit_finite: {
            double acc = 0.0;
            for (const auto& [count, prob] : pmf) acc += prob * count;
            return acc;
        }
    }
    return 0.0;
}

double CountComponent::prob_zero() const {
    switch (law) {
        case Law::bernoulli:
            return 1.0 - p;
        case Law::deterministic:
            return n == 0 ? 1.0 : 0.0;
        case Law::geometric:
            return 1.0 / (1.0 + mean);
        case Law::explicit_finite: {
            double acc = 0.0;
            for (const auto& [count, prob] : pmf)
                if (count == 0) acc += prob;
            return acc;
        }
    }
    return 1.0;
}

double CountComponent::prob_one() const {
    switch (law) {
        case Law::bernoulli:
            return p;
        case Law::deterministic:
            return n == 1 ? 1.0 : 0.0;
        case Law::geometric: {
            double theta = mean / (1.0 + mean);
            return (1.0 - theta) * theta;
        }
        case Law::explicit_finite: {
            double acc = 0.0;
            for (const auto& [count, prob] : pmf)
                if (count == 1) acc += prob;
            return acc;
        }
    }
    return 0.0;
}

void CountComponent::validate() const {
    switch (law) {
        case Law::bernoulli:
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("bernoulli: p outside [0,1]");
            break;
        case Law::deterministic:
            break;
        case Law::geometric:
            if (!(mean > 0.0))
                throw std::invalid_argument("geometric: mean must be positive");
            break;
        case Law::explicit_finite: {
            double total = 0.0;
            for (const auto& [count, prob] : pmf) {
                (void)count;
                if (prob < 0.0)
                    throw std::invalid_argument(
                        "explicit count pmf: negative probability");
                total += prob;
            }
            if (std::abs(total - 1.0) > 1e-12)
                throw std::invalid_argument(
                    "explicit count pmf: probabilities must sum to 1");
            break;
        }
    }
}

void OffspringLaw::validate() const {
    if (is_joint()) {
        double total = 0.0;
        for (const auto& o : joint().outcomes) {
            if (o.prob < 0.0)
                throw std::invalid_argument("joint law: negative probability");
            total += o.prob;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("joint law: probabilities must sum to 1");
    } else {
        std::set<std::uint64_t> seen;
        for (const auto& c : product().components) {
            c.validate();
            if (!seen.insert(c.child.index).second)
                throw std::invalid_argument(
                    "product law: duplicate child type across components");
        }
    }
}

std::vector<TypeId> OffspringLaw::child_types() const {
    std::set<std::uint64_t> out;
    if (is_joint()) {
        for (const auto& o : joint().outcomes)
            for (const auto& [child, count] : o.children)
                if (count > 0 && o.prob > 0.0) out.insert(child.index);
    } else {
        for (const auto& c : product().components)
            if (c.expected_count() > 0.0) out.insert(c.child.index);
    }
    std::vector<TypeId> v;
    v.reserve(out.size());
    for (auto i : out) v.push_back(TypeId{i});
    return v;
}

}  // namespace gwext
