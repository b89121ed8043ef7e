#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwext {

// Canonical type identifier: the position of a type in its typeset's
// enumeration. Structured keys (grid pairs, tree codes) are decoded by the
// typeset that owns the enumeration.
struct TypeId {
    std::uint64_t index = 0;

    friend bool operator==(TypeId a, TypeId b) { return a.index == b.index; }
    friend bool operator!=(TypeId a, TypeId b) { return a.index != b.index; }
    friend bool operator<(TypeId a, TypeId b) { return a.index < b.index; }
};

// A window is an initial segment of the canonical enumeration.
struct Window {
    std::uint64_t size = 0;

    bool contains(TypeId t) const { return t.index < size; }
};

// Vector of probabilities over a window, indexed by canonical type index.
class ProbVector {
public:
    ProbVector() = default;
    ProbVector(Window w, double fill) : window_(w), values_(w.size, fill) {
        if (fill < 0.0 || fill > 1.0)
            throw std::invalid_argument("ProbVector: fill outside [0,1]");
    }
    ProbVector(Window w, std::vector<double> values)
        : window_(w), values_(std::move(values)) {
        if (values_.size() != window_.size)
            throw std::invalid_argument("ProbVector: size mismatch with window");
        for (double v : values_)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("ProbVector: entry outside [0,1]");
    }

    const Window& window() const { return window_; }
    std::uint64_t size() const { return window_.size; }

    double operator[](TypeId t) const { return values_.at(t.index); }
    double& operator[](TypeId t) { return values_.at(t.index); }
    double at_index(std::uint64_t i) const { return values_.at(i); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    // Sup-norm distance on the common prefix of the two windows.
    static double sup_diff_prefix(const ProbVector& a, const ProbVector& b,
                                  std::uint64_t prefix) {
        std::uint64_t n = std::min({prefix, a.size(), b.size()});
        double d = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            double g = a.values_[i] - b.values_[i];
            if (g < 0) g = -g;
            if (g > d) d = g;
        }
        return d;
    }

private:
    Window window_;
    std::vector<double> values_;
};

// Decidable membership predicate naming a subset of the typeset.
struct SubsetSpec {
    std::string name;
    std::function<bool(TypeId)> member;
    // When true, the subset intersected with any window can be fully listed.
    std::optional<bool> known_finite;

    bool contains(TypeId t) const { return member && member(t); }
};

inline SubsetSpec empty_subset() {
    return SubsetSpec{"empty", [](TypeId) { return false; }, true};
}

inline SubsetSpec full_subset() {
    return SubsetSpec{"all", [](TypeId) { return true; }, false};
}

inline SubsetSpec union_subset(std::string name, std::vector<SubsetSpec> parts) {
    auto shared = std::make_shared<std::vector<SubsetSpec>>(std::move(parts));
    bool fin = true;
    for (const auto& p : *shared) fin = fin && p.known_finite.value_or(false);
    return SubsetSpec{std::move(name),
                      [shared](TypeId t) {
                          for (const auto& p : *shared)
                              if (p.contains(t)) return true;
                          return false;
                      },
                      fin};
}

inline SubsetSpec complement_subset(std::string name, SubsetSpec inner) {
    auto shared = std::make_shared<SubsetSpec>(std::move(inner));
    return SubsetSpec{std::move(name),
                      [shared](TypeId t) { return !shared->contains(t); },
                      std::nullopt};
}

}  // namespace gwext
