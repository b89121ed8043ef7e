#include "gwext/process.hpp"

#include <algorithm>
#include <cmath>
#include <stack>
#include <stdexcept>

namespace gwext {

ProcessSpec::ProcessSpec(std::string name, std::uint64_t type_count,
                         std::function<OffspringLaw(TypeId)> law_of,
                         std::function<std::string(TypeId)> label)
    : name_(std::move(name)),
      type_count_(type_count),
      law_of_(std::move(law_of)),
      label_(std::move(label)) {
    if (!law_of_) throw std::invalid_argument("ProcessSpec: law provider required");
}

OffspringLaw ProcessSpec::law(TypeId t) const {
    if (!in_typeset(t))
        throw std::domain_error("ProcessSpec: type " + std::to_string(t.index) +
                                " outside typeset");
    return law_of_(t);
}

std::string ProcessSpec::label(TypeId t) const {
    if (label_) return label_(t);
    return std::to_string(t.index);
}

namespace {

double value_at(const ProbVector& s, TypeId t, double outside_value) {
    if (s.window().contains(t)) return s[t];
    return outside_value;
}

double eval_law_at(const OffspringLaw& law, const ProbVector& s,
                   double outside_value) {
    if (law.is_joint()) {
        double acc = 0.0;
        for (const auto& o : law.joint().outcomes) {
            double term = o.prob;
            for (const auto& [child, count] : o.children) {
                double v = value_at(s, child, outside_value);
                for (std::uint32_t i = 0; i < count && term != 0.0; ++i)
                    term *= v;
            }
            acc += term;
        }
        return acc;
    }
    double acc = 1.0;
    for (const auto& c : law.product().components)
        acc *= c.pgf(value_at(s, c.child, outside_value));
    return acc;
}

}  // namespace

ProbVector eval_generating_function(const ProcessSpec& spec, const ProbVector& s,
                                    const std::vector<TypeId>& at,
                                    double outside_value) {
    if (!(outside_value >= 0.0 && outside_value <= 1.0))
        throw std::invalid_argument("outside_value must lie in [0,1]");
    std::vector<double> out;
    out.reserve(at.size());
    for (TypeId x : at) {
        if (!spec.in_typeset(x))
            throw std::domain_error("eval_generating_function: unknown type");
        out.push_back(eval_law_at(spec.law(x), s, outside_value));
    }
    Window result_window{out.size()};
    return ProbVector(result_window, std::move(out));
}

double mean_matrix_entry(const ProcessSpec& spec, TypeId x, TypeId y) {
    if (!spec.in_typeset(x) || !spec.in_typeset(y))
        throw std::domain_error("mean_matrix_entry: unknown type");
    const OffspringLaw law = spec.law(x);
    if (law.is_joint()) {
        double acc = 0.0;
        for (const auto& o : law.joint().outcomes)
            for (const auto& [child, count] : o.children)
                if (child == y) acc += o.prob * count;
        return acc;
    }
    double acc = 0.0;
    for (const auto& c : law.product().components)
        if (c.child == y) acc += c.expected_count();
    return acc;
}

TypeGraph type_graph(const ProcessSpec& spec, const Window& window) {
    if (window.size == 0)
        throw std::invalid_argument("type_graph: window must be nonempty");
    TypeGraph g;
    g.window = window;
    g.out.resize(window.size);
    for (std::uint64_t i = 0; i < window.size; ++i) {
        const OffspringLaw law = spec.law(TypeId{i});
        for (TypeId child : law.child_types())
            if (window.contains(child))
                g.out[i].push_back(static_cast<std::uint32_t>(child.index));
        std::sort(g.out[i].begin(), g.out[i].end());
        g.out[i].erase(std::unique(g.out[i].begin(), g.out[i].end()),
                       g.out[i].end());
    }
    return g;
}

namespace {

// Iterative Tarjan SCC.
std::vector<std::vector<std::uint32_t>> strongly_connected(
    const std::vector<std::vector<std::uint32_t>>& adj) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    std::vector<std::int64_t> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::vector<std::uint32_t>> comps;
    std::int64_t counter = 0;

    struct Frame {
        std::uint32_t v;
        std::size_t edge;
    };
    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                std::uint32_t w = adj[f.v][f.edge++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    std::vector<std::uint32_t> comp;
                    while (true) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp.push_back(w);
                        if (w == f.v) break;
                    }
                    std::sort(comp.begin(), comp.end());
                    comps.push_back(std::move(comp));
                }
                std::uint32_t v = f.v;
                call.pop_back();
                if (!call.empty())
                    low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }
    std::sort(comps.begin(), comps.end());
    return comps;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> irreducible_classes(
    const ProcessSpec& spec, const Window& window) {
    if (window.size == 0) return {};
    return strongly_connected(type_graph(spec, window).out);
}

NonSingularReport is_non_singular(const ProcessSpec& spec, const Window& window) {
    NonSingularReport report;
    if (window.size == 0) return report;
    auto classes = irreducible_classes(spec, window);
    for (const auto& cls : classes) {
        std::vector<bool> in_class(window.size, false);
        for (auto v : cls) in_class[v] = true;
        bool found_freeing_member = false;
        for (auto y : cls) {
            // P_y(exactly one child falls in y's irreducible class).
            const OffspringLaw law = spec.law(TypeId{y});
            double p_one;
            if (law.is_joint()) {
                p_one = 0.0;
                for (const auto& o : law.joint().outcomes) {
                    std::uint64_t in_count = 0;
                    for (const auto& [child, count] : o.children)
                        if (window.contains(child) && in_class[child.index])
                            in_count += count;
                    if (in_count == 1) p_one += o.prob;
                }
            } else {
                double all_zero = 1.0;
                p_one = 0.0;
                std::vector<const CountComponent*> relevant;
                for (const auto& c : law.product().components)
                    if (window.contains(c.child) && in_class[c.child.index])
                        relevant.push_back(&c);
                for (const auto* c : relevant) all_zero *= c->prob_zero();
                for (const auto* c : relevant) {
                    double pz = c->prob_zero();
                    double others = pz > 0.0 ? all_zero / pz : 0.0;
                    if (pz == 0.0) {
                        others = 1.0;
                        for (const auto* d : relevant)
                            if (d != c) others *= d->prob_zero();
                    }
                    p_one += c->prob_one() * others;
                }
            }
            if (p_one < 1.0 - 1e-15) {
                found_freeing_member = true;
                break;
            }
        }
        if (!found_freeing_member) {
            report.non_singular = false;
            report.violating_classes.push_back(cls);
        }
    }
    return report;
}

bool is_irreducible_on(const ProcessSpec& spec, const Window& window) {
    return irreducible_classes(spec, window).size() == 1;
}

CanonicalDagProcess canonical_process_from_dag(
    std::uint32_t vertex_count,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges,
    double b) {
    if (!(b > 2.0 / 3.0 && b <= 1.0))
        throw std::invalid_argument(
            "canonical_process_from_dag: b must lie in (2/3, 1]");
    std::vector<std::vector<std::uint32_t>> out(vertex_count);
    std::vector<std::uint32_t> indeg(vertex_count, 0);
    for (auto [u, v] : edges) {
        if (u >= vertex_count || v >= vertex_count)
            throw std::invalid_argument("canonical_process_from_dag: bad edge");
        if (u == v)
            throw std::invalid_argument(
                "canonical_process_from_dag: input contains a self-loop");
        out[u].push_back(v);
        ++indeg[v];
    }
    // Kahn's algorithm; leftovers mean a cycle.
    {
        std::vector<std::uint32_t> q;
        for (std::uint32_t v = 0; v < vertex_count; ++v)
            if (indeg[v] == 0) q.push_back(v);
        std::uint32_t seen = 0;
        auto deg = indeg;
        while (!q.empty()) {
            std::uint32_t v = q.back();
            q.pop_back();
            ++seen;
            for (auto w : out[v])
                if (--deg[w] == 0) q.push_back(w);
        }
        if (seen != vertex_count)
            throw std::invalid_argument(
                "canonical_process_from_dag: input graph has a cycle");
    }

    // Expand "3 children placed i.i.d." into an explicit joint law.
    auto laws = std::make_shared<std::vector<OffspringLaw>>();
    laws->reserve(vertex_count);
    for (std::uint32_t v = 0; v < vertex_count; ++v) {
        std::vector<TypeId> targets{TypeId{v}};
        std::vector<double> weights;
        if (out[v].empty()) {
            weights.push_back(1.0);
        } else {
            weights.push_back(0.5);
            for (auto w : out[v]) {
                targets.push_back(TypeId{w});
                weights.push_back(0.5 / static_cast<double>(out[v].size()));
            }
        }
        std::vector<JointOutcome> outcomes;
        outcomes.push_back(JointOutcome{1.0 - b, {}});
        // Multinomial over placements of 3 children.
        const std::size_t m = targets.size();
        std::vector<std::uint32_t> counts(m, 0);
        auto emit = [&]() {
            double prob = 6.0;  // 3!
            for (std::size_t t = 0; t < m; ++t) {
                for (std::uint32_t i = 2; i <= counts[t]; ++i) prob /= i;
                for (std::uint32_t i = 0; i < counts[t]; ++i) prob *= weights[t];
            }
            JointOutcome o;
            o.prob = b * prob;
            for (std::size_t t = 0; t < m; ++t)
                if (counts[t] > 0) o.children.push_back({targets[t], counts[t]});
            outcomes.push_back(std::move(o));
        };
        std::function<void(std::size_t, std::uint32_t)> rec =
            [&](std::size_t pos, std::uint32_t left) {
                if (pos + 1 == m) {
                    counts[pos] = left;
                    emit();
                    counts[pos] = 0;
                    return;
                }
                for (std::uint32_t c = 0; c <= left; ++c) {
                    counts[pos] = c;
                    rec(pos + 1, left - c);
                }
                counts[pos] = 0;
            };
        rec(0, 3);
        OffspringLaw law = joint_law(std::move(outcomes));
        law.validate();
        laws->push_back(std::move(law));
    }

    ProcessSpec spec(
        "canonical-dag", vertex_count,
        [laws](TypeId t) { return (*laws)[t.index]; },
        [](TypeId t) { return "v" + std::to_string(t.index); });
    std::vector<SubsetSpec> family;
    family.reserve(vertex_count);
    for (std::uint32_t v = 0; v < vertex_count; ++v)
        family.push_back(SubsetSpec{"{v" + std::to_string(v) + "}",
                                    [v](TypeId t) { return t.index == v; },
                                    true});
    return CanonicalDagProcess{std::move(spec), std::move(family)};
}

}  // namespace gwext
