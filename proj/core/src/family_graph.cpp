#include "gwext/family_graph.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace gwext {

std::vector<std::uint32_t> set_members(VertexSet s) {
    std::vector<std::uint32_t> out;
    while (s) {
        std::uint32_t v = static_cast<std::uint32_t>(std::countr_zero(s));
        out.push_back(v);
        s &= s - 1;
    }
    return out;
}

VertexSet set_of(const std::vector<std::uint32_t>& members) {
    VertexSet s = 0;
    for (auto v : members) {
        if (v >= 64) throw std::invalid_argument("vertex index >= 64");
        s |= vertex_bit(v);
    }
    return s;
}

std::string to_string(const CardinalityClass& c) {
    switch (c.tag) {
        case Cardinality::finite:
            return c.count ? "finite(" + std::to_string(*c.count) + ")" : "finite";
        case Cardinality::countably_infinite:
            return "countably-infinite";
        case Cardinality::uncountable:
            return "uncountable";
    }
    return "?";
}

FamilyGraph FamilyGraph::make(
    std::vector<std::string> labels,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    FamilyGraph g;
    if (labels.size() > 64)
        throw std::invalid_argument("FamilyGraph: at most 64 vertices");
    g.labels_ = std::move(labels);
    g.reach_.assign(g.labels_.size(), 0);
    for (auto [i, j] : edges) {
        if (i >= g.size() || j >= g.size())
            throw std::invalid_argument("FamilyGraph: edge endpoint out of range");
        if (i == j) continue;  // reflexivity is implicit
        g.reach_[i] |= vertex_bit(j);
    }
    // Transitive closure.
    for (std::uint32_t k = 0; k < g.size(); ++k)
        for (std::uint32_t i = 0; i < g.size(); ++i)
            if (g.reach_[i] & vertex_bit(k)) g.reach_[i] |= g.reach_[k];
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        g.reach_[i] &= ~vertex_bit(i);
        for (std::uint32_t j = 0; j < g.size(); ++j)
            if (i != j && (g.reach_[i] & vertex_bit(j)) &&
                (g.reach_[j] & vertex_bit(i)))
                throw std::invalid_argument(
                    "FamilyGraph: cycle through " + g.labels_[i] + " and " +
                    g.labels_[j]);
    }
    return g;
}

void FamilyGraph::mark_window_of_infinite(std::string generator_note,
                                          VertexSet open) {
    window_of_infinite_ = true;
    generator_note_ = std::move(generator_note);
    open_ = open & all();
}

FamilyGraph parse_family_graph_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("vertices") || !j.contains("implies"))
        throw std::invalid_argument(
            "family graph json: need \"vertices\" and \"implies\"");
    std::vector<std::string> labels;
    for (const auto& v : j["vertices"]) {
        if (v.is_string())
            labels.push_back(v.get<std::string>());
        else
            labels.push_back(std::to_string(v.get<std::int64_t>()));
    }
    auto index_of = [&](const nlohmann::json& v) -> std::uint32_t {
        std::string key = v.is_string() ? v.get<std::string>()
                                        : std::to_string(v.get<std::int64_t>());
        for (std::uint32_t i = 0; i < labels.size(); ++i)
            if (labels[i] == key) return i;
        throw std::invalid_argument("family graph json: unknown vertex " + key);
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (const auto& e : j["implies"]) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("family graph json: bad edge");
        edges.push_back({index_of(e[0]), index_of(e[1])});
    }
    return FamilyGraph::make(std::move(labels), edges);
}

FamilyGraph load_family_graph_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("family graph: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_family_graph_json(buf.str());
}

AntichainEnumeration primitive_subsets(const FamilyGraph& g,
                                       std::optional<std::uint32_t> max_size,
                                       std::uint64_t guard) {
    const std::uint32_t n = g.size();
    std::vector<VertexSet> comparable(n, 0);
    for (std::uint32_t i = 0; i < n; ++i) {
        comparable[i] = g.reach_strict(i);
        for (std::uint32_t j = 0; j < n; ++j)
            if (j != i && g.edge(j, i)) comparable[i] |= vertex_bit(j);
    }
    AntichainEnumeration out;
    out.antichains.push_back(0);
    // DFS over vertices in index order, pruning comparable successors.
    std::vector<std::pair<VertexSet, std::uint32_t>> stack;  // (current, next v)
    stack.push_back({0, 0});
    while (!stack.empty()) {
        auto [cur, start] = stack.back();
        stack.pop_back();
        for (std::uint32_t v = start; v < n; ++v) {
            if (cur & comparable[v]) continue;
            VertexSet ext = cur | vertex_bit(v);
            if (out.antichains.size() >= guard) {
                out.overflow = true;
                break;
            }
            out.antichains.push_back(ext);
            if (!max_size || std::popcount(ext) < static_cast<int>(*max_size))
                stack.push_back({ext, v + 1});
        }
        if (out.overflow) break;
    }
    std::sort(out.antichains.begin(), out.antichains.end(),
              [](VertexSet a, VertexSet b) {
                  int pa = std::popcount(a), pb = std::popcount(b);
                  if (pa != pb) return pa < pb;
                  return a < b;
              });
    return out;
}

Decomposition decompose(const FamilyGraph& g, VertexSet I) {
    I &= g.all();
    Decomposition d;
    for (std::uint32_t v : set_members(I)) {
        bool implies_other = (g.reach_strict(v) & I & ~vertex_bit(v)) != 0;
        bool open = g.window_of_infinite() && (g.open_vertices() & vertex_bit(v));
        if (!implies_other && !open) d.maximal |= vertex_bit(v);
    }
    for (std::uint32_t v : set_members(I))
        if (g.reach_refl(v) & d.maximal) d.dominated |= vertex_bit(v);
    d.chain_part = I & ~d.dominated;
    return d;
}

VertexSet upward_closure(const FamilyGraph& g, VertexSet I) {
    I &= g.all();
    VertexSet out = I;
    for (std::uint32_t v = 0; v < g.size(); ++v)
        if (g.reach_strict(v) & I) out |= vertex_bit(v);
    return out;
}

bool equivalent(const FamilyGraph& g, VertexSet I, VertexSet J) {
    I &= g.all();
    J &= g.all();
    for (std::uint32_t v : set_members(I))
        if ((g.reach_refl(v) & J) == 0) return false;
    for (std::uint32_t v : set_members(J))
        if ((g.reach_refl(v) & I) == 0) return false;
    return true;
}

std::pair<VertexSet, VertexSet> class_signature(const FamilyGraph& g,
                                                VertexSet I) {
    Decomposition d = decompose(g, I);
    return {d.maximal, upward_closure(g, d.chain_part)};
}

IaVerdict is_IA_element(const FamilyGraph& g, VertexSet I, VertexSet J) {
    IaVerdict out;
    I &= g.all();
    J &= g.all();
    Decomposition di = decompose(g, I);
    if (di.maximal != I) {
        out.verdict = TernaryVerdict::precondition_failed;
        out.reason = "first component is not primitive";
        return out;
    }
    Decomposition dj = decompose(g, J);
    if (dj.chain_part != J) {
        if (g.window_of_infinite()) {
            out.caveats.push_back(
                "chain-representative check is advisory on a window of an "
                "infinite graph");
        }
        out.verdict = TernaryVerdict::precondition_failed;
        out.reason = "second component is not a pure chain part in the window";
        return out;
    }
    if (upward_closure(g, J) != J) {
        out.verdict = TernaryVerdict::precondition_failed;
        out.reason = "second component is not upward closed";
        return out;
    }
    if (g.window_of_infinite())
        out.caveats.push_back(
            "window of an infinite graph: verdict reflects the window only");
    if ((I & J) != 0) {
        out.verdict = TernaryVerdict::no;
        out.reason = "components intersect";
        return out;
    }
    VertexSet rest = J & ~upward_closure(g, I);
    if (upward_closure(g, rest) != J) {
        out.verdict = TernaryVerdict::no;
        out.reason = "closure of the residual chain differs from the chain";
        return out;
    }
    out.verdict = TernaryVerdict::yes;
    return out;
}

std::vector<std::vector<VertexSet>> enumerate_classes_bruteforce(
    const FamilyGraph& g) {
    if (g.size() > 16)
        throw std::invalid_argument(
            "enumerate_classes_bruteforce: guarded at 16 vertices");
    const std::uint64_t total = std::uint64_t{1} << g.size();
    std::vector<VertexSet> reps;
    std::vector<std::vector<VertexSet>> classes;
    for (std::uint64_t s = 0; s < total; ++s) {
        bool placed = false;
        for (std::size_t c = 0; c < reps.size(); ++c) {
            if (equivalent(g, reps[c], s)) {
                classes[c].push_back(s);
                placed = true;
                break;
            }
        }
        if (!placed) {
            reps.push_back(s);
            classes.push_back({s});
        }
    }
    return classes;
}

std::vector<std::pair<VertexSet, VertexSet>> enumerate_IA_finite(
    const FamilyGraph& g) {
    if (g.window_of_infinite())
        throw std::invalid_argument(
            "enumerate_IA_finite: graph is a window of an infinite family; "
            "use windowed analysis with explicit descriptors");
    AntichainEnumeration prim = primitive_subsets(g);
    if (prim.overflow)
        throw std::runtime_error("enumerate_IA_finite: antichain guard tripped");
    std::vector<std::pair<VertexSet, VertexSet>> out;
    out.reserve(prim.antichains.size());
    for (VertexSet p : prim.antichains) out.push_back({p, 0});
    return out;
}

CardinalityClass ext_cardinality(const CardinalityClass& primitive,
                                 const CardinalityClass& chains) {
    if (primitive.tag == Cardinality::uncountable ||
        chains.tag == Cardinality::uncountable)
        return CardinalityClass::uncountable();
    if (primitive.tag == Cardinality::countably_infinite ||
        chains.tag == Cardinality::countably_infinite)
        return CardinalityClass::countably_infinite();
    // Both finite. The extended index set equals the primitive collection
    // when the only chain representative is the empty set.
    if (chains.count && *chains.count == 1 && primitive.count)
        return CardinalityClass::finite(*primitive.count);
    return CardinalityClass::finite();
}

ChainReport detect_ascending_chains(const FamilyGraph& window,
                                    const FamilyGraph& growth) {
    auto longest_path = [](const FamilyGraph& g) -> std::uint64_t {
        // Longest chain in vertices. The closure makes every reachable
        // vertex adjacent, so chain length = longest path in the DAG.
        std::vector<std::int64_t> memo(g.size(), -1);
        std::uint64_t best = 0;
        std::function<std::uint64_t(std::uint32_t)> depth =
            [&](std::uint32_t v) -> std::uint64_t {
            if (memo[v] >= 0) return static_cast<std::uint64_t>(memo[v]);
            std::uint64_t d = 1;
            for (std::uint32_t w : set_members(g.reach_strict(v)))
                d = std::max(d, 1 + depth(w));
            memo[v] = static_cast<std::int64_t>(d);
            return d;
        };
        for (std::uint32_t v = 0; v < g.size(); ++v)
            best = std::max(best, depth(v));
        return best;
    };
    ChainReport report;
    report.longest_path_first = window.size() ? longest_path(window) : 0;
    report.longest_path_second = growth.size() ? longest_path(growth) : 0;
    if (!window.window_of_infinite() && !growth.window_of_infinite()) {
        report.probable_chain = false;
        report.note = "none: full finite graph has no ascending chains";
        return report;
    }
    report.probable_chain =
        report.longest_path_second > report.longest_path_first;
    report.note = report.probable_chain
                      ? "longest path grows with the window; probable "
                        "ascending chain (advisory)"
                      : "no growth observed between windows (advisory)";
    return report;
}

}  // namespace gwext
