#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gwext/types.hpp"

namespace gwext {

// Subsets of family indices as bitsets; graphs are capped at 64 vertices.
using VertexSet = std::uint64_t;

inline VertexSet vertex_bit(std::uint32_t v) { return VertexSet{1} << v; }
std::vector<std::uint32_t> set_members(VertexSet s);
VertexSet set_of(const std::vector<std::uint32_t>& members);

enum class Cardinality { finite, countably_infinite, uncountable };

struct CardinalityClass {
    Cardinality tag = Cardinality::finite;
    // Exact count, present only when actually counted.
    std::optional<std::uint64_t> count;

    static CardinalityClass finite(std::optional<std::uint64_t> n = std::nullopt) {
        return {Cardinality::finite, n};
    }
    static CardinalityClass countably_infinite() {
        return {Cardinality::countably_infinite, std::nullopt};
    }
    static CardinalityClass uncountable() {
        return {Cardinality::uncountable, std::nullopt};
    }
    friend bool operator==(const CardinalityClass& a, const CardinalityClass& b) {
        return a.tag == b.tag && a.count == b.count;
    }
};
std::string to_string(const CardinalityClass& c);

// Directed graph on family indices whose edges record implication between
// the indexed subsets. Stored transitively closed and irreflexive; vertices
// are reflexive by rule, never by edge. Acyclic apart from trivial loops.
class FamilyGraph {
public:
    static FamilyGraph make(std::vector<std::string> labels,
                            const std::vector<std::pair<std::uint32_t,
                                                        std::uint32_t>>& edges);

    std::uint32_t size() const { return static_cast<std::uint32_t>(labels_.size()); }
    const std::string& label(std::uint32_t v) const { return labels_.at(v); }
    VertexSet all() const {
        return size() == 64 ? ~VertexSet{0} : (VertexSet{1} << size()) - 1;
    }

    // Implication with reflexivity: i implies j.
    bool implies(std::uint32_t i, std::uint32_t j) const {
        return i == j || (reach_[i] & vertex_bit(j)) != 0;
    }
    // Successors of v including v itself.
    VertexSet reach_refl(std::uint32_t v) const {
        return reach_[v] | vertex_bit(v);
    }
    VertexSet reach_strict(std::uint32_t v) const { return reach_[v]; }
    bool edge(std::uint32_t i, std::uint32_t j) const {
        return i != j && (reach_[i] & vertex_bit(j)) != 0;
    }

    // A window of an infinite graph carries the set of vertices whose
    // successors continue beyond the window; such vertices are never treated
    // as maximal inside window subsets.
    void mark_window_of_infinite(std::string generator_note, VertexSet open);
    bool window_of_infinite() const { return window_of_infinite_; }
    const std::string& generator_note() const { return generator_note_; }
    VertexSet open_vertices() const { return open_; }

    void set_descriptors(CardinalityClass primitive, CardinalityClass chains) {
        primitive_card_ = primitive;
        chain_card_ = chains;
    }
    std::optional<CardinalityClass> primitive_descriptor() const {
        return primitive_card_;
    }
    std::optional<CardinalityClass> chain_descriptor() const {
        return chain_card_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<VertexSet> reach_;  // transitive closure, irreflexive
    bool window_of_infinite_ = false;
    std::string generator_note_;
    VertexSet open_ = 0;
    std::optional<CardinalityClass> primitive_card_, chain_card_;
};

// JSON edge list: {"vertices":[...], "implies":[[i,j],...]}; vertices may be
// numbers or strings and edges refer to them by value.
FamilyGraph load_family_graph_json(const std::string& path);
FamilyGraph parse_family_graph_json(const std::string& text);

struct Decomposition {
    VertexSet maximal = 0;    // no implication to another member
    VertexSet dominated = 0;  // implies some maximal member (reflexively)
    VertexSet chain_part = 0; // remainder; lives on ascending chains
};

// Antichains of the implication graph (edgeless induced subgraphs),
// including the empty set and all singletons, sorted by size then by mask.
struct AntichainEnumeration {
    std::vector<VertexSet> antichains;
    bool overflow = false;  // enumeration guard tripped
};
AntichainEnumeration primitive_subsets(
    const FamilyGraph& g, std::optional<std::uint32_t> max_size = std::nullopt,
    std::uint64_t guard = (std::uint64_t{1} << 24));

Decomposition decompose(const FamilyGraph& g, VertexSet I);
VertexSet upward_closure(const FamilyGraph& g, VertexSet I);
bool equivalent(const FamilyGraph& g, VertexSet I, VertexSet J);

// (I_M, (I_c)+): equal signatures characterize equivalent subsets.
std::pair<VertexSet, VertexSet> class_signature(const FamilyGraph& g, VertexSet I);

enum class TernaryVerdict { yes, no, precondition_failed };
struct IaVerdict {
    TernaryVerdict verdict = TernaryVerdict::no;
    std::vector<std::string> caveats;
    std::string reason;
};
// Membership test for the extended index set: I primitive, J a chain
// representative (J = J_c and J = J+), I and J disjoint with
// (J \ I+)+ = J. Chain-representative checks on windows of infinite graphs
// are advisory.
IaVerdict is_IA_element(const FamilyGraph& g, VertexSet I, VertexSet J);

// Oracle: partition all subsets by pairwise `equivalent`; guarded at 16
// vertices. Classes are sorted by their minimal member mask.
std::vector<std::vector<VertexSet>> enumerate_classes_bruteforce(
    const FamilyGraph& g);

// For exact finite graphs the chain representatives reduce to the empty set,
// so the extended index set is primitive_subsets x {empty}.
std::vector<std::pair<VertexSet, VertexSet>> enumerate_IA_finite(
    const FamilyGraph& g);

// Cardinality of the extended index set from descriptors of the primitive
// and chain-representative collections.
CardinalityClass ext_cardinality(const CardinalityClass& primitive,
                                 const CardinalityClass& chains);

struct ChainReport {
    std::uint64_t longest_path_first = 0;   // vertices on the longest path
    std::uint64_t longest_path_second = 0;
    bool probable_chain = false;
    std::string note;
};
// Longest-path growth across two windows of the same generator flags a
// probable ascending chain; exact ("none") for full finite graphs.
ChainReport detect_ascending_chains(const FamilyGraph& window,
                                    const FamilyGraph& growth);

}  // namespace gwext
