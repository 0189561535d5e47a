#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace posgame {

// A small fixed graph: the target of the game. Vertices are 0..vertex_count-1,
// edges are stored normalized (u < v, sorted, no duplicates).
struct Pattern {
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }

    bool has_edge(int u, int v) const;
    std::vector<int> degrees() const;

    // adjacency as bitmasks; requires vertex_count <= 32
    std::vector<std::uint32_t> adjacency_masks() const;

    bool is_complete() const;
    bool connected() const;
    bool is_tree() const { return connected() && edge_count() == vertex_count - 1; }
    bool contains_two_adjacent_edges() const; // K_{1,2} subgraph
    bool is_forest() const;

    int induced_edge_count(std::uint32_t vertex_mask) const;

    // vertices with degree >= 1, relabelled 0..m-1; old_label[i] gives the
    // original index. Returns *this unchanged when nothing is isolated.
    Pattern without_isolated(std::vector<int>* old_label = nullptr) const;

    std::string spec_string() const; // round-trippable through pattern_from_spec
};

Pattern make_pattern(int vertex_count, std::vector<std::pair<int, int>> edges);

// Edge-list document: lines "u v", optional leading line "n <count>".
// Throws std::invalid_argument on loops, malformed tokens, or out-of-range
// vertex indices.
Pattern parse_graph(const std::string& text);

// "k4" | "p3" | "s4" | "c5" | "edges:v=<n>:0-1,1-2,..."
Pattern pattern_from_spec(const std::string& spec);

bool patterns_isomorphic(const Pattern& a, const Pattern& b);

// Profile of one subgraph candidate: order, size, completeness, and whether
// it is H itself (same vertex set and all edges).
struct SubgraphProfile {
    int v = 0;
    int e = 0;
    bool clique = false;
    bool full = false;

    friend bool operator==(const SubgraphProfile&, const SubgraphProfile&) = default;
    friend auto operator<=>(const SubgraphProfile&, const SubgraphProfile&) = default;
};

// Reduced enumeration over vertex subsets: every induced profile, plus the
// densest non-clique profile (clique minus one edge) for complete subsets.
// Sufficient for g1/g2/m/m2/f because each objective is monotone in e' at
// fixed v'; the exhaustive edge-subset oracle lives in the tests.
// Enforces vertex_count <= 10.
std::vector<SubgraphProfile> candidate_subgraphs(const Pattern& h);

} // namespace posgame
