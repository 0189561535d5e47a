#pragma once

#include "posgame/board.hpp"
#include "posgame/pattern.hpp"

#include <cstdint>
#include <vector>

namespace posgame {

// Adjacency of a claimed edge set, one bit row per board vertex.
struct VertexAdjacency {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> rows;

    VertexAdjacency() = default;
    VertexAdjacency(const Board& board, const EdgeSet& claimed);
    explicit VertexAdjacency(const Pattern& p);

    const std::uint64_t* row(int v) const { return rows.data() + static_cast<size_t>(v) * words; }
    std::uint64_t* row(int v) { return rows.data() + static_cast<size_t>(v) * words; }
    bool adjacent(int u, int v) const { return (row(u)[v >> 6] >> (v & 63)) & 1u; }
    void add_edge(int u, int v)
    {
        row(u)[v >> 6] |= 1ULL << (v & 63);
        row(v)[u >> 6] |= 1ULL << (u & 63);
    }
    void remove_edge(int u, int v)
    {
        row(u)[v >> 6] &= ~(1ULL << (v & 63));
        row(v)[u >> 6] &= ~(1ULL << (u & 63));
    }
    int degree(int v) const;
};

// Injective embeddings of h into the given adjacency (exact count).
std::uint64_t count_injective_embeddings(const VertexAdjacency& g, const Pattern& h);

std::uint64_t automorphism_count(const Pattern& h);

// Unlabeled copies of h in the claimed subgraph: injective embeddings divided
// by |Aut(h)|. Single edges, 2-edge trees and 3-edge stars use closed forms
// over claimed degrees so that counting stays cheap on K_4096-sized boards.
std::uint64_t count_copies(const Board& board, const EdgeSet& claimed, const Pattern& h);

// Copies of h_sub in a blow-up whose vertex labelled j lies in part V_j.
// h_sub carries the base pattern's labels; vertices of degree 0 are ignored
// unless include_isolated is set (then each contributes a factor s).
std::uint64_t count_canonical_copies(const Board& board, const EdgeSet& claimed,
                                     const Pattern& h_sub, bool include_isolated = false);

// All canonical copies of the board's base pattern in the claimed set, as
// vertex tuples (one entry per part) in lexicographic order. Throws when the
// search visits more than max_visits nodes.
std::vector<std::vector<std::uint32_t>> canonical_copies_list(const Board& board,
                                                              const EdgeSet& claimed,
                                                              std::uint64_t max_visits = 10'000'000);

std::vector<int> claimed_degrees(const Board& board, const EdgeSet& claimed);

// Every copy of h on the full board as a sorted element-id set (the explicit
// winning family the solver consumes). Deduplicated; desk-scale boards only.
std::vector<std::vector<Element>> enumerate_copy_sets(const Board& board, const Pattern& h,
                                                      bool canonical = false);

std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

} // namespace posgame
