#pragma once

#include "posgame/board.hpp"
#include "posgame/counting.hpp"
#include "posgame/pattern.hpp"

#include <bit>
#include <vector>

namespace posgame {

// Injective embeddings of h with two labels pre-pinned; candidates come from
// `g` adjacency. With `canon` set, label j is confined to part j of the
// blow-up (canonical copies).
struct PinnedEnum {
    const VertexAdjacency* g = nullptr;
    const Pattern* h = nullptr;
    const Board* canon = nullptr;
    std::vector<int> order;
    std::vector<std::vector<int>> placed_nbrs; // neighbour labels, by slot
    std::vector<int> image;                    // by label

    template <typename F>
    void run(int label_a, int label_b, int u, int v, F&& cb)
    {
        const int k = h->vertex_count;
        image.assign(k, -1);
        image[label_a] = u;
        image[label_b] = v;
        order.clear();
        auto adj = h->adjacency_masks();
        std::uint32_t placed = (1u << label_a) | (1u << label_b);
        auto deg = h->degrees();
        for (int step = 0; step < k - 2; ++step) {
            int best = -1, bl = -1, bd = -1;
            for (int w = 0; w < k; ++w) {
                if (placed & (1u << w))
                    continue;
                int links = std::popcount(adj[w] & placed);
                if (links > bl || (links == bl && deg[w] > bd)) {
                    best = w;
                    bl = links;
                    bd = deg[w];
                }
            }
            order.push_back(best);
            placed |= 1u << best;
        }
        placed_nbrs.assign(order.size(), {});
        std::uint32_t before = (1u << label_a) | (1u << label_b);
        for (size_t slot = 0; slot < order.size(); ++slot) {
            for (int w = 0; w < k; ++w)
                if ((adj[order[slot]] & (1u << w)) && (before & (1u << w)))
                    placed_nbrs[slot].push_back(w);
            before |= 1u << order[slot];
        }
        rec(0, cb);
    }

private:
    template <typename F>
    void rec(size_t slot, F&& cb)
    {
        if (slot == order.size()) {
            cb(image);
            return;
        }
        int label = order[slot];
        int lo = 0, hi = g->n;
        if (canon) {
            lo = label * canon->part_size;
            hi = lo + canon->part_size;
        }
        for (int x = lo; x < hi; ++x) {
            bool ok = true;
            for (int nbr_label : placed_nbrs[slot])
                if (!g->adjacent(image[nbr_label], x)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            bool dup = false;
            for (int l = 0; l < h->vertex_count; ++l)
                if (image[l] == x) {
                    dup = true;
                    break;
                }
            if (dup)
                continue;
            image[label] = x;
            rec(slot + 1, cb);
            image[label] = -1;
        }
    }
};

} // namespace posgame
