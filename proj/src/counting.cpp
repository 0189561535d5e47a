#include "posgame/counting.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace posgame {

VertexAdjacency::VertexAdjacency(const Board& board, const EdgeSet& claimed)
    : n(board.vertex_count)
    , words((board.vertex_count + 63) / 64)
    , rows(static_cast<size_t>(board.vertex_count) * words, 0)
{
    claimed.for_each([&](Element id) {
        auto [u, v] = board.endpoints(id);
        add_edge(u, v);
    });
}

VertexAdjacency::VertexAdjacency(const Pattern& p)
    : n(p.vertex_count)
    , words((p.vertex_count + 63) / 64)
    , rows(static_cast<size_t>(p.vertex_count) * std::max(words, 1), 0)
{
    for (auto [u, v] : p.edges)
        add_edge(u, v);
}

int VertexAdjacency::degree(int v) const
{
    int d = 0;
    for (int w = 0; w < words; ++w)
        d += std::popcount(row(v)[w]);
    return d;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > static_cast<unsigned __int128>(~0ULL))
            throw std::overflow_error("binomial: overflow");
    }
    return static_cast<std::uint64_t>(r);
}

namespace {

    // pivot order: start at max degree, then prefer vertices with the most
    // already-placed neighbours
    std::vector<int> embedding_order(const Pattern& h)
    {
        int k = h.vertex_count;
        auto deg = h.degrees();
        auto adj = h.adjacency_masks();
        std::vector<int> order;
        std::uint32_t placed = 0;
        for (int step = 0; step < k; ++step) {
            int best = -1, best_links = -1, best_deg = -1;
            for (int v = 0; v < k; ++v) {
                if (placed & (1u << v))
                    continue;
                int links = std::popcount(adj[v] & placed);
                if (links > best_links || (links == best_links && deg[v] > best_deg)) {
                    best = v;
                    best_links = links;
                    best_deg = deg[v];
                }
            }
            order.push_back(best);
            placed |= 1u << best;
        }
        return order;
    }

    struct EmbedContext {
        const VertexAdjacency* g;
        int k = 0;
        std::vector<int> order;
        std::vector<std::vector<int>> placed_neighbors; // per slot, indices into image[]
        std::vector<int> image;
        std::vector<std::uint64_t> used;
        std::uint64_t total = 0;
        std::uint64_t visits = 0;
        std::uint64_t max_visits = ~0ULL;
    };

    void embed_rec(EmbedContext& c, int slot)
    {
        const int words = c.g->words;
        if (++c.visits > c.max_visits)
            throw std::runtime_error("embedding cap exceeded");
        const auto& nbrs = c.placed_neighbors[slot];

        if (slot == c.k - 1 && !nbrs.empty()) {
            // closed-form last level
            std::uint64_t cnt = 0;
            for (int w = 0; w < words; ++w) {
                std::uint64_t m = ~c.used[w];
                for (int idx : nbrs)
                    m &= c.g->row(c.image[idx])[w];
                cnt += std::popcount(m);
            }
            c.total += cnt;
            return;
        }

        for (int w = 0; w < words; ++w) {
            std::uint64_t m = ~c.used[w];
            if (nbrs.empty()) {
                if (w == words - 1 && c.g->n % 64)
                    m &= (1ULL << (c.g->n % 64)) - 1;
            } else {
                for (int idx : nbrs)
                    m &= c.g->row(c.image[idx])[w];
            }
            while (m) {
                int v = w * 64 + __builtin_ctzll(m);
                m &= m - 1;
                if (v >= c.g->n)
                    break;
                c.image[slot] = v;
                c.used[w] |= 1ULL << (v & 63);
                if (slot + 1 == c.k)
                    ++c.total;
                else
                    embed_rec(c, slot + 1);
                c.used[w] &= ~(1ULL << (v & 63));
            }
        }
    }

    std::uint64_t embeddings(const VertexAdjacency& g, const Pattern& h,
                             std::uint64_t max_visits = ~0ULL)
    {
        if (h.vertex_count == 0)
            return 1;
        if (g.n < h.vertex_count)
            return 0;
        EmbedContext c;
        c.g = &g;
        c.k = h.vertex_count;
        c.order = embedding_order(h);
        auto adj = h.adjacency_masks();
        c.placed_neighbors.resize(c.k);
        for (int slot = 0; slot < c.k; ++slot)
            for (int prev = 0; prev < slot; ++prev)
                if (adj[c.order[slot]] & (1u << c.order[prev]))
                    c.placed_neighbors[slot].push_back(prev);
        c.image.assign(c.k, -1);
        c.used.assign(g.words, 0);
        c.max_visits = max_visits;
        embed_rec(c, 0);
        return c.total;
    }

} // namespace

std::uint64_t count_injective_embeddings(const VertexAdjacency& g, const Pattern& h)
{
    return embeddings(g, h);
}

std::uint64_t automorphism_count(const Pattern& h)
{
    VertexAdjacency self(h);
    return embeddings(self, h);
}

std::vector<int> claimed_degrees(const Board& board, const EdgeSet& claimed)
{
    std::vector<int> d(board.vertex_count, 0);
    claimed.for_each([&](Element id) {
        auto [u, v] = board.endpoints(id);
        ++d[u];
        ++d[v];
    });
    return d;
}

std::uint64_t count_copies(const Board& board, const EdgeSet& claimed, const Pattern& h)
{
    std::vector<int> kept;
    Pattern core = h.without_isolated(&kept);
    int iso = h.vertex_count - core.vertex_count;

    std::uint64_t core_copies;
    if (core.vertex_count == 0) {
        core_copies = 1;
    } else if (core.vertex_count == 2) {
        core_copies = claimed.count();
    } else if (core.vertex_count == 3 && core.edge_count() == 2) {
        // 2-edge tree, counted at its centre
        core_copies = 0;
        for (int d : claimed_degrees(board, claimed))
            core_copies += binomial(d, 2);
    } else if (auto deg = core.degrees();
               core.vertex_count == 4 && core.edge_count() == 3
               && *std::max_element(deg.begin(), deg.end()) == 3) {
        core_copies = 0;
        for (int d : claimed_degrees(board, claimed))
            core_copies += binomial(d, 3);
    } else {
        VertexAdjacency g(board, claimed);
        std::uint64_t emb = embeddings(g, core);
        std::uint64_t aut = automorphism_count(core);
        core_copies = emb / aut;
    }

    if (iso == 0)
        return core_copies;
    return core_copies * binomial(board.vertex_count - core.vertex_count, iso);
}

namespace {

    struct CanonicalContext {
        const Board* board;
        const VertexAdjacency* g;
        std::vector<int> order;                          // parts in assignment order
        std::vector<std::vector<int>> placed_neighbors;  // per slot
        std::vector<int> image;
        std::uint64_t total = 0;
        std::uint64_t visits = 0;
        std::uint64_t max_visits = ~0ULL;
        std::vector<std::vector<std::uint32_t>>* record = nullptr;
        std::vector<std::uint32_t> tuple; // by slot
    };

    void canonical_rec(CanonicalContext& c, int slot)
    {
        if (++c.visits > c.max_visits)
            throw std::runtime_error("embedding cap exceeded");
        int k = static_cast<int>(c.order.size());
        int part = c.order[slot];
        int s = c.board->part_size;
        int lo = part * s;

        const auto& nbrs = c.placed_neighbors[slot];
        if (slot == k - 1 && !nbrs.empty() && !c.record) {
            std::uint64_t cnt = 0;
            for (int w = lo >> 6; w <= (lo + s - 1) >> 6; ++w) {
                std::uint64_t m = ~0ULL;
                for (int idx : nbrs)
                    m &= c.g->row(c.image[idx])[w];
                // clip to the part's vertex range
                std::uint64_t clip = ~0ULL;
                int first = w * 64, last = w * 64 + 63;
                if (first < lo)
                    clip &= ~((1ULL << (lo - first)) - 1);
                if (last > lo + s - 1)
                    clip &= (lo + s - first) < 64 ? (1ULL << (lo + s - first)) - 1 : ~0ULL;
                cnt += std::popcount(m & clip);
            }
            c.total += cnt;
            return;
        }

        for (int x = lo; x < lo + s; ++x) {
            bool ok = true;
            for (int idx : nbrs)
                if (!c.g->adjacent(c.image[idx], x)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            c.image[slot] = x;
            if (c.record)
                c.tuple[slot] = static_cast<std::uint32_t>(x);
            if (slot + 1 == k) {
                ++c.total;
                if (c.record) {
                    std::vector<std::uint32_t> by_part(k);
                    for (int i = 0; i < k; ++i)
                        by_part[c.order[i]] = c.tuple[i];
                    c.record->push_back(std::move(by_part));
                }
            } else {
                canonical_rec(c, slot + 1);
            }
        }
    }

    std::uint64_t canonical_count(const Board& board, const EdgeSet& claimed,
                                  const Pattern& h_sub, const std::vector<int>& support,
                                  std::uint64_t max_visits,
                                  std::vector<std::vector<std::uint32_t>>* record,
                                  bool lex_order)
    {
        if (support.empty())
            return 1;
        VertexAdjacency g(board, claimed);
        CanonicalContext c;
        c.board = &board;
        c.g = &g;
        c.max_visits = max_visits;
        c.record = record;

        auto adj = h_sub.adjacency_masks();
        if (lex_order) {
            c.order = support;
        } else {
            // most-constrained-first among the support
            auto deg = h_sub.degrees();
            std::uint32_t placed = 0;
            std::vector<int> rest = support;
            while (!rest.empty()) {
                int best_i = 0, best_links = -1, best_deg = -1;
                for (size_t i = 0; i < rest.size(); ++i) {
                    int v = rest[i];
                    int links = std::popcount(adj[v] & placed);
                    if (links > best_links || (links == best_links && deg[v] > best_deg)) {
                        best_i = static_cast<int>(i);
                        best_links = links;
                        best_deg = deg[v];
                    }
                }
                c.order.push_back(rest[best_i]);
                placed |= 1u << rest[best_i];
                rest.erase(rest.begin() + best_i);
            }
        }
        int k = static_cast<int>(c.order.size());
        c.placed_neighbors.resize(k);
        for (int slot = 0; slot < k; ++slot)
            for (int prev = 0; prev < slot; ++prev)
                if (adj[c.order[slot]] & (1u << c.order[prev]))
                    c.placed_neighbors[slot].push_back(prev);
        c.image.assign(k, -1);
        c.tuple.assign(k, 0);
        canonical_rec(c, 0);
        return c.total;
    }

} // namespace

std::uint64_t count_canonical_copies(const Board& board, const EdgeSet& claimed,
                                     const Pattern& h_sub, bool include_isolated)
{
    if (board.kind != Board::Kind::blowup)
        throw std::invalid_argument("canonical counting needs a blow-up board");
    if (h_sub.vertex_count > board.parts())
        throw std::invalid_argument("canonical counting: pattern references a part index "
                                    "absent from the board");
    auto deg = h_sub.degrees();
    std::vector<int> support;
    int iso = 0;
    for (int v = 0; v < h_sub.vertex_count; ++v) {
        if (deg[v] > 0)
            support.push_back(v);
        else
            ++iso;
    }
    std::uint64_t c = canonical_count(board, claimed, h_sub, support, ~0ULL, nullptr, false);
    if (include_isolated)
        for (int i = 0; i < iso; ++i)
            c *= board.part_size;
    return c;
}

std::vector<std::vector<std::uint32_t>> canonical_copies_list(const Board& board,
                                                              const EdgeSet& claimed,
                                                              std::uint64_t max_visits)
{
    if (board.kind != Board::Kind::blowup)
        throw std::invalid_argument("canonical enumeration needs a blow-up board");
    std::vector<int> support(board.parts());
    std::iota(support.begin(), support.end(), 0);
    std::vector<std::vector<std::uint32_t>> out;
    canonical_count(board, claimed, board.base, support, max_visits, &out, true);
    return out;
}

std::vector<std::vector<Element>> enumerate_copy_sets(const Board& board, const Pattern& h_raw,
                                                      bool canonical)
{
    Pattern h = h_raw.without_isolated();
    EdgeSet full(board.element_count);
    for (Element e = 0; e < board.element_count; ++e)
        full.set(e);

    auto edge_set_of = [&](auto&& image_of_label) {
        std::vector<Element> set;
        for (auto [a, b] : h.edges) {
            Element e = board.element_id(image_of_label(a), image_of_label(b));
            if (e == kNoElement)
                return std::vector<Element>{};
            set.push_back(e);
        }
        std::sort(set.begin(), set.end());
        return set;
    };

    std::vector<std::vector<Element>> out;
    if (canonical) {
        for (const auto& tuple : canonical_copies_list(board, full)) {
            auto set = edge_set_of([&](int l) { return static_cast<int>(tuple[l]); });
            if (!set.empty())
                out.push_back(std::move(set));
        }
        return out;
    }

    // embeddings enumerate each copy |Aut(h)| times; dedup by edge set
    const int n = board.vertex_count;
    std::vector<int> image(h.vertex_count, -1);
    std::vector<bool> used(n, false);
    std::set<std::vector<Element>> dedup;
    VertexAdjacency g(board, full);
    auto rec = [&](auto&& self, int slot) -> void {
        if (slot == h.vertex_count) {
            auto set = edge_set_of([&](int l) { return image[l]; });
            if (!set.empty())
                dedup.insert(std::move(set));
            return;
        }
        for (int x = 0; x < n; ++x) {
            if (used[x])
                continue;
            bool ok = true;
            for (int prev = 0; prev < slot && ok; ++prev)
                if (h.has_edge(prev, slot) && !g.adjacent(image[prev], x))
                    ok = false;
            if (!ok)
                continue;
            image[slot] = x;
            used[x] = true;
            self(self, slot + 1);
            used[x] = false;
        }
    };
    rec(rec, 0);
    return {dedup.begin(), dedup.end()};
}

} // namespace posgame
