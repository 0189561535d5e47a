#include "posgame/solver.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace posgame {

namespace {

    constexpr std::uint64_t kMaxSolverElements = 12;

    struct Solver {
        const Board* board;
        const WinningFamily* family;
        int bias;
        std::uint64_t n;
        std::unordered_map<std::uint64_t, std::uint32_t> memo;

        std::uint64_t key(const std::vector<Owner>& owner) const
        {
            std::uint64_t k = 0;
            for (std::uint64_t i = 0; i < n; ++i)
                k = k * 3 + static_cast<std::uint64_t>(owner[i]);
            return k;
        }

        std::uint64_t leaf_value(const std::vector<Owner>& owner) const
        {
            std::uint64_t v = 0;
            for (const auto& set : family->sets) {
                bool all = !set.empty();
                for (Element e : set)
                    if (owner[e] != Owner::client) {
                        all = false;
                        break;
                    }
                v += all;
            }
            return v;
        }

        // next (b+1)-combination of the free list, lexicographic
        static bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t m)
        {
            const std::uint32_t r = static_cast<std::uint32_t>(idx.size());
            for (std::uint32_t pos = r; pos-- > 0;) {
                if (idx[pos] + (r - pos) <= m - 1) {
                    ++idx[pos];
                    for (std::uint32_t q = pos + 1; q < r; ++q)
                        idx[q] = idx[q - 1] + 1;
                    return true;
                }
            }
            return false;
        }

        std::uint64_t search(std::vector<Owner>& owner, std::uint32_t free_cnt,
                             bool root_symmetry)
        {
            if (free_cnt < static_cast<std::uint32_t>(bias) + 1)
                return leaf_value(owner);
            const std::uint64_t k = key(owner);
            if (auto it = memo.find(k); it != memo.end())
                return it->second;

            std::vector<Element> free_list;
            free_list.reserve(free_cnt);
            for (Element e = 0; e < n; ++e)
                if (owner[e] == Owner::free_)
                    free_list.push_back(e);

            // first-move pruning on complete boards: offers whose edge sets
            // are isomorphic give equal values
            std::map<std::uint64_t, bool> seen_codes;
            const bool prune = root_symmetry && board->kind == Board::Kind::complete
                && free_cnt == n;

            std::uint64_t best = 0;
            std::vector<std::uint32_t> idx(static_cast<std::uint32_t>(bias) + 1);
            std::iota(idx.begin(), idx.end(), 0u);
            do {
                if (prune) {
                    std::uint64_t code = offer_code(free_list, idx);
                    if (seen_codes.count(code))
                        continue;
                    seen_codes[code] = true;
                }
                std::uint64_t worst = ~0ULL;
                for (std::uint32_t pos : idx) {
                    Element pick = free_list[pos];
                    for (std::uint32_t q : idx)
                        owner[free_list[q]] = free_list[q] == pick ? Owner::client
                                                                   : Owner::waiter;
                    worst = std::min(worst,
                                     search(owner, free_cnt - bias - 1, false));
                    for (std::uint32_t q : idx)
                        owner[free_list[q]] = Owner::free_;
                    if (worst == 0)
                        break; // Client already holds the offer to zero
                }
                best = std::max(best, worst);
            } while (next_combination(idx, free_cnt));

            memo[k] = static_cast<std::uint32_t>(best);
            return best;
        }

        // canonical code of the graph spanned by the offered edges
        std::uint64_t offer_code(const std::vector<Element>& free_list,
                                 const std::vector<std::uint32_t>& idx) const
        {
            std::vector<std::pair<int, int>> edges;
            std::vector<int> verts;
            for (std::uint32_t pos : idx) {
                auto [u, v] = board->endpoints(free_list[pos]);
                edges.push_back({u, v});
                verts.push_back(u);
                verts.push_back(v);
            }
            std::sort(verts.begin(), verts.end());
            verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
            const int m = static_cast<int>(verts.size());
            std::vector<std::pair<int, int>> local;
            for (auto [u, v] : edges) {
                int a = static_cast<int>(std::lower_bound(verts.begin(), verts.end(), u)
                                         - verts.begin());
                int b = static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v)
                                         - verts.begin());
                local.push_back({std::min(a, b), std::max(a, b)});
            }
            std::vector<int> perm(m);
            std::iota(perm.begin(), perm.end(), 0);
            std::uint64_t best = ~0ULL;
            do {
                std::uint64_t code = 0;
                for (auto [a, b] : local) {
                    int x = perm[a], y = perm[b];
                    if (x > y)
                        std::swap(x, y);
                    code |= 1ULL << (x * m + y);
                }
                best = std::min(best, code);
            } while (std::next_permutation(perm.begin(), perm.end()));
            return best;
        }
    };

    void check_instance(const Board& board, const WinningFamily& family)
    {
        if (board.element_count > kMaxSolverElements)
            throw std::invalid_argument("solver: board exceeds the 12-element cap");
        if (family.implicit)
            throw std::invalid_argument("solver: needs an explicit winning family");
    }

} // namespace

std::uint64_t exact_value(const Board& board, const WinningFamily& family, int bias)
{
    check_instance(board, family);
    Solver s{&board, &family, bias, board.element_count, {}};
    std::vector<Owner> owner(board.element_count, Owner::free_);
    return s.search(owner, static_cast<std::uint32_t>(board.element_count), true);
}

SolveResult solve_with_pv(const Board& board, const WinningFamily& family, int bias)
{
    check_instance(board, family);
    Solver s{&board, &family, bias, board.element_count, {}};
    std::vector<Owner> owner(board.element_count, Owner::free_);
    SolveResult out;
    out.value = s.search(owner, static_cast<std::uint32_t>(board.element_count), true);

    // walk the memo greedily: lexicographically first best offer, then the
    // client's first best reply
    std::uint32_t free_cnt = static_cast<std::uint32_t>(board.element_count);
    while (free_cnt >= static_cast<std::uint32_t>(bias) + 1) {
        std::vector<Element> free_list;
        for (Element e = 0; e < board.element_count; ++e)
            if (owner[e] == Owner::free_)
                free_list.push_back(e);
        std::vector<std::uint32_t> idx(static_cast<std::uint32_t>(bias) + 1);
        std::iota(idx.begin(), idx.end(), 0u);
        std::vector<std::uint32_t> best_idx;
        std::uint64_t best_val = 0;
        bool have = false;
        do {
            std::uint64_t worst = ~0ULL;
            for (std::uint32_t pos : idx) {
                Element pick = free_list[pos];
                for (std::uint32_t q : idx)
                    owner[free_list[q]] = free_list[q] == pick ? Owner::client : Owner::waiter;
                worst = std::min(worst, s.search(owner, free_cnt - bias - 1, false));
                for (std::uint32_t q : idx)
                    owner[free_list[q]] = Owner::free_;
            }
            if (!have || worst > best_val) {
                best_val = worst;
                best_idx = idx;
                have = true;
            }
        } while (Solver::next_combination(idx, free_cnt));

        Element best_pick = kNoElement;
        std::uint64_t pick_val = ~0ULL;
        for (std::uint32_t pos : best_idx) {
            Element pick = free_list[pos];
            for (std::uint32_t q : best_idx)
                owner[free_list[q]] = free_list[q] == pick ? Owner::client : Owner::waiter;
            std::uint64_t v = s.search(owner, free_cnt - bias - 1, false);
            for (std::uint32_t q : best_idx)
                owner[free_list[q]] = Owner::free_;
            if (v < pick_val) {
                pick_val = v;
                best_pick = pick;
            }
        }

        for (std::uint32_t q : best_idx) {
            Element e = free_list[q];
            out.principal_variation.offers.push_back(e);
            owner[e] = e == best_pick ? Owner::client : Owner::waiter;
        }
        out.principal_variation.offer_begin.push_back(
            static_cast<std::uint32_t>(out.principal_variation.offers.size()));
        out.principal_variation.picks.push_back(best_pick);
        free_cnt -= bias + 1;
    }
    return out;
}

namespace {

    std::uint64_t certify_rec(const GameState& state, std::unique_ptr<WaiterStrategy> waiter,
                              const WinningFamily& family, const CertifyOptions& opts,
                              std::uint64_t rounds_left)
    {
        const int b = state.bias;
        if (rounds_left == 0 || state.free_count < static_cast<std::uint64_t>(b) + 1) {
            GameState final = state;
            if (final.free_count < static_cast<std::uint64_t>(b) + 1)
                finalize(final);
            if (opts.on_leaf)
                opts.on_leaf(final, *waiter);
            return game_value(final, family);
        }
        auto offer = waiter->offer(state);
        std::sort(offer.begin(), offer.end());
        std::uint64_t agg = opts.maximize_value ? 0 : ~0ULL;
        for (Element pick : offer) {
            GameState child = state;
            apply_round(child, offer, pick);
            auto w = waiter->clone();
            w->notify(child);
            std::uint64_t v = certify_rec(child, std::move(w), family, opts, rounds_left - 1);
            agg = opts.maximize_value ? std::max(agg, v) : std::min(agg, v);
        }
        return agg;
    }

} // namespace

std::uint64_t certify_waiter(const Board& board, const WinningFamily& family, int bias,
                             const WaiterStrategy& prototype, const CertifyOptions& opts)
{
    GameState s = new_game(board, bias);
    auto waiter = prototype.clone();
    waiter->notify(s);
    std::uint64_t limit = opts.round_limit == 0 ? ~0ULL : opts.round_limit;
    return certify_rec(s, std::move(waiter), family, opts, limit);
}

} // namespace posgame
