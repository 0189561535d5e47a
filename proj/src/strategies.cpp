#include "posgame/strategies.hpp"

#include "posgame/counting.hpp"
#include "posgame/invariants.hpp"
#include "pinned_enum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace posgame {

namespace {

    // walk the rounds a strategy has not seen yet
    template <typename F>
    void for_new_claims(const GameState& s, std::uint32_t& seen_rounds, F&& on_claim)
    {
        for (; seen_rounds < s.transcript.rounds(); ++seen_rounds) {
            Element pick = s.transcript.picks[seen_rounds];
            for (Element e : s.transcript.offer(seen_rounds))
                on_claim(e, e == pick ? Owner::client : Owner::waiter);
        }
    }

} // namespace

// ---------------------------------------------------------------- random

RandomWaiter::RandomWaiter(const Board& board, int bias, std::uint64_t seed,
                           const EdgeSet* allowed)
    : bias_(bias)
    , rng_(seed)
{
    pos_.assign(board.element_count, kNoElement);
    for (Element e = 0; e < board.element_count; ++e) {
        if (allowed && !allowed->test(e))
            continue;
        pos_[e] = static_cast<std::uint32_t>(free_.size());
        free_.push_back(e);
    }
}

void RandomWaiter::sync(const GameState& s)
{
    for_new_claims(s, seen_rounds_, [&](Element e, Owner) {
        std::uint32_t p = pos_[e];
        if (p == kNoElement)
            return;
        Element last = free_.back();
        free_[p] = last;
        pos_[last] = p;
        free_.pop_back();
        pos_[e] = kNoElement;
    });
}

std::vector<Element> RandomWaiter::offer(const GameState& s)
{
    sync(s);
    const size_t want = static_cast<size_t>(bias_) + 1;
    if (free_.size() < want)
        throw std::logic_error("random waiter: fewer than b+1 elements available");
    // partial Fisher-Yates from the tail
    std::vector<Element> out;
    out.reserve(want);
    for (size_t j = 0; j < want; ++j) {
        size_t idx = static_cast<size_t>(uniform_below(rng_, free_.size() - j));
        size_t tail = free_.size() - 1 - j;
        std::swap(free_[idx], free_[tail]);
        pos_[free_[idx]] = static_cast<std::uint32_t>(idx);
        pos_[free_[tail]] = static_cast<std::uint32_t>(tail);
        out.push_back(free_[tail]);
    }
    return out;
}

std::unique_ptr<WaiterStrategy> RandomWaiter::clone() const
{
    return std::make_unique<RandomWaiter>(*this);
}

// ---------------------------------------------------------------- greedy

GreedyClient::GreedyClient(const Board& board, const WinningFamily& family)
    : board_(&board)
    , family_(&family)
{
    if (!family.implicit) {
        mode_ = Mode::explicit_sets;
        return;
    }
    const Pattern& h = family.pattern;
    bool complete = board.kind == Board::Kind::complete;
    if (h.edge_count() == 1) {
        mode_ = Mode::single_edge;
    } else if (!family.canonical && complete && h.vertex_count == 3 && h.edge_count() == 2) {
        mode_ = Mode::two_edge_tree;
        client_deg_.assign(board.vertex_count, 0);
    } else if (auto deg = h.degrees();
               !family.canonical && complete && h.vertex_count == 4 && h.edge_count() == 3
               && *std::max_element(deg.begin(), deg.end()) == 3) {
        mode_ = Mode::three_edge_star;
        client_deg_.assign(board.vertex_count, 0);
    } else {
        mode_ = Mode::generic;
        client_adj_ = VertexAdjacency(board, EdgeSet(board.element_count));
        track_adj_ = true;
    }
}

void GreedyClient::sync(const GameState& s)
{
    for_new_claims(s, seen_rounds_, [&](Element e, Owner who) {
        if (who != Owner::client)
            return;
        if (mode_ == Mode::two_edge_tree || mode_ == Mode::three_edge_star) {
            auto [u, v] = board_->endpoints(e);
            ++client_deg_[u];
            ++client_deg_[v];
        } else if (track_adj_) {
            auto [u, v] = board_->endpoints(e);
            client_adj_.add_edge(u, v);
        }
    });
}

std::uint64_t GreedyClient::completions(const GameState& s, Element x)
{
    sync(s);
    switch (mode_) {
    case Mode::explicit_sets: {
        std::uint64_t c = 0;
        for (size_t i = 0; i < family_->sets.size(); ++i) {
            const auto& set = family_->sets[i];
            bool contains = false, rest_client = true;
            for (Element e : set) {
                if (e == x) {
                    contains = true;
                    continue;
                }
                if (s.owner[e] != Owner::client) {
                    rest_client = false;
                    break;
                }
            }
            c += contains && rest_client;
        }
        return c;
    }
    case Mode::single_edge:
        return 1;
    case Mode::two_edge_tree: {
        auto [u, v] = board_->endpoints(x);
        return client_deg_[u] + client_deg_[v];
    }
    case Mode::three_edge_star: {
        auto [u, v] = board_->endpoints(x);
        return binomial(client_deg_[u], 2) + binomial(client_deg_[v], 2);
    }
    case Mode::generic: {
        auto [u, v] = board_->endpoints(x);
        const Pattern& h = family_->pattern;
        std::uint64_t pinned = 0;
        PinnedEnum en;
        en.g = &client_adj_;
        en.h = &h;
        en.canon = family_->canonical ? board_ : nullptr;
        if (family_->canonical) {
            int pu = board_->part_of(u), pv = board_->part_of(v);
            for (auto [a, b] : h.edges) {
                if (a == pu && b == pv)
                    en.run(a, b, u, v, [&](const std::vector<int>&) { ++pinned; });
                else if (a == pv && b == pu)
                    en.run(a, b, v, u, [&](const std::vector<int>&) { ++pinned; });
            }
            return pinned;
        }
        for (auto [a, b] : h.edges) {
            en.run(a, b, u, v, [&](const std::vector<int>&) { ++pinned; });
            en.run(a, b, v, u, [&](const std::vector<int>&) { ++pinned; });
        }
        return pinned / automorphism_count(h);
    }
    }
    return 0;
}

Element GreedyClient::pick(const GameState& s, std::span<const Element> offer)
{
    sync(s);
    Element best = offer[0];
    std::uint64_t best_c = ~0ULL;
    for (Element x : offer) {
        std::uint64_t c = completions(s, x);
        if (c < best_c) {
            best_c = c;
            best = x;
        }
    }
    return best;
}

std::unique_ptr<ClientStrategy> GreedyClient::clone() const
{
    return std::make_unique<GreedyClient>(*this);
}

// ---------------------------------------------------------------- potential

PotentialClient::PotentialClient(const Board& board, int bias, const WinningFamily& family)
    : board_(&board)
    , family_(&family)
    , bias_(bias)
{
    if (!family.implicit) {
        const size_t m = family.sets.size();
        set_free_.reserve(m);
        size_t e0 = 0;
        for (const auto& set : family.sets)
            e0 = std::max(e0, set.size());
        scale_e0_ = static_cast<int>(e0);
        double bits = e0 * std::log2(static_cast<double>(bias + 1))
            + std::log2(static_cast<double>(m + 1));
        mode_ = bits <= 62.0 ? Mode::explicit_exact : Mode::explicit_float;
        set_alive_.assign(m, true);
        std::unordered_map<Element, std::vector<std::uint32_t>> inc;
        for (std::uint32_t i = 0; i < m; ++i) {
            set_free_.push_back(static_cast<std::uint32_t>(family.sets[i].size()));
            for (Element e : family.sets[i])
                inc[e].push_back(i);
        }
        incidence_map_ = std::move(inc);
        stamp_.assign(m, 0);
        stamp_index_.assign(m, 0);
        if (mode_ == Mode::explicit_exact) {
            phi_scaled_ = 0;
            for (std::uint32_t i = 0; i < m; ++i)
                phi_scaled_ += scaled_weight(set_free_[i]);
        } else {
            phi_float_ = 0;
            for (std::uint32_t i = 0; i < m; ++i)
                phi_float_ += std::pow(static_cast<long double>(bias + 1),
                                       -static_cast<long double>(set_free_[i]));
        }
        return;
    }

    const Pattern& h = family.pattern;
    if (board.kind == Board::Kind::complete && !family.canonical && h.vertex_count == 3
        && h.edge_count() == 2) {
        mode_ = Mode::degree_form;
        deg_client_.assign(board.vertex_count, 0);
        deg_free_.assign(board.vertex_count, board.vertex_count - 1);
        phi_float_ = 0;
        for (int v = 0; v < board.vertex_count; ++v)
            phi_float_ += degree_phi_term(0, board.vertex_count - 1);
        return;
    }
    if (board.kind == Board::Kind::complete && !family.canonical && h.edge_count() == 1) {
        mode_ = Mode::degree_form; // all picks score alike; lowest id wins
        phi_float_ = static_cast<long double>(board.element_count)
            / static_cast<long double>(bias + 1);
        return;
    }

    mode_ = Mode::enumerate;
    // non-Waiter adjacency starts as the whole board
    EdgeSet full(board.element_count);
    for (Element e = 0; e < board.element_count; ++e)
        full.set(e);
    non_waiter_adj_ = VertexAdjacency(board, full);
    client_adj_ = VertexAdjacency(board, EdgeSet(board.element_count));
    aut_ = family.canonical ? 1 : automorphism_count(h);
    std::uint64_t copies = family.canonical
        ? count_canonical_copies(board, full, h)
        : count_copies(board, full, h);
    phi_float_ = static_cast<long double>(copies)
        * std::pow(static_cast<long double>(bias + 1), -static_cast<long double>(h.edge_count()));
}

std::uint64_t PotentialClient::scaled_weight(std::uint32_t free_cnt) const
{
    std::uint64_t w = 1;
    for (int i = 0; i < scale_e0_ - static_cast<int>(free_cnt); ++i)
        w *= static_cast<std::uint64_t>(bias_ + 1);
    return w;
}

long double PotentialClient::degree_phi_term(std::uint32_t c, std::uint32_t f) const
{
    const long double inv = 1.0L / (bias_ + 1);
    return 0.5L * c * (c - 1.0L) + static_cast<long double>(c) * f * inv
        + 0.5L * f * (f - 1.0L) * inv * inv;
}

void PotentialClient::sync(const GameState& s)
{
    for_new_claims(s, seen_rounds_, [&](Element e, Owner who) {
        switch (mode_) {
        case Mode::explicit_exact:
        case Mode::explicit_float: {
            auto it = incidence_map_.find(e);
            if (it == incidence_map_.end())
                return;
            for (std::uint32_t i : it->second) {
                if (!set_alive_[i])
                    continue;
                if (who == Owner::waiter) {
                    set_alive_[i] = false;
                    if (mode_ == Mode::explicit_exact)
                        phi_scaled_ -= scaled_weight(set_free_[i]);
                    else
                        phi_float_ -= std::pow(static_cast<long double>(bias_ + 1),
                                               -static_cast<long double>(set_free_[i]));
                } else {
                    if (mode_ == Mode::explicit_exact) {
                        std::uint64_t old = scaled_weight(set_free_[i]);
                        --set_free_[i];
                        phi_scaled_ += scaled_weight(set_free_[i]) - old;
                    } else {
                        long double old = std::pow(static_cast<long double>(bias_ + 1),
                                                   -static_cast<long double>(set_free_[i]));
                        --set_free_[i];
                        phi_float_ += old * bias_;
                    }
                }
            }
            break;
        }
        case Mode::degree_form: {
            if (deg_client_.empty())
                return; // single-edge family: potential updates are immaterial
            auto [u, v] = board_->endpoints(e);
            for (int w : {u, v}) {
                phi_float_ -= degree_phi_term(deg_client_[w], deg_free_[w]);
                if (who == Owner::client)
                    ++deg_client_[w];
                --deg_free_[w];
                phi_float_ += degree_phi_term(deg_client_[w], deg_free_[w]);
            }
            break;
        }
        case Mode::enumerate: {
            auto [u, v] = board_->endpoints(e);
            if (who == Owner::waiter)
                non_waiter_adj_.remove_edge(u, v);
            else
                client_adj_.add_edge(u, v);
            break;
        }
        }
    });
}

Element PotentialClient::pick(const GameState& s, std::span<const Element> offer)
{
    sync(s);

    if (mode_ == Mode::explicit_exact || mode_ == Mode::explicit_float) {
        // phi_after(x) = phi - sum_{A relevant} w(A) + (b+1) sum_{A cap O = {x}} w(A);
        // only the boosted term varies over x, so minimize it
        ++stamp_now_;
        std::vector<std::uint32_t> relevant;
        std::vector<std::uint64_t> members; // bitmask over offer positions
        for (size_t oi = 0; oi < offer.size(); ++oi) {
            auto it = incidence_map_.find(offer[oi]);
            if (it == incidence_map_.end())
                continue;
            for (std::uint32_t i : it->second) {
                if (!set_alive_[i])
                    continue;
                if (stamp_[i] != stamp_now_) {
                    stamp_[i] = stamp_now_;
                    stamp_index_[i] = static_cast<std::uint32_t>(relevant.size());
                    relevant.push_back(i);
                    members.push_back(0);
                }
                members[stamp_index_[i]] |= 1ULL << oi;
            }
        }
        std::vector<long double> single_f(offer.size(), 0);
        std::vector<std::uint64_t> single_s(offer.size(), 0);
        for (size_t r = 0; r < relevant.size(); ++r) {
            std::uint32_t i = relevant[r];
            if (std::popcount(members[r]) != 1)
                continue;
            size_t oi = static_cast<size_t>(std::countr_zero(members[r]));
            if (mode_ == Mode::explicit_exact)
                single_s[oi] += scaled_weight(set_free_[i]);
            else
                single_f[oi] += std::pow(static_cast<long double>(bias_ + 1),
                                         -static_cast<long double>(set_free_[i]));
        }
        size_t best = 0;
        for (size_t oi = 1; oi < offer.size(); ++oi) {
            if (mode_ == Mode::explicit_exact) {
                if (single_s[oi] < single_s[best])
                    best = oi;
            } else if (single_f[oi] < single_f[best]) {
                best = oi;
            }
        }
        return offer[best];
    }

    if (mode_ == Mode::degree_form) {
        if (deg_client_.empty())
            return offer[0];
        long double best_phi = 0;
        size_t best = 0;
        // evaluate each candidate by the touched-vertex deltas
        std::vector<std::pair<int, std::pair<int, int>>> touched; // vertex -> (dc, df)
        for (size_t oi = 0; oi < offer.size(); ++oi) {
            touched.clear();
            auto bump = [&](int v, int dc, int df) {
                for (auto& t : touched)
                    if (t.first == v) {
                        t.second.first += dc;
                        t.second.second += df;
                        return;
                    }
                touched.push_back({v, {dc, df}});
            };
            for (Element e : offer) {
                auto [p, q] = board_->endpoints(e);
                if (e == offer[oi]) {
                    bump(p, 1, -1);
                    bump(q, 1, -1);
                } else {
                    bump(p, 0, -1);
                    bump(q, 0, -1);
                }
            }
            long double delta = 0;
            for (auto& [v, d] : touched)
                delta += degree_phi_term(deg_client_[v] + d.first, deg_free_[v] + d.second)
                    - degree_phi_term(deg_client_[v], deg_free_[v]);
            if (oi == 0 || delta < best_phi) {
                best_phi = delta;
                best = oi;
            }
        }
        return offer[best];
    }

    // enumerate mode: copies through the offer over the non-Waiter graph,
    // attributed to their lowest offered element
    const Pattern& h = family_->pattern;
    std::vector<long double> single(offer.size(), 0);
    long double kill = 0;
    for (size_t oi = 0; oi < offer.size(); ++oi) {
        Element x = offer[oi];
        auto [u, v] = board_->endpoints(x);
        auto handle = [&](const std::vector<int>& image) {
            // membership of this copy over the offer + its weight
            int lowest = -1, count = 0, free_edges = 0;
            for (auto [a, b] : h.edges) {
                int iu = image[a], iv = image[b];
                Element id = board_->element_id(iu, iv);
                if (!client_adj_.adjacent(iu, iv))
                    ++free_edges;
                for (size_t oj = 0; oj < offer.size(); ++oj)
                    if (offer[oj] == id) {
                        ++count;
                        if (lowest < 0 || static_cast<int>(oj) < lowest)
                            lowest = static_cast<int>(oj);
                    }
            }
            if (lowest != static_cast<int>(oi))
                return; // counted when its lowest offered element is processed
            long double w = std::pow(static_cast<long double>(bias_ + 1),
                                     -static_cast<long double>(free_edges))
                / static_cast<long double>(aut_);
            kill += w;
            if (count == 1)
                single[oi] += w * (bias_ + 1);
        };
        PinnedEnum en;
        en.g = &non_waiter_adj_;
        en.h = &h;
        en.canon = family_->canonical ? board_ : nullptr;
        if (family_->canonical) {
            int pu = board_->part_of(u), pv = board_->part_of(v);
            for (auto [a, b] : h.edges) {
                if (a == pu && b == pv)
                    en.run(a, b, u, v, handle);
                else if (a == pv && b == pu)
                    en.run(a, b, v, u, handle);
            }
        } else {
            for (auto [a, b] : h.edges) {
                en.run(a, b, u, v, handle);
                en.run(a, b, v, u, handle);
            }
        }
    }
    size_t best = 0;
    for (size_t oi = 1; oi < offer.size(); ++oi)
        if (single[oi] < single[best])
            best = oi;
    phi_float_ += single[best] - kill;
    return offer[best];
}

long double PotentialClient::potential() const
{
    if (mode_ == Mode::explicit_exact)
        return static_cast<long double>(phi_scaled_)
            / std::pow(static_cast<long double>(bias_ + 1), scale_e0_);
    return phi_float_;
}

std::unique_ptr<ClientStrategy> PotentialClient::clone() const
{
    return std::make_unique<PotentialClient>(*this);
}

// ---------------------------------------------------------------- min degree

MinDegreeWaiter::MinDegreeWaiter(const Board& board, int bias,
                                 std::vector<std::vector<Element>> bad_family,
                                 const EdgeSet* allowed)
    : bias_(bias)
    , sets_(std::move(bad_family))
{
    (void)board;
    if (allowed)
        allowed_ = *allowed;
    for (auto& set : sets_)
        std::sort(set.begin(), set.end());
    alive_.assign(sets_.size(), true);
    live_ = sets_.size();
    live_history_.push_back(live_);
}

void MinDegreeWaiter::sync(const GameState& s)
{
    for (; seen_rounds_ < s.transcript.rounds(); ++seen_rounds_) {
        Element pick = s.transcript.picks[seen_rounds_];
        for (Element e : s.transcript.offer(seen_rounds_)) {
            bool is_client = e == pick;
            for (std::uint32_t i = 0; i < sets_.size(); ++i) {
                if (!alive_[i])
                    continue;
                bool contains = std::binary_search(sets_[i].begin(), sets_[i].end(), e);
                if ((is_client && !contains) || (!is_client && contains)) {
                    alive_[i] = false;
                    --live_;
                }
            }
        }
        live_history_.push_back(live_);
    }
}

std::vector<Element> MinDegreeWaiter::offer(const GameState& s)
{
    sync(s);
    // deg over free elements from the live sets
    std::unordered_map<Element, std::uint32_t> deg;
    for (std::uint32_t i = 0; i < sets_.size(); ++i) {
        if (!alive_[i])
            continue;
        for (Element e : sets_[i])
            if (s.owner[e] == Owner::free_)
                ++deg[e];
    }
    const size_t want = static_cast<size_t>(bias_) + 1;
    std::vector<Element> best;
    // elements in ascending id order so ties resolve to the lowest id
    std::vector<std::pair<std::uint32_t, Element>> ranked;
    for (Element e = 0; e < s.owner.size(); ++e) {
        if (s.owner[e] != Owner::free_)
            continue;
        if (allowed_ && !allowed_->test(e))
            continue;
        auto it = deg.find(e);
        ranked.push_back({it == deg.end() ? 0u : it->second, e});
    }
    if (ranked.size() < want)
        throw std::logic_error("min-degree waiter: fewer than b+1 free elements");
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < want; ++i)
        best.push_back(ranked[i].second);
    return best;
}

std::unique_ptr<WaiterStrategy> MinDegreeWaiter::clone() const
{
    return std::make_unique<MinDegreeWaiter>(*this);
}

// ---------------------------------------------------------------- registry

std::optional<Rational> tree_guarantee(int k, std::uint64_t n, int b)
{
    try {
        Rational t(1, 1);
        for (int i = 0; i < k; ++i)
            t = t * Rational(static_cast<long long>(n), 1);
        int exp4 = k * (k + 1) / 2;
        for (int i = 0; i < exp4; ++i)
            t = t / Rational(4, 1);
        for (int i = 0; i < k - 1; ++i)
            t = t / Rational(b + 1, 1);
        return t;
    } catch (const std::overflow_error&) {
        return std::nullopt;
    }
}

std::unique_ptr<WaiterStrategy> make_waiter(const std::string& name, const StrategyContext& ctx)
{
    if (!ctx.board)
        throw std::invalid_argument("make_waiter: no board");
    if (name == "random")
        return std::make_unique<RandomWaiter>(*ctx.board, ctx.bias, ctx.seed);
    if (name == "min-degree-waiter") {
        if (!ctx.family || ctx.family->implicit)
            throw std::invalid_argument("min-degree-waiter needs an explicit bad family");
        return std::make_unique<MinDegreeWaiter>(*ctx.board, ctx.bias, ctx.family->sets);
    }
    if (name == "tree-dense" || name == "tree-sparse") {
        if (!ctx.family || !ctx.family->implicit)
            throw std::invalid_argument(name + " needs an implicit pattern family");
        if (name == "tree-dense")
            return std::make_unique<TreeDenseWaiter>(*ctx.board, ctx.bias, ctx.family->pattern,
                                                     ctx.relax_preconditions);
        return std::make_unique<TreeSparseWaiter>(*ctx.board, ctx.bias, ctx.family->pattern,
                                                  ctx.relax_preconditions);
    }
    if (name == "triangle")
        return std::make_unique<TriangleWaiter>(*ctx.board, ctx.bias, ctx.relax_preconditions);
    if (name.rfind("clique:", 0) == 0) {
        std::string rest = name.substr(7);
        std::string stage1 = ctx.clique_stage1;
        size_t colon = rest.find(':');
        if (colon != std::string::npos) {
            stage1 = rest.substr(colon + 1);
            rest = rest.substr(0, colon);
        }
        size_t comma = rest.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("clique waiter: expected clique:k,i");
        int k = std::stoi(rest.substr(0, comma));
        int i = std::stoi(rest.substr(comma + 1));
        std::vector<std::vector<Element>> bad;
        if (ctx.family && !ctx.family->implicit)
            bad = ctx.family->sets;
        return std::make_unique<CliqueWaiter>(*ctx.board, ctx.bias, k, i, stage1, ctx.seed,
                                              ctx.alpha, std::move(bad));
    }
    throw std::invalid_argument("unknown waiter strategy '" + name + "'");
}

std::unique_ptr<ClientStrategy> make_client(const std::string& name, const StrategyContext& ctx)
{
    if (name == "random")
        return std::make_unique<RandomClient>(ctx.seed);
    if (name == "greedy-client") {
        if (!ctx.family)
            throw std::invalid_argument("greedy-client needs a winning family");
        return std::make_unique<GreedyClient>(*ctx.board, *ctx.family);
    }
    if (name == "potential-client") {
        if (!ctx.family)
            throw std::invalid_argument("potential-client needs a winning family");
        return std::make_unique<PotentialClient>(*ctx.board, ctx.bias, *ctx.family);
    }
    throw std::invalid_argument("unknown client strategy '" + name + "'");
}

std::vector<std::string> waiter_names()
{
    return {"random", "min-degree-waiter", "tree-dense", "tree-sparse", "triangle",
            "clique:k,i"};
}

std::vector<std::string> client_names()
{
    return {"random", "greedy-client", "potential-client"};
}

} // namespace posgame
