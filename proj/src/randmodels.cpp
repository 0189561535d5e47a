#include "posgame/randmodels.hpp"

#include "posgame/counting.hpp"
#include "posgame/invariants.hpp"
#include "posgame/rng.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace posgame {

EdgeSet sample_gnp(const Board& board, double p, std::uint64_t seed)
{
    if (board.kind != Board::Kind::blowup)
        throw std::invalid_argument("sample_gnp: needs a blow-up board");
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("sample_gnp: p outside [0,1]");
    Rng rng(seed);
    EdgeSet out(board.element_count);
    for (Element e = 0; e < board.element_count; ++e)
        if (chance(rng, p))
            out.set(e);
    return out;
}

EdgeSet sample_gnm(const Board& board, std::uint64_t m, std::uint64_t seed)
{
    if (board.kind != Board::Kind::blowup)
        throw std::invalid_argument("sample_gnm: needs a blow-up board");
    const std::uint64_t n = board.element_count;
    if (m > n)
        throw std::invalid_argument("sample_gnm: M exceeds the element count");
    Rng rng(seed);
    EdgeSet out(n);
    // Floyd's sampling: uniform M-subset in O(M) draws
    std::unordered_set<std::uint64_t> chosen;
    for (std::uint64_t j = n - m; j < n; ++j) {
        std::uint64_t t = uniform_below(rng, j + 1);
        if (chosen.insert(t).second)
            out.set(static_cast<Element>(t));
        else {
            chosen.insert(j);
            out.set(static_cast<Element>(j));
        }
    }
    return out;
}

IntersectionKind classify_intersection(const Pattern& base, const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b)
{
    // canonical copies share a vertex only within the same part
    std::vector<int> shared;
    for (int q = 0; q < base.vertex_count; ++q)
        if (a[q] == b[q])
            shared.push_back(q);
    if (shared.empty())
        return IntersectionKind::disjoint;
    if (static_cast<int>(shared.size()) == base.vertex_count)
        return IntersectionKind::bad; // identical copies should never meet here
    for (size_t x = 0; x < shared.size(); ++x)
        for (size_t y = x + 1; y < shared.size(); ++y)
            if (!base.has_edge(shared[x], shared[y]))
                return IntersectionKind::bad;
    return IntersectionKind::clique;
}

bool sparse_family_ok(const Pattern& base, const std::vector<std::vector<std::uint32_t>>& copies)
{
    for (size_t i = 0; i < copies.size(); ++i)
        for (size_t j = i + 1; j < copies.size(); ++j)
            if (classify_intersection(base, copies[i], copies[j]) == IntersectionKind::bad)
                return false;
    return true;
}

std::vector<std::vector<std::uint32_t>>
greedy_disjointify(const Pattern& base, const std::vector<std::vector<std::uint32_t>>& copies)
{
    std::vector<std::vector<std::uint32_t>> kept;
    for (const auto& c : copies) {
        bool ok = true;
        for (const auto& k : kept)
            if (classify_intersection(base, c, k) == IntersectionKind::bad) {
                ok = false;
                break;
            }
        if (ok)
            kept.push_back(c);
    }
    return kept;
}

namespace {

    std::string tuple_str(const std::vector<std::uint32_t>& t)
    {
        std::ostringstream out;
        out << "(";
        for (size_t i = 0; i < t.size(); ++i)
            out << (i ? "," : "") << t[i];
        out << ")";
        return out.str();
    }

    // shared vertex labels of two copies
    std::vector<int> shared_parts(const Pattern& base, const std::vector<std::uint32_t>& a,
                                  const std::vector<std::uint32_t>& b)
    {
        std::vector<int> s;
        for (int q = 0; q < base.vertex_count; ++q)
            if (a[q] == b[q])
                s.push_back(q);
        return s;
    }

} // namespace

PropertyReport check_properties(const std::vector<std::vector<std::uint32_t>>& copies,
                                const Board& board, const EdgeSet& g, double big_c)
{
    const Pattern& base = board.base;
    const int n = board.part_size;
    PropertyReport rep;
    rep.p_used = static_cast<double>(g.count()) / static_cast<double>(board.element_count);
    if (rep.p_used > 0)
        rep.f_value = f_lower(base, n, rep.p_used);

    auto witness = [&](const std::string& w) {
        if (rep.witnesses.size() < 32)
            rep.witnesses.push_back(w);
    };

    // P1: edges spanned by the family
    EdgeSet span(board.element_count);
    std::unordered_map<Element, std::uint32_t> edge_uses;
    for (const auto& c : copies)
        for (auto [a, b] : base.edges) {
            Element e = board.element_id(static_cast<int>(c[a]), static_cast<int>(c[b]));
            span.set(e);
            ++edge_uses[e];
        }
    double p1_bound = big_c * n * n * rep.p_used;
    if (static_cast<double>(span.count()) > p1_bound) {
        rep.p1 = false;
        witness("P1: family spans " + std::to_string(span.count()) + " edges > "
                + std::to_string(p1_bound));
    }

    // P2: per-edge membership; the witness is the most-used element
    double p2_bound = rep.p_used > 0 ? big_c * rep.f_value / (n * n * rep.p_used) : 0;
    Element worst_e = kNoElement;
    std::uint32_t worst_uses = 0;
    for (auto& [e, uses] : edge_uses)
        if (uses > worst_uses || (uses == worst_uses && e < worst_e)) {
            worst_e = e;
            worst_uses = uses;
        }
    if (worst_e != kNoElement && static_cast<double>(worst_uses) > p2_bound) {
        rep.p2 = false;
        witness("P2: element " + std::to_string(worst_e) + " in " + std::to_string(worst_uses)
                + " copies > " + std::to_string(p2_bound));
    }

    // P3/P4/P5 look at pairwise intersections
    for (size_t x = 0; x < copies.size(); ++x) {
        std::unordered_map<std::string, std::uint32_t> exact_meet; // key: shared part set
        for (size_t y = 0; y < copies.size(); ++y) {
            if (x == y)
                continue;
            auto s = shared_parts(base, copies[x], copies[y]);
            if (s.empty())
                continue;
            if (s.size() == 2 && !base.has_edge(s[0], s[1])) {
                rep.p3 = false;
                witness("P3: " + tuple_str(copies[x]) + " and " + tuple_str(copies[y])
                        + " share two non-adjacent vertices");
            }
            if (s.size() >= 3) {
                std::uint32_t mask = 0;
                for (int q : s)
                    mask |= 1u << q;
                if (base.induced_edge_count(mask) <= 1) {
                    rep.p4 = false;
                    witness("P4: " + tuple_str(copies[x]) + " and " + tuple_str(copies[y])
                            + " meet in >=3 vertices spanning <=1 edge");
                }
            }
            // P5 counts partners with the same exact intersection F, where F
            // has >= 2 edges and is not a clique
            std::uint32_t mask = 0;
            for (int q : s)
                mask |= 1u << q;
            int e_f = base.induced_edge_count(mask);
            bool clique_f = e_f == static_cast<int>(s.size() * (s.size() - 1) / 2);
            if (e_f >= 2 && !clique_f) {
                std::string key(s.begin(), s.end());
                if (static_cast<double>(++exact_meet[key]) > big_c) {
                    rep.p5 = false;
                    witness("P5: " + tuple_str(copies[x]) + " meets > C partners on one "
                            "non-clique subgraph");
                }
            }
        }
    }
    return rep;
}

ExtractMode extract_mode_from_name(const std::string& name)
{
    if (name == "sampled")
        return ExtractMode::sampled;
    if (name == "greedy")
        return ExtractMode::greedy;
    throw std::invalid_argument("unknown extract mode '" + name + "'");
}

ExtractResult extract_sparse_family(const Board& board, const EdgeSet& g, double big_c,
                                    ExtractMode mode, std::uint64_t seed,
                                    std::uint64_t max_visits)
{
    ExtractResult out;
    const Pattern& base = board.base;
    const int n = board.part_size;
    auto all_copies = canonical_copies_list(board, g, max_visits);
    out.canonical_copies = all_copies.size();

    std::vector<std::vector<std::uint32_t>> accepted;
    double rho = -1;
    bool clamped = false;
    if (mode == ExtractMode::sampled) {
        double p = static_cast<double>(g.count()) / static_cast<double>(board.element_count);
        if (p > 0) {
            double ey = expected_canonical_copies(base, n, p);
            rho = ey > 0 ? f_lower(base, n, p) / ey : 0.0;
        } else {
            rho = 0.0;
        }
        if (rho > 1.0) {
            rho = 1.0;
            clamped = true;
        }
        Rng rng(seed);
        for (auto& c : all_copies)
            if (chance(rng, rho))
                accepted.push_back(c);

        // one-pass deletion against the accepted family, mirroring P2-P5
        PropertyReport pre = check_properties(accepted, board, g, big_c);
        double p2_bound = pre.p_used > 0 ? big_c * pre.f_value / (n * n * pre.p_used) : 0;
        std::unordered_map<Element, std::uint32_t> edge_uses;
        for (const auto& c : accepted)
            for (auto [a, b] : base.edges)
                ++edge_uses[board.element_id(static_cast<int>(c[a]), static_cast<int>(c[b]))];
        std::vector<bool> drop(accepted.size(), false);
        for (size_t x = 0; x < accepted.size(); ++x) {
            for (auto [a, b] : base.edges) {
                Element e = board.element_id(static_cast<int>(accepted[x][a]),
                                             static_cast<int>(accepted[x][b]));
                if (static_cast<double>(edge_uses[e]) > p2_bound) {
                    drop[x] = true;
                    break;
                }
            }
            if (drop[x])
                continue;
            std::unordered_map<std::string, std::uint32_t> exact_meet;
            for (size_t y = 0; y < accepted.size() && !drop[x]; ++y) {
                if (x == y)
                    continue;
                auto s = shared_parts(base, accepted[x], accepted[y]);
                if (s.empty())
                    continue;
                std::uint32_t mask = 0;
                for (int q : s)
                    mask |= 1u << q;
                int e_f = base.induced_edge_count(mask);
                bool clique_f = e_f == static_cast<int>(s.size() * (s.size() - 1) / 2);
                if (s.size() == 2 && !base.has_edge(s[0], s[1]))
                    drop[x] = true;
                else if (s.size() >= 3 && e_f <= 1)
                    drop[x] = true;
                else if (e_f >= 2 && !clique_f) {
                    std::string key(s.begin(), s.end());
                    if (static_cast<double>(++exact_meet[key]) > big_c)
                        drop[x] = true;
                }
            }
        }
        std::vector<std::vector<std::uint32_t>> kept;
        for (size_t x = 0; x < accepted.size(); ++x)
            if (!drop[x])
                kept.push_back(accepted[x]);
        accepted = std::move(kept);
    } else {
        accepted = std::move(all_copies);
    }

    out.report = check_properties(accepted, board, g, big_c);
    out.report.rho = rho;
    out.report.rho_clamped = clamped;
    out.pre_family = accepted;
    out.family.copies = greedy_disjointify(base, accepted);
    return out;
}

} // namespace posgame
