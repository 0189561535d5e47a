#include "posgame/invariants.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace posgame {

Rational max_density(const Pattern& h)
{
    if (h.vertex_count < 1)
        throw std::invalid_argument("max_density: empty pattern");
    // attained on induced subgraphs
    Rational best(0, 1);
    const std::uint32_t all = (h.vertex_count >= 31) ? ~0u : ((1u << h.vertex_count) - 1);
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        int v = std::popcount(mask);
        int e = h.induced_edge_count(mask);
        Rational r(e, v);
        if (best < r)
            best = r;
    }
    return best;
}

Rational max_2density(const Pattern& h)
{
    if (h.vertex_count < 3)
        throw std::invalid_argument("max_2density: needs at least 3 vertices");
    bool found = false;
    Rational best(0, 1);
    const std::uint32_t all = (1u << h.vertex_count) - 1;
    for (std::uint32_t mask = 1; mask <= all; ++mask) {
        int v = std::popcount(mask);
        if (v < 3)
            continue;
        int e = h.induced_edge_count(mask);
        Rational r(e - 1, v - 2);
        if (!found || best < r) {
            best = r;
            found = true;
        }
    }
    return best;
}

bool is_m2_balanced(const Pattern& h)
{
    if (h.vertex_count < 3 || h.edge_count() < 2)
        throw std::invalid_argument("is_m2_balanced: needs v >= 3 and e >= 2");

    Rational own(h.edge_count() - 1, h.vertex_count - 2);
    bool by_m2 = max_2density(h) == own;

    // equivalent condition: (v - v')/(e - e') <= (v-2)/(e-1) for every proper
    // subgraph with e' >= 2; binding cases are induced on proper vertex sets
    bool by_subgraphs = true;
    Rational bound(h.vertex_count - 2, h.edge_count() - 1);
    const std::uint32_t all = (1u << h.vertex_count) - 1;
    for (std::uint32_t mask = 1; mask < all && by_subgraphs; ++mask) {
        int v = std::popcount(mask);
        int e = h.induced_edge_count(mask);
        if (e < 2 || e == h.edge_count())
            continue;
        Rational lhs(h.vertex_count - v, h.edge_count() - e);
        if (bound < lhs)
            by_subgraphs = false;
    }

    if (by_m2 != by_subgraphs)
        throw std::logic_error("is_m2_balanced: characterisations disagree");
    return by_m2;
}

Rational g1(const Pattern& h)
{
    if (h.edge_count() < 2)
        throw std::invalid_argument("g1: needs at least 2 edges");
    const int e = h.edge_count();
    const int v = h.vertex_count;
    bool found = false;
    Rational best(0, 1);
    for (const auto& pr : candidate_subgraphs(h)) {
        if (pr.clique || pr.full)
            continue;
        bool admissible = (pr.e >= 2 && pr.e < e) || (pr.e == 0 && pr.v == 2);
        if (!admissible)
            continue;
        Rational r(v - pr.v, e - pr.e);
        if (!found || best < r) {
            best = r;
            found = true;
        }
    }
    if (!found)
        throw std::logic_error("g1: no admissible subgraph");
    return best;
}

Rational g2(const Pattern& h)
{
    if (h.edge_count() < 2)
        throw std::invalid_argument("g2: needs at least 2 edges");
    Rational best(h.vertex_count - 2, h.edge_count() - 1); // H' = H
    for (const auto& pr : candidate_subgraphs(h)) {
        if (!pr.clique || pr.e < 2)
            continue;
        Rational r(pr.v - 2, pr.e - 1);
        if (r < best)
            best = r;
    }
    return best;
}

double expected_canonical_copies(const Pattern& h_sub, std::uint64_t n, double p)
{
    if (p < 0.0 || p > 1.0)
        throw std::invalid_argument("expected_canonical_copies: p outside [0,1]");
    return std::pow(static_cast<double>(n), h_sub.vertex_count)
        * std::pow(p, h_sub.edge_count());
}

namespace {

    double profile_value(int v, int e, std::uint64_t n, double p)
    {
        return std::pow(static_cast<double>(n), v) * std::pow(p, e);
    }

} // namespace

double f_hat(const Pattern& h, std::uint64_t n, double p)
{
    if (h.edge_count() < 1)
        throw std::invalid_argument("f_hat: needs at least 1 edge");
    if (p <= 0.0 || p > 1.0)
        throw std::invalid_argument("f_hat: p outside (0,1]");
    double best = -1;
    for (const auto& pr : candidate_subgraphs(h)) {
        if (pr.e < 1)
            continue;
        double val = profile_value(pr.v, pr.e, n, p);
        if (best < 0 || val < best)
            best = val;
    }
    return best;
}

double f_lower(const Pattern& h, std::uint64_t n, double p)
{
    if (h.edge_count() < 2)
        throw std::invalid_argument("f_lower: needs at least 2 edges");
    if (p <= 0.0 || p > 1.0)
        throw std::invalid_argument("f_lower: p outside (0,1]");
    double best = -1;
    for (const auto& pr : candidate_subgraphs(h)) {
        if (pr.e < 2)
            continue;
        if (pr.clique && !pr.full)
            continue; // proper cliques are not in Int^c
        double val = profile_value(pr.v, pr.e, n, p);
        if (best < 0 || val < best)
            best = val;
    }
    return best;
}

std::vector<std::pair<int, int>> clique_matching_edges(int k, int i)
{
    if (k < 3)
        throw std::invalid_argument("clique_minus_matching: k >= 3 required");
    if (i < 1 || i > k - 2)
        throw std::invalid_argument("clique_minus_matching: i outside [1, k-2]");

    // first matching: {0,1}, {2,3}, ...; second: {1,2}, {3,4}, ...
    std::vector<std::pair<int, int>> removed;
    for (int j = 1; j <= k / 2 && static_cast<int>(removed.size()) < i; ++j)
        removed.emplace_back(2 * j - 2, 2 * j - 1);
    for (int m = 1; static_cast<int>(removed.size()) < i; ++m)
        removed.emplace_back(2 * m - 1, 2 * m);
    return removed;
}

Pattern clique_minus_matching(int k, int i)
{
    auto removed = clique_matching_edges(k, i);
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) {
            bool drop = false;
            for (auto [a, b] : removed)
                if (a == u && b == v)
                    drop = true;
            if (!drop)
                edges.emplace_back(u, v);
        }
    return make_pattern(k, std::move(edges));
}

BiasWindow bias_window(const Pattern& h, int s, Regime regime, double alpha, double c1,
                       double c2, std::optional<double> proof_delta)
{
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("bias_window: alpha outside (0,1)");
    BiasWindow w;
    w.regime = regime;
    const double e = h.edge_count();
    switch (regime) {
    case Regime::dense: {
        if (h.edge_count() < 2)
            throw std::invalid_argument("bias_window: dense regime needs e(H) >= 2");
        double m2 = max_2density(h).to_double();
        w.lower = 2.0;
        w.upper = c2 * std::pow(s, 1.0 / m2);
        break;
    }
    case Regime::g1g2: {
        if (h.edge_count() < 3 || !h.contains_two_adjacent_edges())
            throw std::invalid_argument(
                "bias_window: g1g2 regime needs e(H) >= 3 and two adjacent edges");
        double lo_c = c1, hi_c = c2;
        if (proof_delta) {
            lo_c = (1 - alpha) * e / *proof_delta;
            hi_c = (1 - alpha) * e / 2.0;
        }
        w.lower = lo_c * std::pow(s, g1(h).to_double());
        w.upper = hi_c * std::pow(s, g2(h).to_double());
        break;
    }
    case Regime::m2balanced: {
        if (!is_m2_balanced(h) || h.is_forest())
            throw std::invalid_argument(
                "bias_window: m2balanced regime needs an m2-balanced non-forest");
        double lo_c = c1, hi_c = c2;
        if (proof_delta) {
            lo_c = (1 - alpha) * e;
            hi_c = 2 * (1 - alpha) * e;
        }
        double m2 = max_2density(h).to_double();
        w.lower = lo_c * std::pow(s, 1.0 / m2);
        w.upper = hi_c * std::pow(s, 1.0 / m2);
        break;
    }
    }
    return w;
}

std::uint64_t round_budget(const Pattern& h, int s, int b, double alpha)
{
    double n = static_cast<double>(h.edge_count()) * s * s;
    return static_cast<std::uint64_t>(std::floor((1.0 - alpha) * n / (b + 1)));
}

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::dense:
        return "dense";
    case Regime::g1g2:
        return "g1g2";
    case Regime::m2balanced:
        return "m2balanced";
    }
    return "?";
}

Regime regime_from_name(const std::string& name)
{
    if (name == "dense")
        return Regime::dense;
    if (name == "g1g2")
        return Regime::g1g2;
    if (name == "m2balanced")
        return Regime::m2balanced;
    throw std::invalid_argument("unknown regime '" + name + "'");
}

} // namespace posgame
