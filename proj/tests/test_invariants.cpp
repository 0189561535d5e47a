#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "posgame/invariants.hpp"
#include "posgame/rng.hpp"

#include <cmath>

using namespace posgame;

namespace {

    Pattern random_pattern(Rng& rng, int n, double p, int min_edges)
    {
        for (;;) {
            std::vector<std::pair<int, int>> edges;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v)
                    if (chance(rng, p))
                        edges.push_back({u, v});
            if (static_cast<int>(edges.size()) >= min_edges)
                return make_pattern(n, edges);
        }
    }

} // namespace

TEST_CASE("density closed forms")
{
    CHECK(max_density(pattern_from_spec("k4")) == Rational(3, 2));
    CHECK(max_density(pattern_from_spec("k2")) == Rational(1, 2));
    CHECK(max_density(pattern_from_spec("p3")) == oracle::brute_m(pattern_from_spec("p3")));
    CHECK(max_density(pattern_from_spec("p3")) == Rational(2, 3));

    for (int k = 3; k <= 8; ++k) {
        Pattern kk = pattern_from_spec("k" + std::to_string(k));
        CHECK(max_density(kk) == Rational(k - 1, 2));
        CHECK(max_2density(kk) == Rational(k * (k - 1) / 2 - 1, k - 2));
    }
    CHECK(max_2density(pattern_from_spec("k5")) == Rational(3, 1));
    CHECK(max_2density(pattern_from_spec("s4")) == oracle::brute_m2(pattern_from_spec("s4")));
    CHECK(max_2density(pattern_from_spec("s4")) == Rational(1, 1));
}

TEST_CASE("m2-balanced spot checks")
{
    CHECK(is_m2_balanced(clique_minus_matching(5, 3)));
    for (int k = 3; k <= 7; ++k)
        CHECK(is_m2_balanced(pattern_from_spec("k" + std::to_string(k))));
    // triangle with a pendant edge: m2 = 2 from the triangle, own ratio 3/2
    CHECK_FALSE(is_m2_balanced(pattern_from_spec("edges:v=4:0-1,0-2,1-2,2-3")));
    CHECK_THROWS_AS(is_m2_balanced(pattern_from_spec("k2")), std::invalid_argument);
}

TEST_CASE("g1/g2 match the exhaustive subgraph oracle on small graphs")
{
    std::vector<std::string> specs{"k3",
                                   "k4",
                                   "k5",
                                   "p3",
                                   "p4",
                                   "p5",
                                   "s4",
                                   "s5",
                                   "c4",
                                   "c5",
                                   "edges:v=4:0-1,0-2,1-2,2-3",
                                   "edges:v=5:0-1,0-2,1-2,2-3,3-4",
                                   "edges:v=4:0-1,2-3"};
    for (const auto& spec : specs) {
        Pattern h = pattern_from_spec(spec);
        if (h.edge_count() < 2)
            continue;
        CAPTURE(spec);
        CHECK(g1(h) == oracle::brute_g1(h));
        CHECK(g2(h) == oracle::brute_g2(h));
        CHECK(max_density(h) == oracle::brute_m(h));
        if (h.vertex_count >= 3)
            CHECK(max_2density(h) == oracle::brute_m2(h));
    }

    Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        Pattern h = random_pattern(rng, 5, 0.5, 2);
        CAPTURE(h.spec_string());
        CHECK(g1(h) == oracle::brute_g1(h));
        CHECK(g2(h) == oracle::brute_g2(h));
        CHECK(max_density(h) == oracle::brute_m(h));
        CHECK(max_2density(h) == oracle::brute_m2(h));
    }
}

TEST_CASE("clique minus matchings: construction and closed forms")
{
    Pattern h41 = clique_minus_matching(4, 1);
    CHECK(h41.vertex_count == 4);
    CHECK(h41.edge_count() == 5);

    Pattern h53 = clique_minus_matching(5, 3);
    CHECK(h53.vertex_count == 5);
    CHECK(h53.edge_count() == 7);

    Pattern h62 = clique_minus_matching(6, 2);
    CHECK(h62.edge_count() == 13);
    CHECK(g1(h62) == Rational(4, 13));
    CHECK(g2(h62) == Rational(4, 12));

    CHECK_THROWS_AS(clique_minus_matching(5, 4), std::invalid_argument);
    CHECK_THROWS_AS(clique_minus_matching(5, 0), std::invalid_argument);

    // the removed edges really form two edge-disjoint matchings
    for (int k = 3; k <= 8; ++k)
        for (int i = 1; i <= k - 2; ++i) {
            auto removed = clique_matching_edges(k, i);
            CHECK(static_cast<int>(removed.size()) == i);
            int half = k / 2;
            for (size_t a = 0; a < removed.size(); ++a)
                for (size_t b = a + 1; b < removed.size(); ++b) {
                    bool same_matching =
                        (static_cast<int>(a) < half) == (static_cast<int>(b) < half);
                    CHECK(removed[a] != removed[b]);
                    if (same_matching) {
                        CHECK(removed[a].first != removed[b].first);
                        CHECK(removed[a].second != removed[b].second);
                        CHECK(removed[a].first != removed[b].second);
                        CHECK(removed[a].second != removed[b].first);
                    }
                }
        }
}

TEST_CASE("g1/g2 closed forms across the clique-minus-matching family")
{
    for (int k = 3; k <= 8; ++k)
        for (int i = 1; i <= k - 2; ++i) {
            Pattern h = clique_minus_matching(k, i);
            CAPTURE(k);
            CAPTURE(i);
            CHECK(g2(h) == Rational(k - 2, k * (k - 1) / 2 - i - 1));
            if (k == 5 && i == 3) {
                CHECK(g1(h) == Rational(1, 2));
                CHECK(g1(h) == oracle::brute_g1(h));
            } else {
                CHECK(g1(h) == Rational(k - 2, k * (k - 1) / 2 - i));
            }
        }
    // the k=5, i=3 exception is witnessed by K_4 minus an edge: 1/2 > 3/7
    CHECK(Rational(3, 7) < Rational(1, 2));
    // and there g2 = 1/m2
    Pattern h53 = clique_minus_matching(5, 3);
    CHECK(g2(h53) == Rational(1, 1) / max_2density(h53));
}

TEST_CASE("matching labelling is immaterial up to isomorphism")
{
    // swapping which matching edges go first yields an isomorphic graph with
    // identical invariants
    Pattern a = clique_minus_matching(6, 2);
    Pattern b = make_pattern(6, [] {
        std::vector<std::pair<int, int>> es;
        for (int u = 0; u < 6; ++u)
            for (int v = u + 1; v < 6; ++v)
                if (!((u == 2 && v == 3) && true) && !(u == 4 && v == 5))
                    es.push_back({u, v});
        return es;
    }());
    CHECK(g1(a) == g1(b));
    CHECK(g2(a) == g2(b));
    CHECK(max_2density(a) == max_2density(b));
}

TEST_CASE("consequences of the g1/g2 ordering hold on small graphs")
{
    // (ii): g1 < g2 with a connected non-clique subgraph (2 <= e' < e) forces g2 < 1
    // (iii): g1 <= g2 forces g2 = 1/m2
    Rng rng(5);
    auto check_one = [&](const Pattern& raw) {
        // these implications assume no isolated vertices
        Pattern h = raw.without_isolated();
        if (h.edge_count() < 2)
            return;
        Rational one(1, 1);
        if (g1(h) < g2(h) && h.contains_two_adjacent_edges() && h.edge_count() >= 3)
            CHECK(g2(h) < one);
        if (g1(h) <= g2(h) && h.vertex_count >= 3)
            CHECK(g2(h) == one / max_2density(h));
    };
    for (std::uint32_t mask = 0; mask < (1u << 10); ++mask) {
        std::vector<std::pair<int, int>> all;
        for (int u = 0; u < 5; ++u)
            for (int v = u + 1; v < 5; ++v)
                all.push_back({u, v});
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < 10; ++i)
            if (mask & (1u << i))
                edges.push_back(all[i]);
        if (edges.size() < 2)
            continue;
        check_one(make_pattern(5, edges));
    }
    for (int trial = 0; trial < 300; ++trial)
        check_one(random_pattern(rng, 6 + static_cast<int>(uniform_below(rng, 2)), 0.45, 2));
}

TEST_CASE("expected canonical copies and the f minima")
{
    CHECK(expected_canonical_copies(pattern_from_spec("k2"), 10, 0.1) == doctest::Approx(10));
    CHECK(expected_canonical_copies(pattern_from_spec("k3"), 10, 0.5)
          == doctest::Approx(125));
    CHECK(expected_canonical_copies(pattern_from_spec("k3"), 10, 0.0) == doctest::Approx(0));

    Pattern k3 = pattern_from_spec("k3");
    // dense regime: f_hat = s^2 p once p >= s^{-1/m2}
    CHECK(f_hat(k3, 100, 0.2) == doctest::Approx(100.0 * 100.0 * 0.2));
    // sparse regime: the full-triangle profile wins
    CHECK(f_hat(k3, 100, 1e-3) == doctest::Approx(1e-3));
    // f over the smaller family dominates f_hat
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Pattern h = random_pattern(rng, 5, 0.6, 2);
        double p = 0.05 + 0.9 * (trial / 50.0);
        CHECK(f_lower(h, 30, p) >= f_hat(h, 30, p) - 1e-9);
    }
}

TEST_CASE("f lower bounds from the density window")
{
    // p <= c0^{-1} s^{-g1} gives f >= c0^{e} s^{v} p^{e}; same with 1/m2 when
    // m2-balanced
    for (double c0 : {0.5, 1.0}) {
        for (const char* spec : {"k4", "k5", "p4", "c5"}) {
            Pattern h = pattern_from_spec(spec);
            double ge1 = g1(h).to_double();
            for (int s : {20, 50, 200}) {
                double p_max = std::pow(s, -ge1) / c0;
                for (double frac : {0.2, 0.6, 1.0}) {
                    double p = std::min(1.0, p_max * frac);
                    if (p <= 0)
                        continue;
                    double bound = std::pow(c0, h.edge_count())
                        * std::pow(static_cast<double>(s), h.vertex_count)
                        * std::pow(p, h.edge_count());
                    CHECK(f_lower(h, s, p) >= bound * (1 - 1e-9));
                }
            }
        }
        Pattern h53 = clique_minus_matching(5, 3);
        double m2 = max_2density(h53).to_double();
        for (int s : {20, 100}) {
            double p = std::min(1.0, std::pow(s, -1.0 / m2) / c0);
            double bound = std::pow(c0, h53.edge_count())
                * std::pow(static_cast<double>(s), h53.vertex_count)
                * std::pow(p, h53.edge_count());
            CHECK(f_lower(h53, s, p) >= bound * (1 - 1e-9));
        }
    }
}

TEST_CASE("bias windows")
{
    Pattern k3 = pattern_from_spec("k3");
    BiasWindow w = bias_window(k3, 100, Regime::dense, 0.5, 1.0, 1.0);
    CHECK(w.lower == doctest::Approx(2.0));
    CHECK(w.upper == doctest::Approx(10.0)); // 100^{1/2}

    Pattern h62 = clique_minus_matching(6, 2);
    BiasWindow w2 = bias_window(h62, 4096, Regime::g1g2, 0.5, 1.0, 1.0);
    CHECK(w2.lower == doctest::Approx(std::pow(2.0, 48.0 / 13.0)));
    CHECK(w2.upper == doctest::Approx(16.0));

    // round budget: floor((1-alpha) e s^2 / (b+1))
    CHECK(round_budget(k3, 10, 1, 0.5) == 75); // floor(0.5*300/2)
    CHECK(round_budget(k3, 10, 3, 0.5) == 37);

    // proof-given constants need delta
    BiasWindow w3 = bias_window(h62, 4096, Regime::g1g2, 0.5, 0, 0, 0.1);
    CHECK(w3.lower == doctest::Approx(0.5 * 13 / 0.1 * std::pow(4096.0, 4.0 / 13.0)));

    // regime hypotheses are enforced
    CHECK_THROWS_AS(bias_window(pattern_from_spec("edges:v=4:0-1,2-3"), 10, Regime::g1g2, 0.5,
                                1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(bias_window(pattern_from_spec("p4"), 10, Regime::m2balanced, 0.5, 1, 1),
                    std::invalid_argument);
}
