#pragma once

#include "posgame/pattern.hpp"
#include "posgame/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace posgame {

// m(H): max e'/v' over nonempty subgraphs
Rational max_density(const Pattern& h);

// m2(H): max (e'-1)/(v'-2) over subgraphs with at least 3 vertices
Rational max_2density(const Pattern& h);

// true iff m2 is attained by H itself; also verifies the equivalent
// subgraph condition and asserts the two routes agree
bool is_m2_balanced(const Pattern& h);

Rational g1(const Pattern& h);
Rational g2(const Pattern& h);

double expected_canonical_copies(const Pattern& h_sub, std::uint64_t n, double p);

// min E(Y_{H'}) over subgraphs with e' >= 1
double f_hat(const Pattern& h, std::uint64_t n, double p);

// min E(Y_{H'}) over non-clique subgraphs (including H itself) with e' >= 2
double f_lower(const Pattern& h, std::uint64_t n, double p);

// the first i edges of two fixed edge-disjoint matchings of K_k, in order
std::vector<std::pair<int, int>> clique_matching_edges(int k, int i);

// K_k minus clique_matching_edges(k, i)
Pattern clique_minus_matching(int k, int i);

enum class Regime { dense, g1g2, m2balanced };

struct BiasWindow {
    Regime regime = Regime::dense;
    double lower = 0; // on b+1
    double upper = 0;
};

// Parameter windows on b+1 for the three winning-criteria regimes.
// c1/c2 are free knobs; proof_delta, when given, switches the g1g2 window to
// the proof-given constants c1 = (1-alpha) e(H)/delta, c2 = (1-alpha) e(H)/2
// (and c1 = (1-alpha) e(H), c2 = 2 (1-alpha) e(H) for the m2-balanced window).
BiasWindow bias_window(const Pattern& h, int s, Regime regime, double alpha, double c1,
                       double c2, std::optional<double> proof_delta = std::nullopt);

// M = floor((1-alpha) e(H) s^2 / (b+1))
std::uint64_t round_budget(const Pattern& h, int s, int b, double alpha);

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

} // namespace posgame
