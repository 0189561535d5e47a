#pragma once

#include "posgame/board.hpp"
#include "posgame/pattern.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace posgame {

// G(H,n,p): every blow-up edge independently with probability p
EdgeSet sample_gnp(const Board& blowup_board, double p, std::uint64_t seed);

// G(H,n,M): a uniform M-subset of the blow-up edges
EdgeSet sample_gnm(const Board& blowup_board, std::uint64_t m, std::uint64_t seed);

// Canonical copies of the base pattern, pairwise intersecting in nothing or
// a clique of the base.
struct SparseFamily {
    std::vector<std::vector<std::uint32_t>> copies; // vertex tuple per part
};

// classification of the intersection of two canonical copies
enum class IntersectionKind { disjoint, clique, bad };
IntersectionKind classify_intersection(const Pattern& base,
                                       const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b);

bool sparse_family_ok(const Pattern& base, const std::vector<std::vector<std::uint32_t>>& copies);

// greedy lexicographic scan: keep a copy iff compatible with everything kept
std::vector<std::vector<std::uint32_t>>
greedy_disjointify(const Pattern& base, const std::vector<std::vector<std::uint32_t>>& copies);

struct PropertyReport {
    bool p1 = true, p2 = true, p3 = true, p4 = true, p5 = true;
    double p_used = 0;       // edge density the thresholds were evaluated at
    double f_value = 0;      // f_H(n, p)
    double rho = -1;         // sampled-mode acceptance probability
    bool rho_clamped = false;
    std::vector<std::string> witnesses;

    bool all_ok() const { return p1 && p2 && p3 && p4 && p5; }
};

PropertyReport check_properties(const std::vector<std::vector<std::uint32_t>>& copies,
                                const Board& blowup_board, const EdgeSet& g, double big_c);

enum class ExtractMode { sampled, greedy };
ExtractMode extract_mode_from_name(const std::string& name);

struct ExtractResult {
    SparseFamily family;
    PropertyReport report;                              // on the pre-disjointification set
    std::vector<std::vector<std::uint32_t>> pre_family; // accepted (and deletion-filtered)
    std::uint64_t canonical_copies = 0;                 // all copies found in g
};

// sampled mode: accept each canonical copy with probability
// rho = f_H(n,p)/E(Y_H), delete violators of the membership rules in one
// pass against the accepted family, then greedily disjointify. greedy mode:
// skip acceptance and deletion.
ExtractResult extract_sparse_family(const Board& blowup_board, const EdgeSet& g, double big_c,
                                    ExtractMode mode, std::uint64_t seed,
                                    std::uint64_t max_visits = 10'000'000);

} // namespace posgame
