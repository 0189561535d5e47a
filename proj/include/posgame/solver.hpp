#pragma once

#include "posgame/engine.hpp"
#include "posgame/strategies.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace posgame {

// Exact game value by full minimax over offers and picks, memoized on the
// ownership vector (base-3 key). Boards are capped at 12 elements.
std::uint64_t exact_value(const Board& board, const WinningFamily& family, int bias);

struct SolveResult {
    std::uint64_t value = 0;
    Transcript principal_variation;
};

SolveResult solve_with_pv(const Board& board, const WinningFamily& family, int bias);

// Value the fixed Waiter strategy guarantees: an exhaustive walk of every
// Client reply sequence. With maximize_value the adversary Client tries to
// MAXIMIZE the count instead (used to certify that a bad family stays empty
// on every reply path). round_limit = 0 plays to the end of the board.
struct CertifyOptions {
    std::uint64_t round_limit = 0;
    bool maximize_value = false;
    // called at every leaf with the final state and the waiter that played it
    std::function<void(const GameState&, const WaiterStrategy&)> on_leaf;
};

std::uint64_t certify_waiter(const Board& board, const WinningFamily& family, int bias,
                             const WaiterStrategy& prototype, const CertifyOptions& opts = {});

} // namespace posgame
