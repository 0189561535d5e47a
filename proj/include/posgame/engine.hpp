#pragma once

#include "posgame/board.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace posgame {

enum class Owner : std::uint8_t { free_, client, waiter };

// One round per entry: the offered ids followed by the pick. Offers are kept
// flattened; offer_begin has rounds+1 entries.
struct Transcript {
    std::vector<Element> offers;
    std::vector<std::uint32_t> offer_begin = {0};
    std::vector<Element> picks;

    std::uint32_t rounds() const { return static_cast<std::uint32_t>(picks.size()); }
    std::span<const Element> offer(std::uint32_t round) const
    {
        return {offers.data() + offer_begin[round],
                offers.data() + offer_begin[round + 1]};
    }
};

struct GameState {
    const Board* board = nullptr;
    std::vector<Owner> owner;
    int bias = 0;
    std::uint32_t round = 0;
    std::uint64_t free_count = 0;
    std::uint64_t client_count = 0;
    std::uint64_t waiter_count = 0;
    bool finalized = false;
    Transcript transcript;

    Owner owner_of(Element e) const { return owner[e]; }
    EdgeSet client_set() const;
    EdgeSet owned_set(Owner who) const;
};

struct StrategyError : std::runtime_error {
    std::string snapshot;
    StrategyError(const std::string& what, std::string snap)
        : std::runtime_error(what)
        , snapshot(std::move(snap))
    {
    }
};

GameState new_game(const Board& board, int bias);

// Offer must be exactly b+1 distinct free elements and pick one of them.
void apply_round(GameState& s, std::span<const Element> offer, Element pick);

// Hands every remaining free element to Waiter; only legal when fewer than
// b+1 remain.
void finalize(GameState& s);

// Winning sets: an explicit list of element-id sets, or all copies of a
// pattern on the board (canonical copies when the flag is set).
struct WinningFamily {
    std::vector<std::vector<Element>> sets;
    bool implicit = false;
    Pattern pattern;
    bool canonical = false;

    static WinningFamily explicit_sets(std::vector<std::vector<Element>> sets);
    static WinningFamily copies_of(Pattern h, bool canonical_flag = false);
};

std::uint64_t game_value(const GameState& s, const WinningFamily& family);

class WaiterStrategy;
class ClientStrategy;

// Alternates offers and picks until fewer than b+1 elements remain, then
// finalizes. max_rounds cuts the game short (no finalize in that case).
GameState play(const Board& board, int bias, WaiterStrategy& waiter, ClientStrategy& client,
               std::uint64_t max_rounds = ~0ULL);

std::string write_transcript(const GameState& s, std::uint64_t seed);

struct ReplayResult {
    std::shared_ptr<Board> board; // keeps state.board alive
    GameState state;
    std::uint64_t seed = 0;
};

ReplayResult replay_transcript(const std::string& text);

} // namespace posgame
