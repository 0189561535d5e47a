#include "posgame/engine.hpp"
#include "posgame/counting.hpp"
#include "posgame/strategies.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>

namespace posgame {

EdgeSet GameState::client_set() const
{
    return owned_set(Owner::client);
}

EdgeSet GameState::owned_set(Owner who) const
{
    EdgeSet es(owner.size());
    for (Element e = 0; e < owner.size(); ++e)
        if (owner[e] == who)
            es.set(e);
    return es;
}

GameState new_game(const Board& board, int bias)
{
    if (bias < 1)
        throw std::invalid_argument("new_game: bias must be >= 1");
    GameState s;
    s.board = &board;
    s.owner.assign(board.element_count, Owner::free_);
    s.bias = bias;
    s.free_count = board.element_count;
    return s;
}

namespace {

    std::string state_snapshot(const GameState& s, std::span<const Element> offer)
    {
        std::ostringstream out;
        out << "round=" << s.round << " free=" << s.free_count << " offer=";
        for (size_t i = 0; i < offer.size(); ++i)
            out << (i ? "," : "") << offer[i];
        return out.str();
    }

} // namespace

void apply_round(GameState& s, std::span<const Element> offer, Element pick)
{
    const size_t want = static_cast<size_t>(s.bias) + 1;
    if (offer.size() != want)
        throw StrategyError("offer size != b+1", state_snapshot(s, offer));
    bool pick_seen = false;
    for (size_t i = 0; i < offer.size(); ++i) {
        Element e = offer[i];
        if (e >= s.owner.size())
            throw StrategyError("offered element out of range", state_snapshot(s, offer));
        if (s.owner[e] != Owner::free_)
            throw StrategyError("offered element is not free", state_snapshot(s, offer));
        for (size_t j = i + 1; j < offer.size(); ++j)
            if (offer[j] == e)
                throw StrategyError("offer repeats an element", state_snapshot(s, offer));
        if (e == pick)
            pick_seen = true;
    }
    if (!pick_seen)
        throw StrategyError("pick outside offer", state_snapshot(s, offer));

    for (Element e : offer) {
        s.owner[e] = e == pick ? Owner::client : Owner::waiter;
        --s.free_count;
    }
    s.client_count += 1;
    s.waiter_count += s.bias;
    s.round += 1;
    s.transcript.offers.insert(s.transcript.offers.end(), offer.begin(), offer.end());
    s.transcript.offer_begin.push_back(static_cast<std::uint32_t>(s.transcript.offers.size()));
    s.transcript.picks.push_back(pick);
}

void finalize(GameState& s)
{
    if (s.free_count >= static_cast<std::uint64_t>(s.bias) + 1)
        throw std::logic_error("finalize: more than b free elements remain");
    if (s.free_count > 0)
        for (Element e = 0; e < s.owner.size(); ++e)
            if (s.owner[e] == Owner::free_) {
                s.owner[e] = Owner::waiter;
                ++s.waiter_count;
                --s.free_count;
            }
    s.finalized = true;
}

WinningFamily WinningFamily::explicit_sets(std::vector<std::vector<Element>> sets)
{
    WinningFamily f;
    f.sets = std::move(sets);
    return f;
}

WinningFamily WinningFamily::copies_of(Pattern h, bool canonical_flag)
{
    WinningFamily f;
    f.implicit = true;
    Pattern stripped = h.without_isolated();
    if (stripped.vertex_count != h.vertex_count)
        std::cerr << "warning: stripping isolated vertices from the game pattern\n";
    f.pattern = std::move(stripped);
    f.canonical = canonical_flag;
    return f;
}

std::uint64_t game_value(const GameState& s, const WinningFamily& family)
{
    if (!family.implicit) {
        std::uint64_t v = 0;
        for (const auto& set : family.sets) {
            bool all = !set.empty();
            for (Element e : set) {
                if (e >= s.owner.size())
                    throw std::invalid_argument("winning set references invalid element");
                if (s.owner[e] != Owner::client) {
                    all = false;
                    break;
                }
            }
            v += all;
        }
        return v;
    }
    EdgeSet claimed = s.client_set();
    if (family.canonical) {
        if (s.board->kind != Board::Kind::blowup)
            throw std::invalid_argument("canonical family on a non-blow-up board");
        return count_canonical_copies(*s.board, claimed, family.pattern);
    }
    return count_copies(*s.board, claimed, family.pattern);
}

GameState play(const Board& board, int bias, WaiterStrategy& waiter, ClientStrategy& client,
               std::uint64_t max_rounds)
{
    GameState s = new_game(board, bias);
    while (s.free_count >= static_cast<std::uint64_t>(bias) + 1 && s.round < max_rounds) {
        auto offer = waiter.offer(s);
        std::sort(offer.begin(), offer.end());
        Element pick = client.pick(s, offer);
        apply_round(s, offer, pick);
        waiter.notify(s);
    }
    if (s.free_count < static_cast<std::uint64_t>(bias) + 1)
        finalize(s);
    return s;
}

std::string write_transcript(const GameState& s, std::uint64_t seed)
{
    std::ostringstream out;
    out << "posgame-transcript v1\n";
    out << "board " << s.board->descriptor() << "\n";
    out << "b " << s.bias << "\n";
    out << "seed " << seed << "\n";
    out << "rounds " << s.transcript.rounds() << "\n";
    for (std::uint32_t r = 0; r < s.transcript.rounds(); ++r) {
        out << "R" << r << ": offer=";
        auto offer = s.transcript.offer(r);
        for (size_t i = 0; i < offer.size(); ++i)
            out << (i ? "," : "") << offer[i];
        out << " pick=" << s.transcript.picks[r] << "\n";
    }
    return out.str();
}

ReplayResult replay_transcript(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "posgame-transcript v1")
        throw std::invalid_argument("transcript: bad header");
    std::string word, board_desc;
    int bias = 0;
    std::uint64_t seed = 0, rounds = 0;
    in >> word >> board_desc;
    if (word != "board")
        throw std::invalid_argument("transcript: missing board line");
    in >> word >> bias;
    if (word != "b")
        throw std::invalid_argument("transcript: missing bias line");
    in >> word >> seed;
    if (word != "seed")
        throw std::invalid_argument("transcript: missing seed line");
    in >> word >> rounds;
    if (word != "rounds")
        throw std::invalid_argument("transcript: missing rounds line");

    auto board_ptr = std::make_shared<Board>(Board::from_descriptor(board_desc));
    const Board& board = *board_ptr;

    GameState s = new_game(board, bias);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        std::string tag, offer_part, pick_part;
        in >> tag >> offer_part >> pick_part;
        if (tag != "R" + std::to_string(r) + ":")
            throw std::invalid_argument("transcript: bad round tag " + tag);
        if (offer_part.rfind("offer=", 0) != 0 || pick_part.rfind("pick=", 0) != 0)
            throw std::invalid_argument("transcript: bad round line");
        std::vector<Element> offer;
        std::istringstream os(offer_part.substr(6));
        std::string item;
        while (std::getline(os, item, ','))
            offer.push_back(static_cast<Element>(std::stoul(item)));
        Element pick = static_cast<Element>(std::stoul(pick_part.substr(5)));
        apply_round(s, offer, pick);
    }
    if (s.free_count < static_cast<std::uint64_t>(bias) + 1)
        finalize(s);
    return ReplayResult{std::move(board_ptr), std::move(s), seed};
}

} // namespace posgame
