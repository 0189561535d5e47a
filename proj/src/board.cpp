#include "posgame/board.hpp"

#include <bit>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace posgame {

std::uint64_t EdgeSet::count() const
{
    std::uint64_t c = 0;
    for (auto w : bits_)
        c += std::popcount(w);
    return c;
}

Board Board::complete(int n)
{
    if (n < 0)
        throw std::invalid_argument("board: negative vertex count");
    Board b;
    b.kind = Kind::complete;
    b.vertex_count = n;
    b.element_count = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (b.element_count > std::numeric_limits<Element>::max())
        throw std::overflow_error("board: element count exceeds index capacity");
    return b;
}

Board Board::blowup(const Pattern& h, int s, const std::string& spec_hint)
{
    if (s < 1)
        throw std::invalid_argument("blowup: part size must be >= 1");
    if (h.edge_count() < 1)
        throw std::invalid_argument("blowup: pattern needs at least one edge");

    Pattern base = h;
    if (base.without_isolated().vertex_count != base.vertex_count) {
        std::cerr << "warning: stripping isolated vertices from blow-up pattern\n";
        base = base.without_isolated();
    }

    Board b;
    b.kind = Kind::blowup;
    b.base = base;
    b.base_spec = spec_hint.empty() ? base.spec_string() : spec_hint;
    b.part_size = s;
    b.vertex_count = base.vertex_count * s;
    std::uint64_t n = static_cast<std::uint64_t>(base.edge_count()) * s * s;
    if (n > std::numeric_limits<Element>::max())
        throw std::overflow_error("blowup: element count exceeds index capacity");
    b.element_count = n;

    int t = base.vertex_count;
    b.block_of_.assign(static_cast<size_t>(t) * t, -1);
    for (int i = 0; i < base.edge_count(); ++i) {
        auto [a, c] = base.edges[i];
        b.block_of_[static_cast<size_t>(a) * t + c] = i;
        b.block_of_[static_cast<size_t>(c) * t + a] = i;
        b.blocks_.push_back({a, c});
    }
    return b;
}

std::pair<int, int> Board::endpoints(Element id) const
{
    if (id >= element_count)
        throw std::out_of_range("board: element id out of range");
    if (kind == Kind::complete) {
        // row u starts at offset u*n - u(u+1)/2
        std::uint64_t n = vertex_count;
        // invert: solve largest u with offset(u) <= id
        double approx = n - 0.5 - std::sqrt((n - 0.5) * (n - 0.5) - 2.0 * id);
        int u = static_cast<int>(approx);
        if (u < 0)
            u = 0;
        auto offset = [n](std::uint64_t r) { return r * n - r * (r + 1) / 2; };
        while (u > 0 && offset(u) > id)
            --u;
        while (offset(u + 1) <= id)
            ++u;
        int v = static_cast<int>(id - offset(u)) + u + 1;
        return {u, v};
    }
    std::uint64_t s = part_size;
    std::uint64_t block = id / (s * s);
    std::uint64_t r = id % (s * s);
    auto [a, c] = blocks_[block];
    int x = a * part_size + static_cast<int>(r / s);
    int y = c * part_size + static_cast<int>(r % s);
    return {x, y};
}

Element Board::element_id(int u, int v) const
{
    if (u == v || u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
        return kNoElement;
    if (kind == Kind::complete) {
        if (u > v)
            std::swap(u, v);
        std::uint64_t n = vertex_count;
        std::uint64_t off = static_cast<std::uint64_t>(u) * n - static_cast<std::uint64_t>(u) * (u + 1) / 2;
        return static_cast<Element>(off + (v - u - 1));
    }
    int pu = part_of(u), pv = part_of(v);
    if (pu == pv)
        return kNoElement;
    int block = block_of_[static_cast<size_t>(pu) * base.vertex_count + pv];
    if (block < 0)
        return kNoElement;
    auto [a, c] = blocks_[block];
    int x = pu == a ? u : v; // endpoint in the lower-labelled part
    int y = pu == a ? v : u;
    std::uint64_t s = part_size;
    return static_cast<Element>(block * s * s + static_cast<std::uint64_t>(x - a * part_size) * s
                                + (y - c * part_size));
}

std::string Board::descriptor() const
{
    if (kind == Kind::complete)
        return "complete:" + std::to_string(vertex_count);
    return "blowup:" + base_spec + ":" + std::to_string(part_size);
}

Board Board::from_descriptor(const std::string& desc)
{
    if (desc.rfind("complete:", 0) == 0)
        return complete(std::stoi(desc.substr(9)));
    if (desc.rfind("blowup:", 0) == 0) {
        size_t last = desc.rfind(':');
        if (last == 6)
            throw std::invalid_argument("board descriptor: missing part size");
        std::string spec = desc.substr(7, last - 7);
        int s = std::stoi(desc.substr(last + 1));
        return blowup(pattern_from_spec(spec), s, spec);
    }
    throw std::invalid_argument("board descriptor: unknown form '" + desc + "'");
}

} // namespace posgame
