#pragma once

#include "posgame/pattern.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace posgame {

using Element = std::uint32_t;
inline constexpr Element kNoElement = ~Element(0);

// Bitset over board element indices. Length always equals the element count
// of the board it was created for.
class EdgeSet {
public:
    EdgeSet() = default;
    explicit EdgeSet(std::size_t n)
        : bits_((n + 63) / 64, 0)
        , size_(n)
    {
    }

    std::size_t size() const { return size_; }

    bool test(Element i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
    void set(Element i) { bits_[i >> 6] |= 1ULL << (i & 63); }
    void reset(Element i) { bits_[i >> 6] &= ~(1ULL << (i & 63)); }

    std::uint64_t count() const;

    template <typename F>
    void for_each(F&& f) const
    {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                unsigned bit = __builtin_ctzll(word);
                f(static_cast<Element>(w * 64 + bit));
                word &= word - 1;
            }
        }
    }

    friend bool operator==(const EdgeSet&, const EdgeSet&) = default;

private:
    std::vector<std::uint64_t> bits_;
    std::size_t size_ = 0;
};

// An indexed edge universe: either all pairs of K_n or the blow-up of a
// pattern. Element ids are dense 0..N-1 and computable in O(1) both ways;
// nothing is materialized, so K_4096 boards are cheap.
struct Board {
    enum class Kind { complete, blowup };

    Kind kind = Kind::complete;
    int vertex_count = 0;
    std::uint64_t element_count = 0;

    // blow-up only
    Pattern base;          // no isolated vertices
    int part_size = 0;     // s
    std::string base_spec; // as given, for descriptors

    static Board complete(int n);
    static Board blowup(const Pattern& h, int s, const std::string& spec_hint = "");

    int parts() const { return kind == Kind::blowup ? base.vertex_count : 0; }
    int part_of(int v) const { return kind == Kind::blowup ? v / part_size : -1; }

    std::pair<int, int> endpoints(Element id) const;
    Element element_id(int u, int v) const; // kNoElement when the pair is not on the board

    // blow-up block (base-edge index) joining two parts, or -1
    int block_of_parts(int a, int b) const
    {
        return block_of_[static_cast<size_t>(a) * base.vertex_count + b];
    }

    std::string descriptor() const;
    static Board from_descriptor(const std::string& desc);

private:
    std::vector<int> block_of_;                  // parts x parts -> block index or -1
    std::vector<std::pair<int, int>> blocks_;    // block -> base edge (a < b)
};

} // namespace posgame
