#pragma once

#include <cstdint>
#include <utility>

#include "roads/tree.hpp"

namespace roads {

// Flat integer indexing of ball(R), used by the Monte Carlo kernels so hot
// loops never touch label vectors. A vertex is (depth d, position pos) with
// pos in [0, 3*2^(d-1)); position bit arithmetic mirrors the label tree:
// the leading "third" of the position range is the first digit, later bits
// are the 1/2 child choices.
namespace ball_index {

inline std::uint32_t level_size(int d) {
    return d == 0 ? 1u : (3u << (d - 1));
}

// Index of the first depth-d vertex; the root has index 0.
inline std::uint32_t level_offset(int d) {
    return d == 0 ? 0u : (3u << (d - 1)) - 2u;
}

inline std::uint32_t ball_size(int radius) {
    return (3u << radius) - 2u;
}

inline std::uint32_t id_of(int d, std::uint32_t pos) {
    return level_offset(d) + pos;
}

inline std::uint32_t parent_pos(std::uint32_t pos) { return pos >> 1; }

// Position of the depth-d0 ancestor of (d, pos).
inline std::uint32_t ancestor_pos(int d, std::uint32_t pos, int d0) {
    return pos >> (d - d0);
}

inline Vertex to_vertex(int d, std::uint32_t pos) {
    if (d == 0) return Vertex{};
    std::vector<std::uint8_t> digits(static_cast<std::size_t>(d));
    digits[0] = static_cast<std::uint8_t>((pos >> (d - 1)) + 1);
    for (int i = 1; i < d; ++i)
        digits[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(((pos >> (d - 1 - i)) & 1u) + 1);
    return Vertex(std::move(digits));
}

inline std::uint32_t pos_of(const Vertex& v) {
    std::uint32_t pos = 0;
    const auto& digits = v.digits();
    for (std::size_t i = 0; i < digits.size(); ++i)
        pos = (i == 0) ? static_cast<std::uint32_t>(digits[0] - 1)
                       : (pos << 1) | static_cast<std::uint32_t>(digits[i] - 1);
    return pos;
}

inline std::pair<int, std::uint32_t> locate(std::uint32_t id) {
    if (id == 0) return {0, 0};
    int d = 1;
    while (id >= level_offset(d + 1)) ++d;
    return {d, id - level_offset(d)};
}

}  // namespace ball_index
}  // namespace roads
