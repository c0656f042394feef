#pragma once

#include <cstdint>

#include "roads/ball_index.hpp"
#include "roads/line_measure.hpp"
#include "roads/rng.hpp"

namespace roads {

// Index-form line truncated to ball(R). Endpoints are depth-R positions;
// a line whose apex sits on the boundary sphere has end_a == end_b.
struct IdxLine {
    std::int32_t apex_depth = 0;
    std::uint32_t apex_pos = 0;
    std::uint32_t end_a = 0;
    std::uint32_t end_b = 0;
};

// One line from the normalized measure restricted to <ball(R)>, total mass
// (3/4) * 2^R. Exactness rests on the apex partition of mu: the apex is the
// root with mass 3/4 and any other ball vertex with mass 1/4, and the rays
// beyond the apex are uniform non-backtracking extensions.
inline IdxLine sample_idx_line(int radius, Rng& rng) {
    IdxLine line;
    const std::uint32_t quarters = 3u << radius;  // total mass in quarters
    const std::uint32_t j = rng.uniform_below(quarters);
    if (j < 3) {
        // Apex at the root; j doubles as the uniform choice of the excluded
        // direction, leaving an unordered pair of the 3 root directions.
        line.apex_depth = 0;
        line.apex_pos = 0;
        line.end_a = (j + 1) % 3;
        line.end_b = (j + 2) % 3;
    } else {
        const auto [d, pos] = ball_index::locate(j - 3 + 1);
        line.apex_depth = d;
        line.apex_pos = pos;
        if (d == radius) {
            line.end_a = line.end_b = pos;
            return line;
        }
        line.end_a = pos << 1;
        line.end_b = (pos << 1) | 1u;
        // ends now sit at depth apex_depth + 1 and get extended below; the
        // root case starts its ends at depth 1 as well.
        for (int depth = line.apex_depth + 1; depth < radius; ++depth) {
            line.end_a = (line.end_a << 1) | (rng.bit() ? 1u : 0u);
            line.end_b = (line.end_b << 1) | (rng.bit() ? 1u : 0u);
        }
        if (line.end_b < line.end_a) std::swap(line.end_a, line.end_b);
        return line;
    }
    for (int depth = 1; depth < radius; ++depth) {
        line.end_a = (line.end_a << 1) | (rng.bit() ? 1u : 0u);
        line.end_b = (line.end_b << 1) | (rng.bit() ? 1u : 0u);
    }
    if (line.end_b < line.end_a) std::swap(line.end_a, line.end_b);
    return line;
}

inline TruncatedLine to_truncated(const IdxLine& line, int radius) {
    return TruncatedLine(radius, ball_index::to_vertex(radius, line.end_a),
                         ball_index::to_vertex(radius, line.end_b));
}

// True iff the trace inside ball(R) contains (d, pos).
inline bool idx_line_contains(const IdxLine& line, int radius, int d, std::uint32_t pos) {
    if (d < line.apex_depth) return false;
    if (d == line.apex_depth) return pos == line.apex_pos;
    if (d > radius) return false;
    return ball_index::ancestor_pos(radius, line.end_a, d) == pos ||
           ball_index::ancestor_pos(radius, line.end_b, d) == pos;
}

// Visits every trace vertex strictly below the apex, i.e. the deeper
// endpoint of every trace edge, as f(depth, pos).
template <class F>
inline void for_trace_edges(const IdxLine& line, int radius, F&& f) {
    std::uint32_t pos = line.end_a;
    for (int d = radius; d > line.apex_depth; --d, pos >>= 1) f(d, pos);
    if (line.end_b != line.end_a) {
        pos = line.end_b;
        for (int d = radius; d > line.apex_depth; --d, pos >>= 1) f(d, pos);
    }
}

// Visits every trace vertex, apex included.
template <class F>
inline void for_trace_vertices(const IdxLine& line, int radius, F&& f) {
    f(line.apex_depth, line.apex_pos);
    for_trace_edges(line, radius, f);
}

}  // namespace roads
