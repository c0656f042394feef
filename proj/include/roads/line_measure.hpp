#pragma once

#include <cstdint>
#include <vector>

#include "roads/rational.hpp"
#include "roads/rng.hpp"
#include "roads/tree.hpp"

namespace roads {

// A non-backtracking path from the root, stored by its deepest vertex (the
// label is the whole path). Extendable by a sampler.
class RayPrefix {
public:
    RayPrefix() = default;
    explicit RayPrefix(Vertex tip) : tip_(std::move(tip)) {}

    int depth() const { return tip_.depth(); }
    const Vertex& tip() const { return tip_; }
    Vertex vertex_at(int k) const { return tip_.prefix(k); }

    // Extends the ray to the requested depth with uniform child choices.
    void extend(Rng& rng, int to_depth);

private:
    Vertex tip_;
};

// Intersection of a line with ball(R): the unordered pair of its depth-R
// exit vertices. Equal endpoints encode a line whose closest point to the
// root sits on the boundary sphere (trace inside the ball is that single
// vertex).
class TruncatedLine {
public:
    TruncatedLine(int radius, Vertex u, Vertex v);

    int radius() const { return radius_; }
    const Vertex& endpoint_a() const { return a_; }
    const Vertex& endpoint_b() const { return b_; }
    const Vertex& apex() const { return apex_; }

    bool contains(const Vertex& v) const;
    std::vector<Vertex> trace() const;

private:
    int radius_ = 1;
    Vertex a_, b_;  // shortlex-sorted, both at depth radius_
    Vertex apex_;
};

// Boundary metric on rays: 2^{-depth(meet)}, or 0 for equal prefixes that
// cannot be distinguished (full rays compare equal only in the limit).
Rational boundary_distance(const RayPrefix& xi, const RayPrefix& eta);

// mu<x,y> = 2^{-d(x,y)}, the normalized invariant measure of lines through
// both x and y. Rejects x == y.
Rational mu_pair(const Vertex& x, const Vertex& y);

// Measure of lines passing through every vertex of S. Zero unless S lies on
// a single geodesic; mu<x> = 3/4 for singletons.
Rational mu_through_set(const std::vector<Vertex>& s);

// Measure of lines hitting a nonempty connected S: (|S|+2)/4. Rejects
// disconnected input.
Rational mu_hitting_connected(const std::vector<Vertex>& s);

// Line with the two given rays as endpoints, truncated to ball(R). Throws if
// the prefixes have not diverged by depth R.
TruncatedLine lambda_map(const RayPrefix& xi, const RayPrefix& eta, int radius);

// Non-backtracking random walk from the root: first step uniform on 3
// directions, then uniform on the 2 children.
RayPrefix sample_ray(Rng& rng, int depth);

struct MuEstimate {
    double estimate = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

// Monte Carlo pushforward estimator of the unnormalized measure
// mu~<x,y> = E[ d(X,Y)^{-2} ; line(X,Y) passes through x and y ]
// over independent ray pairs, where d is the boundary metric. Converges to
// (8/9) * 2^{-d(x,y)}; multiply by 9/8 to recover mu_pair.
MuEstimate estimate_mu_unnormalized(const Vertex& x, const Vertex& y,
                                    std::size_t samples, Rng& rng);

// Normalization constant of the pushforward estimator.
inline constexpr double kMuEstimatorConstant = 8.0 / 9.0;

}  // namespace roads
