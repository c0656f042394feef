#include "roads/line_measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace roads {

void RayPrefix::extend(Rng& rng, int to_depth) {
    auto digits = tip_.digits();
    if (digits.empty() && to_depth > 0) {
        digits.push_back(static_cast<std::uint8_t>(1 + rng.uniform_below(3)));
    }
    while (static_cast<int>(digits.size()) < to_depth)
        digits.push_back(static_cast<std::uint8_t>(1 + (rng.bit() ? 1 : 0)));
    tip_ = Vertex(std::move(digits));
}

TruncatedLine::TruncatedLine(int radius, Vertex u, Vertex v) : radius_(radius) {
    if (radius < 1) throw std::invalid_argument("truncation radius must be >= 1");
    if (u.depth() != radius || v.depth() != radius)
        throw std::invalid_argument("endpoints must sit at the truncation depth");
    if (v < u) std::swap(u, v);
    a_ = std::move(u);
    b_ = std::move(v);
    apex_ = meet(a_, b_);
}

bool TruncatedLine::contains(const Vertex& v) const {
    return apex_.is_prefix_of(v) && (v.is_prefix_of(a_) || v.is_prefix_of(b_));
}

std::vector<Vertex> TruncatedLine::trace() const {
    return geodesic(a_, b_);
}

Rational boundary_distance(const RayPrefix& xi, const RayPrefix& eta) {
    const Vertex m = meet(xi.tip(), eta.tip());
    if (m.depth() == std::min(xi.depth(), eta.depth())) return Rational(0, 1);
    return Rational::pow2(-m.depth());
}

Rational mu_pair(const Vertex& x, const Vertex& y) {
    if (x == y) throw std::invalid_argument("mu_pair requires distinct vertices");
    return Rational::pow2(-distance(x, y));
}

Rational mu_through_set(const std::vector<Vertex>& s) {
    if (s.empty()) throw std::invalid_argument("mu_through_set requires a nonempty set");
    std::set<Vertex> uniq(s.begin(), s.end());
    if (uniq.size() == 1) return Rational(3, 4);
    // Extremal pair of the set: farthest from an arbitrary vertex, then
    // farthest from that (tree diameter endpoints).
    const Vertex& s0 = *uniq.begin();
    const Vertex* a = &s0;
    for (const auto& v : uniq)
        if (distance(s0, v) > distance(s0, *a)) a = &v;
    const Vertex* b = a;
    for (const auto& v : uniq)
        if (distance(*a, v) > distance(*a, *b)) b = &v;
    const int d = distance(*a, *b);
    for (const auto& v : uniq)
        if (distance(*a, v) + distance(v, *b) != d) return Rational(0, 1);
    return Rational::pow2(-d);
}

Rational mu_hitting_connected(const std::vector<Vertex>& s) {
    if (s.empty()) throw std::invalid_argument("mu_hitting_connected requires a nonempty set");
    std::set<Vertex> uniq(s.begin(), s.end());
    // Connected in the tree iff exactly one vertex has its parent outside.
    int roots = 0;
    for (const auto& v : uniq)
        if (v.is_root() || !uniq.contains(v.parent())) ++roots;
    if (roots != 1) throw std::invalid_argument("mu_hitting_connected requires a connected set");
    return Rational(static_cast<std::int64_t>(uniq.size()) + 2, 4);
}

TruncatedLine lambda_map(const RayPrefix& xi, const RayPrefix& eta, int radius) {
    if (xi.depth() < radius || eta.depth() < radius)
        throw std::invalid_argument("rays too short for the requested radius");
    if (meet(xi.tip(), eta.tip()).depth() >= radius)
        throw std::invalid_argument("rays have not yet diverged within the ball");
    return TruncatedLine(radius, xi.vertex_at(radius), eta.vertex_at(radius));
}

RayPrefix sample_ray(Rng& rng, int depth) {
    RayPrefix ray;
    ray.extend(rng, depth);
    return ray;
}

MuEstimate estimate_mu_unnormalized(const Vertex& x, const Vertex& y,
                                    std::size_t samples, Rng& rng) {
    if (x == y) throw std::invalid_argument("target vertices must be distinct");
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    const auto& dx = x.digits();
    const auto& dy = y.digits();
    const int target_depth = std::max(x.depth(), y.depth());

    std::vector<std::uint8_t> rx, ry;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        rx.clear();
        ry.clear();
        rx.push_back(static_cast<std::uint8_t>(1 + rng.uniform_below(3)));
        ry.push_back(static_cast<std::uint8_t>(1 + rng.uniform_below(3)));
        // Extend both rays in lock step until they diverge.
        std::size_t k = 0;
        while (rx[k] == ry[k]) {
            rx.push_back(static_cast<std::uint8_t>(1 + (rng.bit() ? 1 : 0)));
            ry.push_back(static_cast<std::uint8_t>(1 + (rng.bit() ? 1 : 0)));
            ++k;
        }
        const int meet_depth = static_cast<int>(k);
        while (static_cast<int>(rx.size()) < target_depth)
            rx.push_back(static_cast<std::uint8_t>(1 + (rng.bit() ? 1 : 0)));
        while (static_cast<int>(ry.size()) < target_depth)
            ry.push_back(static_cast<std::uint8_t>(1 + (rng.bit() ? 1 : 0)));

        auto on_trace = [&](const std::vector<std::uint8_t>& target) {
            if (static_cast<int>(target.size()) < meet_depth) return false;
            return std::equal(target.begin(), target.end(), rx.begin()) ||
                   std::equal(target.begin(), target.end(), ry.begin());
        };
        if (on_trace(dx) && on_trace(dy)) {
            // Weight 1/d(X,Y)^2 with the boundary metric: 2^{2 |meet|}.
            const double w = std::ldexp(1.0, 2 * meet_depth);
            sum += w;
            sum_sq += w * w;
        }
    }
    const auto n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(std::max(var, 0.0) / n), samples};
}

}  // namespace roads
