#pragma once

#include <cstdint>
#include <vector>

#include "roads/line_measure.hpp"
#include "roads/rng.hpp"
#include "roads/tree.hpp"

namespace roads {

// A line carrying a speed limit.
struct Road {
    TruncatedLine line;
    double speed = 0.0;
};

// Speed-marked road process with intensity (beta-1) * mu (x) v^{-beta} dv,
// restricted to lines hitting ball(R) and speeds above a floor. Count is
// Poisson((3/4) * 2^R * v_min^{-(beta-1)} * intensity); speeds are Pareto,
// P(speed > s) = (s / v_min)^{-(beta-1)}.
struct RoadProcessSample {
    double beta = 2.0;
    int radius = 1;
    double v_min = 1.0;
    std::uint64_t seed = 0;
    std::vector<Road> roads;
};

// The intensity multiplier exists for the scaling-contract check: scaling
// the intensity by a is in law the same as scaling all speeds by
// a^{1/(beta-1)}.
RoadProcessSample sample_roads_above(double beta, int radius, double v_min, Rng& rng,
                                     double intensity = 1.0);

// P(V_e < v) for two vertices at graph distance d:
// exp(-2^{-d} * v^{-(beta-1)}).
double edge_speed_cdf(double v, int dist, double beta);

// Per-edge fastest-speed field on ball(R). Edges are indexed by the flat id
// of their deeper endpoint minus one. When complete, speeds[e] equals the
// fastest road speed through e under the uncut process.
struct EdgeSpeeds {
    double beta = 2.0;
    int radius = 1;
    double floor = 0.0;    // lowest sampled band boundary
    bool complete = false;
    std::vector<double> speeds;  // 0 marks an uncovered edge

    double speed_of(const Edge& e) const;
};

struct LayerSchedule {
    double v0 = 1.0;
    double ratio = 0.5;
    int band_cap = 64;
};

// Samples the road process in independent speed bands [v0, inf),
// [v0*ratio, v0), ... until every edge of ball(R) is covered. The band
// decomposition is exact because disjoint speed ranges of the intensity are
// independent Poisson processes. Hitting the band cap returns an incomplete
// field with the reached floor recorded; it is never silently imputed.
EdgeSpeeds edge_speeds_layered(double beta, int radius, Rng& rng,
                               const LayerSchedule& schedule = {});

// Driving distance T(x,y): sum of reciprocal fastest speeds along the
// geodesic. Requires a complete field.
double driving_distance(const EdgeSpeeds& es, const Vertex& x, const Vertex& y);

struct DistanceBallReport {
    double beta = 0.0;
    double t = 0.0;
    int radius_used = 0;
    bool censored = false;   // ball still touched sphere(R) at the radius cap
    std::size_t size = 0;    // member count, root included
    std::vector<Vertex> members;
};

struct DistanceBallOptions {
    int initial_radius = 8;
    int max_radius = 16;
    bool collect_members = false;
};

// Exact driving-distance ball {x : T(root, x) <= t}. Roads slower than 1/t
// are irrelevant: any edge whose fastest road is slower costs more than t by
// itself, so sampling above v_min = 1/t is measure-exact for membership.
// The working radius doubles until the ball detaches from the boundary or
// the cap is hit (then the replica is reported censored).
DistanceBallReport distance_ball(double beta, double t, Rng& rng,
                                 const DistanceBallOptions& options = {});

enum class GreedyMode { kFast, kGeometric };

// Greedy descent following the fastest road. Increments are min-prefixes:
// T(X_n, X_{n+1}) = T(X_{n-1}, X_n) ^ W_{n+1} with the W_n i.i.d. of tail
// P(W > t) = exp(-t^{beta-1} / 4).
struct GreedyTrace {
    GreedyMode mode = GreedyMode::kFast;
    double beta = 2.0;
    std::vector<double> increments;   // T(X_{n-1}, X_n), non-increasing
    std::vector<Vertex> path;         // geometric mode only, X_1..X_N
    std::vector<double> raw_w;        // fast mode only, the i.i.d. W_1..W_N
};

// One W draw by inversion: (-4 ln U)^{1/(beta-1)}.
double sample_w(double beta, Rng& rng);

// Fast mode: the first increment comes from a complete ball(1) field (the
// three root-edge speeds are dependent, so they are sampled jointly); later
// increments fold in i.i.d. W draws.
GreedyTrace greedy_fast(double beta, int steps, Rng& rng);

// Geometric mode: walks an actual complete field, picking the child that
// minimises the passage time, ties broken by minimal label. Deterministic
// given the field.
GreedyTrace greedy_geometric(const EdgeSpeeds& es, int steps);

struct YStatistics {
    double beta = 0.0;
    std::vector<int> n_values;
    std::vector<std::vector<double>> samples;  // Y_n per requested n
    std::vector<double> means;
    std::vector<double> ks_vs_exact;           // against the closed-form CDF
};

// Rescaled minima Y_n = n^{1/(beta-1)} * (W_1 ^ ... ^ W_n) from fast-mode
// traces; identically distributed with CDF 1 - exp(-t^{beta-1}/4).
YStatistics y_statistics(const std::vector<GreedyTrace>& traces,
                         const std::vector<int>& n_values);

double y_cdf(double beta, double t);
// E[Y] = Gamma(1 + 1/(beta-1)) * 4^{1/(beta-1)}.
double exact_mean_y(double beta);

struct ExplosionReport {
    double beta = 0.0;
    int steps = 0;
    std::size_t reps = 0;
    double mean_s_n = 0.0;
    double stderr_s_n = 0.0;
    double ref_s_n = 0.0;        // E[Y] * sum_{n<=N} n^{-1/(beta-1)}
    double mean_tail = 0.0;      // S_{2N} - S_N
    double stderr_tail = 0.0;
    double ref_tail = 0.0;
};

// Partial sums S_N = sum_{n<=N} W_1 ^ ... ^ W_n of the greedy increments'
// driver; converging sums signal explosion (beta < 2), divergent ones
// non-explosion (beta > 2). beta = 2 is logged without a verdict.
ExplosionReport explosion_diagnostic(double beta, int steps, std::size_t reps,
                                     std::uint64_t seed, unsigned workers = 0);

struct MeckeCheckResult {
    double beta = 0.0;
    double c = 0.0;
    std::size_t reps = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double oracle = 0.0;     // exp(-(3/4) * c^{-(beta-1)})
    double z_score = 0.0;
    std::size_t censored = 0;
    bool pass = false;
};

// Estimates P(V_root < c) from full layered sampling on ball(1) and compares
// against the Palm-calculus closed form for the fastest road through the
// root.
MeckeCheckResult mecke_identity_check(double beta, double c, std::size_t reps,
                                      std::uint64_t seed, unsigned workers = 0);

struct BddpEstimate {
    double beta = 0.0;
    int n = 0;
    double t = 0.0;
    std::size_t reps = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
};

// Monte Carlo estimate of the bounded driving distance probability
// P(T(root, 1_n) <= t). The event forces every geodesic edge speed to be at
// least 1/t, so sampling roads above v_min = 1/t is exact.
BddpEstimate bddp_probability(double beta, int n, double t, std::size_t reps,
                              std::uint64_t seed, unsigned workers = 0);

// Independent route to the same probability: lines hitting the path split
// into contiguous edge-segment classes with explicit mu masses, and each
// class maximum is a Frechet draw. Used as the oracle for bddp_probability.
BddpEstimate bddp_probability_segment_oracle(double beta, int n, double t,
                                             std::size_t reps, std::uint64_t seed,
                                             unsigned workers = 0);

// Exact masses of the segment classes above: mass(i, j) is the measure of
// lines covering exactly path edges i..j (1-based) of the length-n path.
std::vector<std::vector<double>> bddp_segment_masses(int n);

}  // namespace roads
