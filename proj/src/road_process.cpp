#include "roads/road_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "roads/ball_index.hpp"
#include "roads/experiment.hpp"
#include "roads/line_sampler.hpp"
#include "roads/stats.hpp"

namespace roads {

namespace {

void require_beta(double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
}

// mu mass of lines hitting ball(R).
double ball_mass(int radius) { return 0.75 * std::ldexp(1.0, radius); }

// Inverse of the speed intensity mass above v: speeds in [lo, hi) carry mass
// lo^{-(beta-1)} - hi^{-(beta-1)} per unit of mu.
double speed_mass(double v, double beta) { return std::pow(v, -(beta - 1.0)); }

double sample_band_speed(double beta, double a_lo, double a_hi, Rng& rng) {
    const double a = a_hi + rng.uniform01() * (a_lo - a_hi);
    return std::pow(a, -1.0 / (beta - 1.0));
}

}  // namespace

RoadProcessSample sample_roads_above(double beta, int radius, double v_min, Rng& rng,
                                     double intensity) {
    require_beta(beta);
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (!(v_min > 0.0)) throw std::invalid_argument("v_min must be positive");
    if (!(intensity > 0.0)) throw std::invalid_argument("intensity must be positive");
    RoadProcessSample sample;
    sample.beta = beta;
    sample.radius = radius;
    sample.v_min = v_min;
    const long count =
        rng.poisson(intensity * ball_mass(radius) * speed_mass(v_min, beta));
    sample.roads.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        Road road{to_truncated(sample_idx_line(radius, rng), radius),
                  sample_band_speed(beta, speed_mass(v_min, beta), 0.0, rng)};
        sample.roads.push_back(std::move(road));
    }
    return sample;
}

double edge_speed_cdf(double v, int dist, double beta) {
    require_beta(beta);
    if (dist < 1) throw std::invalid_argument("dist must be >= 1");
    if (v <= 0.0) return 0.0;
    return std::exp(-std::ldexp(1.0, -dist) * speed_mass(v, beta));
}

double EdgeSpeeds::speed_of(const Edge& e) const {
    const int d = e.deeper.depth();
    if (d > radius) throw std::out_of_range("edge outside the sampled ball");
    return speeds[ball_index::id_of(d, ball_index::pos_of(e.deeper)) - 1];
}

EdgeSpeeds edge_speeds_layered(double beta, int radius, Rng& rng,
                               const LayerSchedule& schedule) {
    require_beta(beta);
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    if (!(schedule.v0 > 0.0)) throw std::invalid_argument("v0 must be positive");
    if (!(schedule.ratio > 0.0 && schedule.ratio < 1.0))
        throw std::invalid_argument("ratio must lie in (0, 1)");
    if (schedule.band_cap < 1) throw std::invalid_argument("band_cap must be >= 1");

    EdgeSpeeds field;
    field.beta = beta;
    field.radius = radius;
    field.speeds.assign(ball_index::ball_size(radius) - 1, 0.0);
    std::size_t uncovered = field.speeds.size();

    double a_hi = 0.0;  // mass already consumed by faster bands
    double lo = schedule.v0;
    for (int band = 0; band < schedule.band_cap; ++band) {
        const double a_lo = speed_mass(lo, beta);
        const long count = rng.poisson(ball_mass(radius) * (a_lo - a_hi));
        for (long i = 0; i < count; ++i) {
            const IdxLine line = sample_idx_line(radius, rng);
            const double v = sample_band_speed(beta, a_lo, a_hi, rng);
            for_trace_edges(line, radius, [&](int d, std::uint32_t pos) {
                double& slot = field.speeds[ball_index::id_of(d, pos) - 1];
                if (slot == 0.0) --uncovered;
                if (v > slot) slot = v;
            });
        }
        field.floor = lo;
        if (uncovered == 0) {
            field.complete = true;
            break;
        }
        a_hi = a_lo;
        lo *= schedule.ratio;
    }
    return field;
}

double driving_distance(const EdgeSpeeds& es, const Vertex& x, const Vertex& y) {
    if (!es.complete) throw std::invalid_argument("field is incomplete");
    const auto path = geodesic(x, y);
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) {
        const Vertex& deeper =
            path[i].depth() > path[i - 1].depth() ? path[i] : path[i - 1];
        total += 1.0 / es.speed_of(Edge(deeper));
    }
    return total;
}

namespace {

struct IdxRoad {
    IdxLine line;
    double speed = 0.0;
};

// Conditional extension of a truncated road to a larger ball: the rays beyond
// the old boundary are uniform non-backtracking continuations, and a road
// whose apex sat on the old boundary splits into its two downward rays.
void extend_road(IdxRoad& road, int from_radius, int to_radius, Rng& rng) {
    if (from_radius >= to_radius) return;
    IdxLine& l = road.line;
    int depth = from_radius;
    if (l.end_a == l.end_b) {
        l.end_a = l.end_a << 1;
        l.end_b = (l.end_b << 1) | 1u;
        ++depth;
    }
    for (; depth < to_radius; ++depth) {
        l.end_a = (l.end_a << 1) | (rng.bit() ? 1u : 0u);
        l.end_b = (l.end_b << 1) | (rng.bit() ? 1u : 0u);
    }
    if (l.end_b < l.end_a) std::swap(l.end_a, l.end_b);
}

// Roads hitting ball(to_R) but not ball(from_R): apex depth in (from_R, to_R],
// quarter mass per apex vertex.
void add_annulus_roads(std::vector<IdxRoad>& roads, double beta, double v_min,
                       int from_radius, int to_radius, Rng& rng) {
    const std::uint32_t lo_id = ball_index::ball_size(from_radius);
    const std::uint32_t hi_id = ball_index::ball_size(to_radius);
    const double mass = 0.25 * static_cast<double>(hi_id - lo_id);
    const long count = rng.poisson(mass * speed_mass(v_min, beta));
    for (long i = 0; i < count; ++i) {
        const std::uint32_t id = lo_id + rng.uniform_below(hi_id - lo_id);
        const auto [d, pos] = ball_index::locate(id);
        IdxRoad road;
        road.line.apex_depth = d;
        road.line.apex_pos = pos;
        road.line.end_a = road.line.end_b = pos;
        road.speed = sample_band_speed(beta, speed_mass(v_min, beta), 0.0, rng);
        extend_road(road, d, to_radius, rng);
        roads.push_back(road);
    }
}

}  // namespace

DistanceBallReport distance_ball(double beta, double t, Rng& rng,
                                 const DistanceBallOptions& options) {
    require_beta(beta);
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (options.initial_radius < 1 || options.max_radius < options.initial_radius)
        throw std::invalid_argument("bad radius bracket");
    const double v_min = 1.0 / t;

    DistanceBallReport report;
    report.beta = beta;
    report.t = t;

    int radius = options.initial_radius;
    std::vector<IdxRoad> roads;
    {
        const long count = rng.poisson(ball_mass(radius) * speed_mass(v_min, beta));
        roads.reserve(static_cast<std::size_t>(count));
        for (long i = 0; i < count; ++i)
            roads.push_back({sample_idx_line(radius, rng),
                             sample_band_speed(beta, speed_mass(v_min, beta), 0.0, rng)});
    }

    std::vector<double> best;           // fastest speed per edge id - 1
    std::vector<std::uint32_t> frontier;
    std::vector<double> frontier_time;
    for (;;) {
        best.assign(ball_index::ball_size(radius) - 1, 0.0);
        for (const auto& road : roads)
            for_trace_edges(road.line, radius, [&](int d, std::uint32_t pos) {
                double& slot = best[ball_index::id_of(d, pos) - 1];
                if (road.speed > slot) slot = road.speed;
            });

        report.members.clear();
        report.size = 1;  // root
        if (options.collect_members) report.members.push_back(Vertex{});
        bool touched = false;
        frontier.assign(1, 0u);   // depth-0 frontier, encoded as positions
        frontier_time.assign(1, 0.0);
        std::vector<std::uint32_t> next;
        std::vector<double> next_time;
        for (int d = 0; d < radius && !frontier.empty(); ++d) {
            next.clear();
            next_time.clear();
            for (std::size_t i = 0; i < frontier.size(); ++i) {
                const std::uint32_t pos = frontier[i];
                const int kids = d == 0 ? 3 : 2;
                for (int c = 0; c < kids; ++c) {
                    const std::uint32_t child = d == 0 ? static_cast<std::uint32_t>(c)
                                                       : (pos << 1) | static_cast<std::uint32_t>(c);
                    const double v = best[ball_index::id_of(d + 1, child) - 1];
                    if (v <= 0.0) continue;
                    const double time = frontier_time[i] + 1.0 / v;
                    if (time > t) continue;
                    ++report.size;
                    if (options.collect_members)
                        report.members.push_back(ball_index::to_vertex(d + 1, child));
                    if (d + 1 == radius) touched = true;
                    next.push_back(child);
                    next_time.push_back(time);
                }
            }
            frontier.swap(next);
            frontier_time.swap(next_time);
        }

        report.radius_used = radius;
        if (!touched) {
            report.censored = false;
            return report;
        }
        if (radius >= options.max_radius) {
            report.censored = true;
            return report;
        }
        const int grown = std::min(2 * radius, options.max_radius);
        for (auto& road : roads) extend_road(road, radius, grown, rng);
        add_annulus_roads(roads, beta, v_min, radius, grown, rng);
        radius = grown;
    }
}

double sample_w(double beta, Rng& rng) {
    require_beta(beta);
    return std::pow(4.0 * rng.exponential(), 1.0 / (beta - 1.0));
}

GreedyTrace greedy_fast(double beta, int steps, Rng& rng) {
    require_beta(beta);
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    GreedyTrace trace;
    trace.mode = GreedyMode::kFast;
    trace.beta = beta;
    trace.increments.reserve(static_cast<std::size_t>(steps));
    trace.raw_w.reserve(static_cast<std::size_t>(steps));

    const EdgeSpeeds root_field = edge_speeds_layered(beta, 1, rng);
    if (!root_field.complete) throw std::runtime_error("ball(1) field incomplete");
    const double v_best =
        std::max({root_field.speeds[0], root_field.speeds[1], root_field.speeds[2]});
    double current = 1.0 / v_best;
    trace.increments.push_back(current);
    trace.raw_w.push_back(sample_w(beta, rng));
    for (int n = 2; n <= steps; ++n) {
        const double w = sample_w(beta, rng);
        trace.raw_w.push_back(w);
        current = std::min(current, w);
        trace.increments.push_back(current);
    }
    return trace;
}

GreedyTrace greedy_geometric(const EdgeSpeeds& es, int steps) {
    if (!es.complete) throw std::invalid_argument("field is incomplete");
    if (steps < 1 || steps > es.radius)
        throw std::invalid_argument("steps must lie in [1, radius]");
    GreedyTrace trace;
    trace.mode = GreedyMode::kGeometric;
    trace.beta = es.beta;
    std::uint32_t pos = 0;
    for (int d = 0; d < steps; ++d) {
        const int kids = d == 0 ? 3 : 2;
        std::uint32_t best_child = 0;
        double best_speed = -1.0;
        for (int c = 0; c < kids; ++c) {
            const std::uint32_t child = d == 0 ? static_cast<std::uint32_t>(c)
                                               : (pos << 1) | static_cast<std::uint32_t>(c);
            const double v = es.speeds[ball_index::id_of(d + 1, child) - 1];
            // strict > keeps the smallest position on ties = minimal label
            if (v > best_speed) {
                best_speed = v;
                best_child = child;
            }
        }
        pos = best_child;
        trace.increments.push_back(1.0 / best_speed);
        trace.path.push_back(ball_index::to_vertex(d + 1, pos));
    }
    return trace;
}

double y_cdf(double beta, double t) {
    require_beta(beta);
    if (t <= 0.0) return 0.0;
    return 1.0 - std::exp(-0.25 * std::pow(t, beta - 1.0));
}

double exact_mean_y(double beta) {
    require_beta(beta);
    const double inv = 1.0 / (beta - 1.0);
    return std::tgamma(1.0 + inv) * std::pow(4.0, inv);
}

YStatistics y_statistics(const std::vector<GreedyTrace>& traces,
                         const std::vector<int>& n_values) {
    if (traces.empty()) throw std::invalid_argument("no traces");
    YStatistics stats;
    stats.beta = traces.front().beta;
    stats.n_values = n_values;
    for (int n : n_values) {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        const double scale = std::pow(n, 1.0 / (stats.beta - 1.0));
        std::vector<double> ys;
        ys.reserve(traces.size());
        for (const auto& trace : traces) {
            if (trace.raw_w.size() < static_cast<std::size_t>(n))
                throw std::invalid_argument("trace shorter than requested n");
            double m = trace.raw_w[0];
            for (int i = 1; i < n; ++i) m = std::min(m, trace.raw_w[i]);
            ys.push_back(scale * m);
        }
        stats.means.push_back(mean_stderr(ys).mean);
        const double beta = stats.beta;
        stats.ks_vs_exact.push_back(
            ks_statistic(ys, [beta](double t) { return y_cdf(beta, t); }));
        stats.samples.push_back(std::move(ys));
    }
    return stats;
}

ExplosionReport explosion_diagnostic(double beta, int steps, std::size_t reps,
                                     std::uint64_t seed, unsigned workers) {
    require_beta(beta);
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (reps < 2) throw std::invalid_argument("reps must be >= 2");
    const auto sums = run_replicas<std::pair<double, double>>(
        reps, seed, workers, [beta, steps](std::size_t, Rng& rng) {
            double running_min = std::numeric_limits<double>::infinity();
            double s_n = 0.0, s_2n = 0.0;
            for (int n = 1; n <= 2 * steps; ++n) {
                running_min = std::min(running_min, sample_w(beta, rng));
                (n <= steps ? s_n : s_2n) += running_min;
            }
            return std::make_pair(s_n, s_2n);
        });

    ExplosionReport report;
    report.beta = beta;
    report.steps = steps;
    report.reps = reps;
    std::vector<double> head(reps), tail(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        head[i] = sums[i].first;
        tail[i] = sums[i].second;
    }
    const auto h = mean_stderr(head);
    const auto ta = mean_stderr(tail);
    report.mean_s_n = h.mean;
    report.stderr_s_n = h.stderr_;
    report.mean_tail = ta.mean;
    report.stderr_tail = ta.stderr_;

    const double mean_y = exact_mean_y(beta);
    const double inv = 1.0 / (beta - 1.0);
    for (int n = 1; n <= 2 * steps; ++n) {
        const double term = mean_y * std::pow(n, -inv);
        (n <= steps ? report.ref_s_n : report.ref_tail) += term;
    }
    return report;
}

MeckeCheckResult mecke_identity_check(double beta, double c, std::size_t reps,
                                      std::uint64_t seed, unsigned workers) {
    require_beta(beta);
    if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
    if (reps < 2) throw std::invalid_argument("reps must be >= 2");
    const auto draws = run_replicas<std::uint8_t>(
        reps, seed, workers, [beta, c](std::size_t, Rng& rng) -> std::uint8_t {
            const EdgeSpeeds field = edge_speeds_layered(beta, 1, rng);
            if (!field.complete) return 2;
            const double v_root =
                std::max({field.speeds[0], field.speeds[1], field.speeds[2]});
            return v_root < c ? 1 : 0;
        });

    MeckeCheckResult result;
    result.beta = beta;
    result.c = c;
    result.reps = reps;
    std::size_t hits = 0, used = 0;
    for (auto d : draws) {
        if (d == 2) ++result.censored;
        else {
            ++used;
            hits += d;
        }
    }
    if (used == 0) throw std::runtime_error("all replicas censored");
    result.estimate = static_cast<double>(hits) / static_cast<double>(used);
    result.stderr_ = binomial_stderr(result.estimate, used);
    result.oracle = std::exp(-0.75 * speed_mass(c, beta));
    result.z_score = result.stderr_ > 0.0
        ? (result.estimate - result.oracle) / result.stderr_
        : 0.0;
    result.pass = std::abs(result.z_score) <= 3.0;
    return result;
}

namespace {

// Shared aggregation for the two bounded driving distance estimators.
BddpEstimate summarize_indicators(double beta, int n, double t, std::size_t reps,
                                  const std::vector<std::uint8_t>& hits) {
    BddpEstimate est;
    est.beta = beta;
    est.n = n;
    est.t = t;
    est.reps = reps;
    double sum = 0.0;
    for (auto h : hits) sum += h;
    est.estimate = sum / static_cast<double>(reps);
    est.stderr_ = binomial_stderr(est.estimate, reps);
    return est;
}

}  // namespace

BddpEstimate bddp_probability(double beta, int n, double t, std::size_t reps,
                              std::uint64_t seed, unsigned workers) {
    require_beta(beta);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (reps < 2) throw std::invalid_argument("reps must be >= 2");
    const double v_min = 1.0 / t;
    // Only roads faster than 1/t can participate: a slower edge already
    // costs more than t, so the thinned process decides the event exactly.
    struct Kernel {
        double beta, t, mean, a_min;
        int n;
        std::vector<double> best;

        std::uint8_t operator()(std::size_t, Rng& rng) {
            std::fill(best.begin(), best.end(), 0.0);
            const long count = rng.poisson(mean);
            for (long i = 0; i < count; ++i) {
                const IdxLine line = sample_idx_line(n, rng);
                const double v = sample_band_speed(beta, a_min, 0.0, rng);
                // path edges sit at pos 0 on every level
                for_trace_edges(line, n, [&](int d, std::uint32_t pos) {
                    if (pos == 0 && v > best[d - 1]) best[d - 1] = v;
                });
            }
            double total = 0.0;
            for (double v : best) {
                if (v <= 0.0) return 0;
                total += 1.0 / v;
            }
            return total <= t ? 1 : 0;
        }
    };
    Kernel kernel{beta, t, ball_mass(n) * speed_mass(v_min, beta),
                  speed_mass(v_min, beta), n, std::vector<double>(n, 0.0)};
    const auto hits = run_replicas<std::uint8_t>(reps, seed, workers, kernel);
    return summarize_indicators(beta, n, t, reps, hits);
}

std::vector<std::vector<double>> bddp_segment_masses(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::vector<double>> mass(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            const int len = j - i + 1;
            // inclusion-exclusion over extensions past either segment end
            double m = std::ldexp(1.0, -len);
            if (i > 1) m -= std::ldexp(1.0, -(len + 1));
            if (j < n) m -= std::ldexp(1.0, -(len + 1));
            if (i > 1 && j < n) m += std::ldexp(1.0, -(len + 2));
            mass[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = m;
        }
    return mass;
}

BddpEstimate bddp_probability_segment_oracle(double beta, int n, double t,
                                             std::size_t reps, std::uint64_t seed,
                                             unsigned workers) {
    require_beta(beta);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    if (reps < 2) throw std::invalid_argument("reps must be >= 2");
    const auto masses = bddp_segment_masses(n);
    struct Kernel {
        double beta, t;
        int n;
        const std::vector<std::vector<double>>* masses;
        std::vector<double> best;

        std::uint8_t operator()(std::size_t, Rng& rng) {
            std::fill(best.begin(), best.end(), 0.0);
            const double inv = 1.0 / (beta - 1.0);
            for (int i = 1; i <= n; ++i)
                for (int j = i; j <= n; ++j) {
                    // Frechet max of the class of lines covering exactly
                    // path edges i..j
                    const double m = (*masses)[static_cast<std::size_t>(i - 1)]
                                               [static_cast<std::size_t>(j - 1)];
                    const double v = std::pow(m / rng.exponential(), inv);
                    for (int k = i; k <= j; ++k)
                        best[static_cast<std::size_t>(k - 1)] =
                            std::max(best[static_cast<std::size_t>(k - 1)], v);
                }
            double total = 0.0;
            for (double v : best) total += 1.0 / v;
            return total <= t ? 1 : 0;
        }
    };
    Kernel kernel{beta, t, n, &masses, std::vector<double>(static_cast<std::size_t>(n), 0.0)};
    const auto hits = run_replicas<std::uint8_t>(reps, seed, workers, kernel);
    return summarize_indicators(beta, n, t, reps, hits);
}

}  // namespace roads
