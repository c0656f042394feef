#include "roads/line_process.hpp"

#include <cmath>
#include <stdexcept>

#include "roads/ball_index.hpp"
#include "roads/experiment.hpp"
#include "roads/line_sampler.hpp"
#include "roads/stats.hpp"

namespace roads {

double critical_alpha() { return 4.0 * std::log(2.0); }

static double ball_line_mass(int radius) {
    return 0.75 * std::ldexp(1.0, radius);
}

LineProcessSample sample_line_process(double alpha, int radius, Rng& rng) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    LineProcessSample sample;
    sample.alpha = alpha;
    sample.radius = radius;
    const long count = rng.poisson(alpha * ball_line_mass(radius));
    sample.lines.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i)
        sample.lines.push_back(to_truncated(sample_idx_line(radius, rng), radius));
    return sample;
}

VacancyReport vacancy_report(const LineProcessSample& sample) {
    const int radius = sample.radius;
    VacancyReport report;
    report.z.assign(static_cast<std::size_t>(radius), 0);

    const auto vertices = ball(radius);
    std::vector<char> occupied(vertices.size(), 0);
    std::vector<char> alive(vertices.size(), 0);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (const auto& line : sample.lines)
            if (line.contains(vertices[i])) { occupied[i] = 1; break; }

    // Shortlex ball order lists parents before children, and the flat index
    // of a label matches ball_index.
    alive[0] = !occupied[0];
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!occupied[i]) report.vacant.push_back(vertices[i]);
        if (i == 0) continue;
        const int d = vertices[i].depth();
        const std::uint32_t pos = ball_index::pos_of(vertices[i]);
        const std::uint32_t parent_id =
            d == 1 ? 0u : ball_index::id_of(d - 1, ball_index::parent_pos(pos));
        alive[i] = alive[parent_id] && !occupied[i];
        if (alive[i]) ++report.z[static_cast<std::size_t>(d - 1)];
    }
    report.survived = report.z.back() > 0;
    return report;
}

double gw_oracle(double alpha, int n) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double p = std::exp(-alpha / 4.0);
    double s = 1.0;
    for (int m = 1; m < n; ++m) {
        const double q = 1.0 - p * s;
        s = 1.0 - q * q;
    }
    const double q = 1.0 - p * s;
    return std::exp(-0.75 * alpha) * (1.0 - q * q * q);
}

double expected_z(double alpha, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return 3.0 * std::exp(-alpha) * std::pow(2.0 * std::exp(-alpha / 4.0), n - 1);
}

namespace {

// Per-worker scratch for the fast vacancy kernel: occupancy marks use a
// stamp array so nothing is cleared between replicas.
struct VacancyKernel {
    double alpha;
    int radius;
    std::vector<std::uint32_t> occupied_stamp;
    std::vector<std::uint8_t> alive;
    std::uint32_t stamp = 0;

    VacancyKernel(double a, int r)
        : alpha(a), radius(r),
          occupied_stamp(ball_index::ball_size(r), 0),
          alive(ball_index::ball_size(r), 0) {}

    std::uint32_t operator()(std::size_t /*replica*/, Rng& rng) {
        ++stamp;
        const long count = rng.poisson(alpha * ball_line_mass(radius));
        for (long i = 0; i < count; ++i) {
            const IdxLine line = sample_idx_line(radius, rng);
            for_trace_vertices(line, radius, [&](int d, std::uint32_t pos) {
                occupied_stamp[ball_index::id_of(d, pos)] = stamp;
            });
        }
        alive[0] = occupied_stamp[0] != stamp;
        std::uint32_t z_r = 0;
        for (int d = 1; d <= radius; ++d) {
            const std::uint32_t off = ball_index::level_offset(d);
            const std::uint32_t parent_off = ball_index::level_offset(d - 1);
            const std::uint32_t size = ball_index::level_size(d);
            std::uint32_t level_count = 0;
            for (std::uint32_t pos = 0; pos < size; ++pos) {
                const std::uint32_t id = off + pos;
                const std::uint32_t parent_id =
                    d == 1 ? 0u : parent_off + (pos >> 1);
                const std::uint8_t a =
                    alive[parent_id] && occupied_stamp[id] != stamp;
                alive[id] = a;
                level_count += a;
            }
            if (level_count == 0) return 0;
            z_r = level_count;
        }
        return z_r;
    }
};

}  // namespace

PercolationResult percolation_experiment(double alpha, int radius, std::size_t reps,
                                         std::uint64_t seed, unsigned workers) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    const auto z_values = run_replicas<std::uint32_t>(
        reps, seed, workers, VacancyKernel(alpha, radius));

    PercolationResult result;
    result.alpha = alpha;
    result.radius = radius;
    result.reps = reps;
    result.seed = seed;

    double survived = 0.0, sum_z = 0.0, sum_z_sq = 0.0;
    for (std::uint32_t z : z_values) {
        survived += (z > 0) ? 1.0 : 0.0;
        sum_z += z;
        sum_z_sq += static_cast<double>(z) * z;
    }
    const auto n = static_cast<double>(reps);
    result.survival_estimate = survived / n;
    result.survival_stderr = binomial_stderr(result.survival_estimate, reps);
    result.mean_z_estimate = sum_z / n;
    const double var =
        reps > 1 ? (sum_z_sq - n * result.mean_z_estimate * result.mean_z_estimate) / (n - 1.0)
                 : 0.0;
    result.mean_z_stderr = std::sqrt(std::max(var, 0.0) / n);

    result.survival_oracle = gw_oracle(alpha, radius);
    result.mean_z_oracle = expected_z(alpha, radius);
    result.survival_z = result.survival_stderr > 0.0
        ? (result.survival_estimate - result.survival_oracle) / result.survival_stderr
        : 0.0;
    result.mean_z_z = result.mean_z_stderr > 0.0
        ? (result.mean_z_estimate - result.mean_z_oracle) / result.mean_z_stderr
        : 0.0;
    result.pass_3sigma =
        std::abs(result.survival_z) <= 3.0 && std::abs(result.mean_z_z) <= 3.0;
    return result;
}

bool survival_probe(double alpha, int radius, Rng& rng) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    const double p = std::exp(-alpha / 4.0);
    if (rng.uniform01() >= std::exp(-0.75 * alpha)) return false;  // root blocked
    long alive = 0;
    for (int i = 0; i < 3; ++i) alive += rng.uniform01() < p ? 1 : 0;
    for (int d = 2; d <= radius && alive > 0; ++d) {
        long next = 0;
        const long trials = 2 * alive;
        for (long i = 0; i < trials; ++i) next += rng.uniform01() < p ? 1 : 0;
        alive = next;
    }
    return alive > 0;
}

CriticalBracket estimate_critical_alpha(int radius, std::size_t reps,
                                        const std::vector<double>& grid,
                                        std::uint64_t seed, unsigned workers) {
    if (grid.size() < 2) throw std::invalid_argument("grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] <= grid[i - 1])
            throw std::invalid_argument("grid must be strictly increasing");
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");

    CriticalBracket bracket;
    bracket.grid = grid;
    bracket.reference_level = gw_oracle(critical_alpha(), radius);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double alpha = grid[g];
        const auto hits = run_replicas<std::uint8_t>(
            reps, seed + g, workers,
            [alpha, radius](std::size_t, Rng& rng) -> std::uint8_t {
                return survival_probe(alpha, radius, rng) ? 1 : 0;
            });
        double sum = 0.0;
        for (auto h : hits) sum += h;
        const double est = sum / static_cast<double>(reps);
        bracket.estimates.push_back(est);
        bracket.stderrs.push_back(binomial_stderr(est, reps));
    }
    // Survival is monotone decreasing in alpha; locate the crossing of the
    // critical reference level.
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (bracket.estimates[i] >= bracket.reference_level &&
            bracket.estimates[i + 1] < bracket.reference_level) {
            bracket.lo = grid[i];
            bracket.hi = grid[i + 1];
            const double noise =
                std::max(bracket.stderrs[i], bracket.stderrs[i + 1]);
            bracket.low_confidence = noise > 0.25 * bracket.reference_level;
            return bracket;
        }
    }
    throw std::runtime_error("no crossing: grid does not straddle the critical alpha");
}

}  // namespace roads
