#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "roads/bounds.hpp"
#include "roads/experiment.hpp"
#include "roads/line_measure.hpp"
#include "roads/line_process.hpp"
#include "roads/road_process.hpp"
#include "roads/stats.hpp"
#include "roads/tree.hpp"

namespace {

using nlohmann::json;
using roads::format_double;
using roads::TableWriter;

constexpr int kExitBadConfig = 2;
constexpr int kExitIoFailure = 3;
constexpr int kExitVerdictFailure = 4;

struct CommonOpts {
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    std::string config;
    unsigned workers = 0;
};

// JSON config supplies defaults; explicitly passed flags win.
template <class T>
void cfg(const json& j, const CLI::App* cmd, const std::string& flag,
         const std::string& key, T& value) {
    if (cmd->count(flag) == 0 && j.contains(key)) value = j.at(key).get<T>();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
    return j;
}

// Common options live on the root app (fallthrough), so counts are queried
// there.
void apply_common_config(const json& j, const CLI::App* root, CommonOpts& common) {
    cfg(j, root, "--seed", "seed", common.seed);
    cfg(j, root, "--out", "out", common.out);
    cfg(j, root, "--format", "format", common.format);
    cfg(j, root, "--workers", "workers", common.workers);
}

// Writes the table to --out or stdout. I/O failures exit with their own code.
int emit(const TableWriter& table, const CommonOpts& common, bool verdict_ok) {
    try {
        if (common.out.empty())
            std::cout << table.str();
        else
            table.write_file(common.out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoFailure;
    }
    return verdict_ok ? 0 : kExitVerdictFailure;
}

std::string fmt_u64(std::uint64_t v) { return std::to_string(v); }

int run_measure(const CLI::App* root, const CLI::App* cmd, CommonOpts common, std::string target,
                std::size_t samples) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--target", "target", target);
    cfg(j, cmd, "--samples", "samples", samples);

    const auto colon = target.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--target", "expected x:y vertex pair");
    const roads::Vertex x = roads::parse_vertex(target.substr(0, colon));
    const roads::Vertex y = roads::parse_vertex(target.substr(colon + 1));

    roads::Rng rng(common.seed);
    const auto est = roads::estimate_mu_unnormalized(x, y, samples, rng);
    const double oracle =
        roads::kMuEstimatorConstant * roads::mu_pair(x, y).to_double();
    const double z = est.stderr_ > 0.0 ? (est.estimate - oracle) / est.stderr_ : 0.0;

    TableWriter table({"tool", "seed", "x", "y", "samples", "estimate", "stderr",
                       "oracle", "z_score"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, fmt_u64(common.seed), roads::format_vertex(x),
                   roads::format_vertex(y), std::to_string(samples),
                   format_double(est.estimate), format_double(est.stderr_),
                   format_double(oracle), format_double(z)});
    return emit(table, common, std::abs(z) <= 3.0);
}

int run_percolation(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double alpha, int radius,
                    std::size_t reps) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--alpha", "alpha", alpha);
    cfg(j, cmd, "--radius", "radius", radius);
    cfg(j, cmd, "--reps", "reps", reps);

    const auto res =
        roads::percolation_experiment(alpha, radius, reps, common.seed, common.workers);
    TableWriter table({"tool", "alpha", "R", "reps", "statistic", "estimate", "stderr",
                       "oracle", "z_score", "seed"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, format_double(alpha), std::to_string(radius),
                   std::to_string(reps), "survival", format_double(res.survival_estimate),
                   format_double(res.survival_stderr), format_double(res.survival_oracle),
                   format_double(res.survival_z), fmt_u64(common.seed)});
    table.add_row({roads::kToolVersion, format_double(alpha), std::to_string(radius),
                   std::to_string(reps), "mean_z", format_double(res.mean_z_estimate),
                   format_double(res.mean_z_stderr), format_double(res.mean_z_oracle),
                   format_double(res.mean_z_z), fmt_u64(common.seed)});
    return emit(table, common, res.pass_3sigma);
}

int run_critical(const CLI::App* root, const CLI::App* cmd, CommonOpts common, int radius, std::size_t reps,
                 double alpha_min, double alpha_max, double step) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--radius", "radius", radius);
    cfg(j, cmd, "--reps", "reps", reps);
    cfg(j, cmd, "--alpha-min", "alpha_min", alpha_min);
    cfg(j, cmd, "--alpha-max", "alpha_max", alpha_max);
    cfg(j, cmd, "--step", "step", step);
    if (!(step > 0.0) || !(alpha_max > alpha_min))
        throw CLI::ValidationError("--step", "need alpha_min < alpha_max and step > 0");

    std::vector<double> grid;
    for (double a = alpha_min; a <= alpha_max + 1e-12; a += step) grid.push_back(a);

    roads::CriticalBracket bracket;
    bool crossed = true;
    try {
        bracket = roads::estimate_critical_alpha(radius, reps, grid, common.seed,
                                                 common.workers);
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerdictFailure;
    }

    TableWriter table({"tool", "seed", "R", "reps", "alpha", "estimate", "stderr",
                       "reference_level", "bracket_lo", "bracket_hi", "low_confidence"},
                      TableWriter::parse_format(common.format));
    for (std::size_t i = 0; i < bracket.grid.size(); ++i)
        table.add_row({roads::kToolVersion, fmt_u64(common.seed), std::to_string(radius),
                       std::to_string(reps), format_double(bracket.grid[i]),
                       format_double(bracket.estimates[i]),
                       format_double(bracket.stderrs[i]),
                       format_double(bracket.reference_level), format_double(bracket.lo),
                       format_double(bracket.hi), bracket.low_confidence ? "1" : "0"});
    return emit(table, common, crossed && !bracket.low_confidence);
}

int run_greedy(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double beta, int steps,
               std::size_t reps, std::vector<int> n_values) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--beta", "beta", beta);
    cfg(j, cmd, "--steps", "steps", steps);
    cfg(j, cmd, "--reps", "reps", reps);
    cfg(j, cmd, "--n", "n", n_values);
    if (n_values.empty()) n_values = {1, std::max(1, steps / 10), steps};
    for (int n : n_values)
        if (n < 1 || n > steps)
            throw CLI::ValidationError("--n", "every n must lie in [1, steps]");

    const auto traces = roads::run_replicas<roads::GreedyTrace>(
        reps, common.seed, common.workers,
        [beta, steps](std::size_t, roads::Rng& rng) {
            return roads::greedy_fast(beta, steps, rng);
        });
    const auto stats = roads::y_statistics(traces, n_values);
    const double oracle = roads::exact_mean_y(beta);
    const double ks_band = roads::dkw_epsilon(reps, 0.01);

    TableWriter table({"tool", "seed", "beta", "steps", "reps", "n", "mean_y", "stderr",
                       "oracle", "z_score", "ks", "ks_band"},
                      TableWriter::parse_format(common.format));
    bool ok = true;
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        const auto ms = roads::mean_stderr(stats.samples[i]);
        const double z = ms.stderr_ > 0.0 ? (ms.mean - oracle) / ms.stderr_ : 0.0;
        ok = ok && std::abs(z) <= 3.0 && stats.ks_vs_exact[i] <= ks_band;
        table.add_row({roads::kToolVersion, fmt_u64(common.seed), format_double(beta),
                       std::to_string(steps), std::to_string(reps),
                       std::to_string(n_values[i]), format_double(ms.mean),
                       format_double(ms.stderr_), format_double(oracle), format_double(z),
                       format_double(stats.ks_vs_exact[i]), format_double(ks_band)});
    }
    return emit(table, common, ok);
}

int run_ball(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double beta, double t,
             std::size_t reps) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--beta", "beta", beta);
    cfg(j, cmd, "--t", "t", t);
    cfg(j, cmd, "--reps", "reps", reps);

    const auto reports = roads::run_replicas<std::pair<double, bool>>(
        reps, common.seed, common.workers, [beta, t](std::size_t, roads::Rng& rng) {
            const auto r = roads::distance_ball(beta, t, rng);
            return std::make_pair(static_cast<double>(r.size), r.censored);
        });
    std::vector<double> sizes;
    sizes.reserve(reps);
    std::size_t censored = 0;
    for (const auto& [size, was_censored] : reports) {
        sizes.push_back(size);
        censored += was_censored ? 1 : 0;
    }
    const auto ms = roads::mean_stderr(sizes);
    const bool bounded_regime =
        beta > 2.0 && t <= roads::nonexplosion_threshold(beta);
    const double bound = roads::mean_ball_bound();

    TableWriter table({"tool", "seed", "beta", "t", "reps", "mean_size", "stderr",
                       "mean_bound", "censored"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, fmt_u64(common.seed), format_double(beta),
                   format_double(t), std::to_string(reps), format_double(ms.mean),
                   format_double(ms.stderr_),
                   bounded_regime ? format_double(bound) : std::string(""),
                   std::to_string(censored)});
    const bool ok = !bounded_regime || ms.mean <= bound + 3.0 * ms.stderr_;
    return emit(table, common, ok);
}

int run_bddp(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double beta, int n, double t,
             std::size_t reps) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--beta", "beta", beta);
    cfg(j, cmd, "--n", "n", n);
    cfg(j, cmd, "--t", "t", t);
    cfg(j, cmd, "--reps", "reps", reps);

    const auto est = roads::bddp_probability(beta, n, t, reps, common.seed, common.workers);
    const auto oracle =
        roads::bddp_probability_segment_oracle(beta, n, t, reps, common.seed + 1,
                                               common.workers);
    const auto bounds = roads::bddp_bounds(beta, n, t);
    const double combined =
        std::sqrt(est.stderr_ * est.stderr_ + oracle.stderr_ * oracle.stderr_);
    const double z =
        combined > 0.0 ? (est.estimate - oracle.estimate) / combined : 0.0;
    const bool sandwich = est.estimate >= bounds.lower - 3.0 * est.stderr_ &&
                          est.estimate <= bounds.kahn + 3.0 * est.stderr_;

    TableWriter table({"tool", "seed", "beta", "n", "t", "reps", "estimate", "stderr",
                       "oracle", "z_score", "lower", "chain_exact", "kahn_upper"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, fmt_u64(common.seed), format_double(beta),
                   std::to_string(n), format_double(t), std::to_string(reps),
                   format_double(est.estimate), format_double(est.stderr_),
                   format_double(oracle.estimate), format_double(z),
                   format_double(bounds.lower), format_double(bounds.chain),
                   format_double(bounds.kahn)});
    return emit(table, common, sandwich && std::abs(z) <= 4.0);
}

int run_bounds(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double beta, int n, double t) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--beta", "beta", beta);
    cfg(j, cmd, "--n", "n", n);
    cfg(j, cmd, "--t", "t", t);

    const auto bounds = roads::bddp_bounds(beta, n, t);
    TableWriter table({"tool", "seed", "beta", "n", "t", "lower", "chain_exact",
                       "kahn_upper", "nonexplosion_threshold", "mean_ball_bound"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, fmt_u64(common.seed), format_double(beta),
                   std::to_string(n), format_double(t), format_double(bounds.lower),
                   format_double(bounds.chain), format_double(bounds.kahn),
                   beta > 2.0 ? format_double(roads::nonexplosion_threshold(beta))
                              : std::string(""),
                   format_double(roads::mean_ball_bound())});
    return emit(table, common, true);
}

int run_mecke(const CLI::App* root, const CLI::App* cmd, CommonOpts common, double beta, double c,
              std::size_t reps) {
    const json j = load_config(common.config);
    apply_common_config(j, root, common);
    cfg(j, cmd, "--beta", "beta", beta);
    cfg(j, cmd, "--c", "c", c);
    cfg(j, cmd, "--reps", "reps", reps);

    const auto res = roads::mecke_identity_check(beta, c, reps, common.seed, common.workers);
    TableWriter table({"tool", "seed", "beta", "c", "reps", "estimate", "stderr",
                       "oracle", "z_score", "censored"},
                      TableWriter::parse_format(common.format));
    table.add_row({roads::kToolVersion, fmt_u64(common.seed), format_double(beta),
                   format_double(c), std::to_string(reps), format_double(res.estimate),
                   format_double(res.stderr_), format_double(res.oracle),
                   format_double(res.z_score), std::to_string(res.censored)});
    return emit(table, common, res.pass);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariant line and road processes on the 3-regular tree"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonOpts common;
    app.add_option("--seed", common.seed, "master seed (64-bit)");
    app.add_option("--out", common.out, "output path (default: stdout)");
    app.add_option("--format", common.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    app.add_option("--config", common.config, "JSON config file; flags win");
    app.add_option("--workers", common.workers, "worker threads (0 = auto)");

    std::string target = "@:1";
    std::size_t samples = 100000;
    auto* measure = app.add_subcommand("measure", "pushforward estimator vs exact measure");
    measure->add_option("--target", target, "vertex pair x:y");
    measure->add_option("--samples", samples, "ray-pair samples");

    double p_alpha = 2.0;
    int p_radius = 8;
    std::size_t p_reps = 10000;
    auto* percolation = app.add_subcommand("percolation", "vacant-set survival vs branching oracle");
    percolation->add_option("--alpha", p_alpha, "line intensity");
    percolation->add_option("-R,--radius", p_radius, "ball radius");
    percolation->add_option("--reps", p_reps, "replicas");

    int c_radius = 14;
    std::size_t c_reps = 100000;
    double c_lo = 2.0, c_hi = 3.4, c_step = 0.1;
    auto* critical = app.add_subcommand("critical", "bracket the critical line intensity");
    critical->add_option("-R,--radius", c_radius, "probe depth");
    critical->add_option("--reps", c_reps, "replicas per grid point");
    critical->add_option("--alpha-min", c_lo, "grid start");
    critical->add_option("--alpha-max", c_hi, "grid end");
    critical->add_option("--step", c_step, "grid step");

    double g_beta = 3.0;
    int g_steps = 100;
    std::size_t g_reps = 10000;
    std::vector<int> g_n;
    auto* greedy = app.add_subcommand("greedy", "greedy-descent increment statistics");
    greedy->add_option("--beta", g_beta, "speed exponent");
    greedy->add_option("--steps", g_steps, "descent length");
    greedy->add_option("--reps", g_reps, "replicas");
    greedy->add_option("--n", g_n, "Y-statistic indices");

    double b_beta = 3.0, b_t = 1.0 / 9.0;
    std::size_t b_reps = 1000;
    auto* ball = app.add_subcommand("ball", "driving-distance ball sizes");
    ball->add_option("--beta", b_beta, "speed exponent");
    ball->add_option("-t,--t", b_t, "time budget");
    ball->add_option("--reps", b_reps, "replicas");

    double d_beta = 2.5, d_t = 0.5;
    int d_n = 4;
    std::size_t d_reps = 100000;
    auto* bddp = app.add_subcommand("bddp", "bounded driving distance probability sandwich");
    bddp->add_option("--beta", d_beta, "speed exponent");
    bddp->add_option("-n,--n", d_n, "path length");
    bddp->add_option("-t,--t", d_t, "time budget");
    bddp->add_option("--reps", d_reps, "replicas");

    double o_beta = 4.0, o_t = 1.0;
    int o_n = 3;
    auto* bounds = app.add_subcommand("bounds", "closed-form bound tables");
    bounds->add_option("--beta", o_beta, "speed exponent");
    bounds->add_option("-n,--n", o_n, "path length");
    bounds->add_option("-t,--t", o_t, "time budget");

    double m_beta = 2.5, m_c = 1.0;
    std::size_t m_reps = 100000;
    auto* mecke = app.add_subcommand("mecke", "fastest road through the root vs closed form");
    mecke->add_option("--beta", m_beta, "speed exponent");
    mecke->add_option("-c,--c", m_c, "speed threshold");
    mecke->add_option("--reps", m_reps, "replicas");

    try {
        app.parse(argc, argv);
        if (measure->parsed()) return run_measure(&app, measure, common, target, samples);
        if (percolation->parsed())
            return run_percolation(&app, percolation, common, p_alpha, p_radius, p_reps);
        if (critical->parsed())
            return run_critical(&app, critical, common, c_radius, c_reps, c_lo, c_hi, c_step);
        if (greedy->parsed())
            return run_greedy(&app, greedy, common, g_beta, g_steps, g_reps, g_n);
        if (ball->parsed()) return run_ball(&app, ball, common, b_beta, b_t, b_reps);
        if (bddp->parsed()) return run_bddp(&app, bddp, common, d_beta, d_n, d_t, d_reps);
        if (bounds->parsed()) return run_bounds(&app, bounds, common, o_beta, o_n, o_t);
        if (mecke->parsed()) return run_mecke(&app, mecke, common, m_beta, m_c, m_reps);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadConfig;
    }
    return kExitBadConfig;
}
