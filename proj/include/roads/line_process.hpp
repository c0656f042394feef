#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roads/line_measure.hpp"
#include "roads/rng.hpp"
#include "roads/tree.hpp"

namespace roads {

// Poisson line process with intensity alpha * mu restricted to lines hitting
// ball(R). Line count is Poisson with mean alpha * (3/4) * 2^R.
struct LineProcessSample {
    double alpha = 1.0;
    int radius = 1;
    std::uint64_t seed = 0;
    std::vector<TruncatedLine> lines;
};

struct VacancyReport {
    std::vector<Vertex> vacant;       // vertices of ball(R) hit by no line
    std::vector<long> z;              // z[n-1] = Z_n for n = 1..R
    bool survived = false;            // Z_R > 0
};

LineProcessSample sample_line_process(double alpha, int radius, Rng& rng);

VacancyReport vacancy_report(const LineProcessSample& sample);

// Exact P(Z_n > 0) from the branching structure of the vacant set: the root
// is vacant with probability e^{-3 alpha / 4}, each child of a vacant-path
// vertex survives with probability p = e^{-alpha / 4}, and below depth 1 the
// offspring law is Binomial(2, p).
double gw_oracle(double alpha, int n);

// Exact E[Z_n] = 3 e^{-alpha} * (2 e^{-alpha/4})^{n-1}.
double expected_z(double alpha, int n);

struct PercolationResult {
    double alpha = 0.0;
    int radius = 0;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    double survival_estimate = 0.0;
    double survival_stderr = 0.0;
    double survival_oracle = 0.0;
    double survival_z = 0.0;
    double mean_z_estimate = 0.0;
    double mean_z_stderr = 0.0;
    double mean_z_oracle = 0.0;
    double mean_z_z = 0.0;
    bool pass_3sigma = false;
};

// Full line-process simulation of the vacancy survival proxy Z_R > 0,
// replica-parallel, checked against the branching oracle.
PercolationResult percolation_experiment(double alpha, int radius, std::size_t reps,
                                         std::uint64_t seed, unsigned workers = 0);

// One survival draw of Z_R > 0 from the line process restricted to lines
// meeting the explored vacant cluster. Lines blocking a candidate vertex
// whose whole ancestor path is vacant must have their apex at that vertex,
// so the restriction is an exact thinning: Poisson(3 alpha / 4) blocking
// mass at the root and Poisson(alpha / 4) at every explored descendant.
bool survival_probe(double alpha, int radius, Rng& rng);

struct CriticalBracket {
    double lo = 0.0;
    double hi = 0.0;
    double reference_level = 0.0;  // oracle survival at the critical alpha
    bool low_confidence = false;
    std::vector<double> grid;
    std::vector<double> estimates;
    std::vector<double> stderrs;
};

// Scans the alpha grid for the crossing of the survival proxy through the
// oracle level at criticality. Throws on degenerate grids or when no
// crossing exists.
CriticalBracket estimate_critical_alpha(int radius, std::size_t reps,
                                        const std::vector<double>& grid,
                                        std::uint64_t seed, unsigned workers = 0);

// Critical intensity of vacant-set percolation: 4 ln 2.
double critical_alpha();

}  // namespace roads
