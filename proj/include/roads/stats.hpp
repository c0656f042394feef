#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace roads {

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& values);

// Standard error of a Bernoulli proportion estimate.
double binomial_stderr(double p_hat, std::size_t n);

// One-sample Kolmogorov-Smirnov statistic against an exact CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

// DKW band half-width at confidence level 1 - alpha.
double dkw_epsilon(std::size_t n, double alpha);

// Two-sample KS rejection threshold at level alpha.
double ks_two_sample_threshold(std::size_t n, std::size_t m, double alpha);

}  // namespace roads
