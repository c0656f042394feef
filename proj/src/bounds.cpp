#include "roads/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace roads {

namespace {

void require_args(double beta, int n, double t) {
    if (!(beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
}

// Probability weight of a single path-covering road faster than n/t.
double direct_mass(double beta, int n, double t) {
    return std::ldexp(1.0, -n) * std::pow(t / n, beta - 1.0);
}

double chain_weight(double beta, double t, int k) {
    return (k + 1) * std::pow(static_cast<double>(k), -(beta - 1.0)) *
           std::pow(t, beta - 1.0);
}

}  // namespace

double bddp_lower(double beta, int n, double t) {
    require_args(beta, n, t);
    return -std::expm1(-direct_mass(beta, n, t));
}

double bddp_kahn_upper(double beta, int n, double t) {
    require_args(beta, n, t);
    double exponent = 0.0;
    for (int k = 1; k < n; ++k) exponent += chain_weight(beta, t, k);
    return direct_mass(beta, n, t) * std::exp(exponent);
}

double bddp_chain_exact(double beta, int n, double t) {
    require_args(beta, n, t);
    std::vector<double> f(static_cast<std::size_t>(n) + 1);
    f[0] = 1.0;
    for (int k = 1; k <= n; ++k) {
        double sum = 1.0;
        for (int kp = 1; kp < k; ++kp)
            sum += chain_weight(beta, t, kp) * f[static_cast<std::size_t>(kp)];
        f[static_cast<std::size_t>(k)] = sum;
    }
    return direct_mass(beta, n, t) * f[static_cast<std::size_t>(n)];
}

BddpBounds bddp_bounds(double beta, int n, double t) {
    return BddpBounds{bddp_lower(beta, n, t), bddp_chain_exact(beta, n, t),
                      bddp_kahn_upper(beta, n, t)};
}

double nonexplosion_threshold(double beta) {
    if (!(beta > 2.0)) throw std::invalid_argument("beta must exceed 2");
    const double star =
        std::pow((4.0 / 3.0) * (beta - 2.0) / (beta - 1.0), 1.0 / (beta - 2.0));
    return std::min(1.0 / 9.0, star);
}

double mean_ball_bound() { return 2.0; }

}  // namespace roads
