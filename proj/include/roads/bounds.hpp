#pragma once

namespace roads {

// Closed-form bounds on the bounded driving distance probability
// P(T(root, 1_n) <= t) for the speed exponent beta > 1.

// Lower bound from the single-road event: one road covering the whole path
// with speed at least n/t suffices.
// 1 - exp(-2^{-n} * (t/n)^{beta-1}).
double bddp_lower(double beta, int n, double t);

// First-moment upper bound over road chains:
// 2^{-n} * (t/n)^{beta-1} * exp(sum_{k=1}^{n-1} (k+1) k^{-(beta-1)} t^{beta-1}).
double bddp_kahn_upper(double beta, int n, double t);

// Exact chain-count recursion behind the exponential bound:
// 2^{-n} * (t/n)^{beta-1} * f(n) with f(0) = 1 and
// f(k) = 1 + sum_{k' < k} (k'+1) k'^{-(beta-1)} t^{beta-1} f(k').
double bddp_chain_exact(double beta, int n, double t);

struct BddpBounds {
    double lower = 0.0;
    double chain = 0.0;
    double kahn = 0.0;
};

BddpBounds bddp_bounds(double beta, int n, double t);

// Largest t with a finite expected number of vertices within driving
// distance t of the root, for beta > 2:
// min(1/9, ((4/3) * (beta-2) / (beta-1))^{1/(beta-2)}).
double nonexplosion_threshold(double beta);

// Below the threshold, E[#{x : T(root, x) <= t}] <= 2.
double mean_ball_bound();

}  // namespace roads
