#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mspp/rng.hpp"
#include "mspp/types.hpp"

namespace mspp {

// Sparse linear model with known population risk: features x ~ N(0, I_p),
// response y = w_bar'x + noise, noise ~ N(0, sigma^2), l1 modulus mu.
struct LassoGroundTruth {
  Vector w_bar;
  double sigma = 0.1;
  double mu = 1e-3;
  int p = 0;
  int k_bar = 0;
};

// k_bar support indices chosen without replacement, nonzero entries
// N(0, scale^2).
LassoGroundTruth generate_truth(int p, int k_bar, std::uint64_t seed, double sigma = 0.1,
                                double mu = 1e-3, double scale = 1.0);

Sample sample_lasso_one(const LassoGroundTruth& truth, Rng& rng);

std::vector<Sample> sample_lasso(const LassoGroundTruth& truth, int count, std::uint64_t seed);

// R(w) = 0.5*||w - w_bar||^2 + sigma^2/2 + mu*||w||_1, exact.
double population_risk(const LassoGroundTruth& truth, const Vector& w);

// Closed-form minimizer: elementwise soft-threshold of w_bar at level mu.
Vector population_optimum(const LassoGroundTruth& truth);

// R(w) - R(w*), clamped to 0 within -1e-12; a clamp beyond 1e-9 signals an
// optimum bug and throws.
double excess_risk(const LassoGroundTruth& truth, const Vector& w);

// (lambda, L) of the population risk; the quadratic part has identity Hessian.
std::pair<double, double> qg_constants(const LassoGroundTruth& truth);

}  // namespace mspp
