#include "mspp/oracle.hpp"

#include <cmath>

#include "mspp/errors.hpp"
#include "mspp/regularizers.hpp"

namespace mspp {

LassoGroundTruth generate_truth(int p, int k_bar, std::uint64_t seed, double sigma, double mu,
                                double scale) {
  if (p < 1) throw config_error("generate_truth: p must be >= 1");
  if (k_bar < 0 || k_bar > p) throw config_error("generate_truth: k_bar must be in [0, p]");
  if (sigma < 0 || mu < 0) throw config_error("generate_truth: sigma and mu must be nonnegative");
  if (scale <= 0) throw config_error("generate_truth: scale must be positive");

  Rng rng(seed);
  std::vector<int> support = random_permutation(p, rng);
  LassoGroundTruth truth;
  truth.w_bar = Vector::Zero(p);
  for (int i = 0; i < k_bar; ++i) truth.w_bar[support[i]] = scale * rng.next_gaussian();
  truth.sigma = sigma;
  truth.mu = mu;
  truth.p = p;
  truth.k_bar = k_bar;
  return truth;
}

Sample sample_lasso_one(const LassoGroundTruth& truth, Rng& rng) {
  Sample z;
  z.x = Vector(truth.p);
  for (int i = 0; i < truth.p; ++i) z.x[i] = rng.next_gaussian();
  z.y = truth.w_bar.dot(z.x) + truth.sigma * rng.next_gaussian();
  return z;
}

std::vector<Sample> sample_lasso(const LassoGroundTruth& truth, int count, std::uint64_t seed) {
  if (count < 1) throw config_error("sample_lasso: count must be >= 1");
  Rng rng(seed);
  std::vector<Sample> samples;
  samples.reserve(count);
  for (int i = 0; i < count; ++i) samples.push_back(sample_lasso_one(truth, rng));
  return samples;
}

double population_risk(const LassoGroundTruth& truth, const Vector& w) {
  if (w.size() != truth.p) throw config_error("population_risk: dimension mismatch");
  return 0.5 * (w - truth.w_bar).squaredNorm() + 0.5 * truth.sigma * truth.sigma +
         truth.mu * w.lpNorm<1>();
}

Vector population_optimum(const LassoGroundTruth& truth) {
  Vector w(truth.p);
  for (int i = 0; i < truth.p; ++i) w[i] = soft_threshold(truth.w_bar[i], truth.mu);
  return w;
}

double excess_risk(const LassoGroundTruth& truth, const Vector& w) {
  const double gap = population_risk(truth, w) - population_risk(truth, population_optimum(truth));
  if (gap >= 0) return gap;
  if (gap < -1e-9) throw numerical_error("excess_risk: negative beyond clamp guard");
  return 0.0;
}

std::pair<double, double> qg_constants(const LassoGroundTruth&) { return {1.0, 1.0}; }

}  // namespace mspp
