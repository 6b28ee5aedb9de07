#include "mspp/losses.hpp"

#include <cmath>

namespace mspp {

namespace {

void check_dims(const Vector& w, const Sample& z) {
  if (w.size() != z.x.size()) throw config_error("loss: dim(w) != dim(x)");
}

// log(1 + exp(-m)) without overflow for large |m|.
double log1p_exp_neg(double m) {
  if (m >= 0) return std::log1p(std::exp(-m));
  return -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m)) without overflow.
double neg_sigmoid(double m) {
  if (m >= 0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

double loss_value(LossKind kind, const Vector& w, const Sample& z) {
  check_dims(w, z);
  const double margin = w.dot(z.x);
  switch (kind) {
    case LossKind::quadratic: {
      const double r = z.y - margin;
      return 0.5 * r * r;
    }
    case LossKind::logistic:
      return log1p_exp_neg(z.y * margin);
  }
  throw config_error("unknown loss kind");
}

Vector loss_gradient(LossKind kind, const Vector& w, const Sample& z) {
  check_dims(w, z);
  const double margin = w.dot(z.x);
  switch (kind) {
    case LossKind::quadratic:
      return (margin - z.y) * z.x;
    case LossKind::logistic:
      return (-z.y * neg_sigmoid(z.y * margin)) * z.x;
  }
  throw config_error("unknown loss kind");
}

double sample_curvature(LossKind kind, const Sample& z) {
  const double sq = z.x.squaredNorm();
  return kind == LossKind::quadratic ? sq : 0.25 * sq;
}

double smoothness_bound(LossKind kind, std::span<const Sample> data) {
  if (data.empty()) throw config_error("smoothness_bound: empty data");
  double bound = 0.0;
  for (const Sample& z : data) bound = std::max(bound, sample_curvature(kind, z));
  return bound;
}

}  // namespace mspp
