#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mspp/errors.hpp"

namespace mspp {

using Vector = Eigen::VectorXd;

// One feature-label pair. For logistic problems y is +-1.
struct Sample {
  Vector x;
  double y = 0.0;
};

// An ordered minibatch; all samples share the feature dimension.
struct Minibatch {
  std::vector<Sample> samples;

  int size() const { return static_cast<int>(samples.size()); }
  int dim() const { return samples.empty() ? 0 : static_cast<int>(samples.front().x.size()); }
};

enum class LossKind { quadratic, logistic };

enum class RegKind { none, l1, l2 };

// r(w): none -> 0, l1 -> mu*||w||_1, l2 -> (mu/2)*||w||^2.
struct Regularizer {
  RegKind kind = RegKind::none;
  double mu = 0.0;

  static Regularizer none() { return {RegKind::none, 0.0}; }
  static Regularizer l1(double mu) {
    if (mu < 0) throw config_error("l1 modulus must be nonnegative");
    return {RegKind::l1, mu};
  }
  static Regularizer l2(double mu) {
    if (mu < 0) throw config_error("l2 modulus must be nonnegative");
    return {RegKind::l2, mu};
  }
};

// Composite objective R = mean loss + r with its analysis constants:
//   smoothness    L, curvature bound of the loss
//   reg_lipschitz G, Lipschitz constant of r (mu*sqrt(p) for l1)
//   growth        lambda, quadratic-growth modulus of the population risk
//   domain_radius optional Euclidean-ball constraint on w; unset means R^p
struct CompositeObjective {
  LossKind loss = LossKind::quadratic;
  Regularizer reg;
  double smoothness = 1.0;
  double reg_lipschitz = 0.0;
  std::optional<double> growth;
  std::optional<double> domain_radius;
};

}  // namespace mspp
