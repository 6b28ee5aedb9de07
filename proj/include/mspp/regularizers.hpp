#pragma once

#include <optional>

#include "mspp/types.hpp"

namespace mspp {

inline double soft_threshold(double v, double tau) {
  if (v > tau) return v - tau;
  if (v < -tau) return v + tau;
  return 0.0;
}

double reg_value(const Regularizer& reg, const Vector& w);

// argmin_u eta*r(u) + 0.5*||u - v||^2.
Vector reg_prox(const Regularizer& reg, const Vector& v, double eta);

// Same prox restricted to the Euclidean ball ||u|| <= radius. For l1 the
// threshold level couples with the ball multiplier, solved by bisection.
Vector reg_prox_in_ball(const Regularizer& reg, const Vector& v, double eta,
                        std::optional<double> radius);

Vector project_to_ball(const Vector& v, std::optional<double> radius);

}  // namespace mspp
