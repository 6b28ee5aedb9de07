#pragma once

#include <span>

#include "mspp/types.hpp"

namespace mspp {

// quadratic: 0.5*(y - w'x)^2, logistic: log(1 + exp(-y*w'x)).
double loss_value(LossKind kind, const Vector& w, const Sample& z);

// quadratic: -(y - w'x)*x, logistic: -y*x / (1 + exp(y*w'x)).
Vector loss_gradient(LossKind kind, const Vector& w, const Sample& z);

// Curvature of the loss at one sample: ||x||^2 (quadratic), ||x||^2/4 (logistic).
double sample_curvature(LossKind kind, const Sample& z);

// Dataset-level smoothness constant: max of sample_curvature. A harness-level
// override is allowed where a model-derived constant is known.
double smoothness_bound(LossKind kind, std::span<const Sample> data);

}  // namespace mspp
