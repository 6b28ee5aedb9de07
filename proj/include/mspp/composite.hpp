#pragma once

#include "mspp/losses.hpp"
#include "mspp/regularizers.hpp"
#include "mspp/types.hpp"

namespace mspp {

// R_S(w) = mean_i loss(w; z_i) + r(w).
double empirical_risk(const CompositeObjective& obj, const Minibatch& batch, const Vector& w);

// Mean loss gradient over the batch. Accumulation order is fixed (sample 0
// first) so identical inputs give bit-identical results.
Vector mean_loss_gradient(const CompositeObjective& obj, const Minibatch& batch, const Vector& w);

// Max sample curvature over the batch; the inner solver's local L.
double batch_curvature(LossKind kind, const Minibatch& batch);

}  // namespace mspp
