#include "mspp/composite.hpp"

namespace mspp {

double empirical_risk(const CompositeObjective& obj, const Minibatch& batch, const Vector& w) {
  if (batch.samples.empty()) throw config_error("empirical_risk: empty minibatch");
  double sum = 0.0;
  for (const Sample& z : batch.samples) sum += loss_value(obj.loss, w, z);
  return sum / batch.size() + reg_value(obj.reg, w);
}

Vector mean_loss_gradient(const CompositeObjective& obj, const Minibatch& batch, const Vector& w) {
  if (batch.samples.empty()) throw config_error("mean_loss_gradient: empty minibatch");
  Vector grad = Vector::Zero(w.size());
  for (const Sample& z : batch.samples) grad += loss_gradient(obj.loss, w, z);
  return grad / batch.size();
}

double batch_curvature(LossKind kind, const Minibatch& batch) {
  if (batch.samples.empty()) throw config_error("batch_curvature: empty minibatch");
  return smoothness_bound(kind, batch.samples);
}

}  // namespace mspp
