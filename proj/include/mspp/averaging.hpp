#pragma once

#include "mspp/types.hpp"

namespace mspp {

// t_weighted     w_bar = sum t*w_t / sum t   (2/(T(T+1)) normalization)
// uniform        w_bar = sum w_t / T
// gamma_weighted w_bar = sum gamma_t*w_t / sum gamma_t
enum class Averaging { t_weighted, uniform, gamma_weighted };

// Running weighted average; never stores the iterates.
class Averager {
 public:
  explicit Averager(Averaging mode) : mode_(mode) {}

  void add(int t, double gamma_t, const Vector& w) {
    const double weight = weight_for(t, gamma_t);
    if (sum_.size() == 0) sum_ = Vector::Zero(w.size());
    sum_ += weight * w;
    weight_sum_ += weight;
  }

  Vector average() const {
    if (weight_sum_ <= 0) throw config_error("averager: no iterates added");
    return sum_ / weight_sum_;
  }

  double weight_sum() const { return weight_sum_; }
  bool empty() const { return weight_sum_ <= 0; }

 private:
  double weight_for(int t, double gamma_t) const {
    switch (mode_) {
      case Averaging::t_weighted:
        return static_cast<double>(t);
      case Averaging::uniform:
        return 1.0;
      case Averaging::gamma_weighted:
        return gamma_t;
    }
    throw config_error("unknown averaging mode");
  }

  Averaging mode_;
  Vector sum_;
  double weight_sum_ = 0.0;
};

}  // namespace mspp
