#include "ddac/adam.hpp"

#include <cmath>

namespace ddac {

AdamOptimizer::AdamOptimizer(AdamConfig config) : config_(config) {
  if (!(config_.lr > 0.0)) throw ConfigError("adam: learning rate must be positive");
}

void AdamOptimizer::step(std::span<const ParamSlot> params) {
  if (first_moment_.empty()) {
    first_moment_.reserve(params.size());
    second_moment_.reserve(params.size());
    for (const ParamSlot& p : params) {
      first_moment_.emplace_back(p.value->rows(), p.value->cols());
      second_moment_.emplace_back(p.value->rows(), p.value->cols());
    }
  } else if (params.size() != first_moment_.size()) {
    throw ShapeError("adam: parameter count changed between steps");
  }

  ++step_count_;
  const double bc1 = 1.0 - std::pow(config_.beta1, step_count_);
  const double bc2 = 1.0 - std::pow(config_.beta2, step_count_);

  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& value = *params[p].value;
    const Matrix& grad = *params[p].grad;
    Matrix& m = first_moment_[p];
    Matrix& v = second_moment_[p];
    if (!value.same_shape(m))
      throw ShapeError("adam: parameter '" + params[p].name + "' shape " +
                       value.shape_str() + " does not match registered " +
                       m.shape_str());
    if (!grad.same_shape(value))
      throw ShapeError("adam: gradient shape " + grad.shape_str() +
                       " does not match parameter '" + params[p].name + "' " +
                       value.shape_str());
    if (!grad.all_finite())
      throw DomainError("adam: non-finite gradient for parameter '" +
                        params[p].name + "'");
    for (std::size_t i = 0; i < value.size(); ++i) {
      const double g = grad.values()[i];
      double& mi = m.values()[i];
      double& vi = v.values()[i];
      mi = config_.beta1 * mi + (1.0 - config_.beta1) * g;
      vi = config_.beta2 * vi + (1.0 - config_.beta2) * g * g;
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      value.values()[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps_stab);
    }
  }
}

}  // namespace ddac
