#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ddac/matrix.hpp"

namespace ddac {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_stab = 1e-8;
};

/// One named parameter slot for an optimizer step.
struct ParamSlot {
  std::string name;
  Matrix* value = nullptr;
  const Matrix* grad = nullptr;
};

/// Adam with bias correction. Parameter order must be identical across steps;
/// moment buffers are allocated on the first step.
class AdamOptimizer {
public:
  explicit AdamOptimizer(AdamConfig config = {});

  void step(std::span<const ParamSlot> params);

  int step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }

private:
  AdamConfig config_;
  int step_count_ = 0;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
};

}  // namespace ddac
