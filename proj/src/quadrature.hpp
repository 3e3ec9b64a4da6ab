#pragma once

#include <vector>

namespace hystreal::detail {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rules for 1 <= n <= 64, computed once.
const GaussRule& gauss_rule(int n);

}  // namespace hystreal::detail
