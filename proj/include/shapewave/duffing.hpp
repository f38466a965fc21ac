#pragma once

#include <vector>

#include "shapewave/datasets.hpp"

namespace shapewave::detail {

struct DuffingTrajectory {
  std::vector<double> times;
  std::vector<double> u;
  std::vector<double> v;
};

// Full state on the output grid; gen_duffing keeps only u.
DuffingTrajectory integrate_duffing(const DuffingParams& params);

}  // namespace shapewave::detail
