#pragma once

#include <gsl/gsl_interp.h>

#include <memory>
#include <span>
#include <vector>

namespace shapewave::detail {

// Natural cubic spline (zero second derivative at both ends) backed by GSL.
// Abscissae must be strictly increasing. Queries outside the node range are
// clamped to the nearest end node.
class NaturalSpline {
 public:
  NaturalSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  std::vector<double> operator()(std::span<const double> x) const;

 private:
  struct InterpDeleter {
    void operator()(gsl_interp* p) const noexcept;
  };
  struct AccelDeleter {
    void operator()(gsl_interp_accel* p) const noexcept;
  };

  std::vector<double> x_;
  std::vector<double> y_;
  std::unique_ptr<gsl_interp, InterpDeleter> interp_;
};

}  // namespace shapewave::detail
