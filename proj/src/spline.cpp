#include "spline.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include <algorithm>
#include <mutex>

#include "shapewave/error.hpp"

namespace shapewave::detail {

namespace {

void silence_gsl() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

void NaturalSpline::InterpDeleter::operator()(gsl_interp* p) const noexcept { gsl_interp_free(p); }
void NaturalSpline::AccelDeleter::operator()(gsl_interp_accel* p) const noexcept {
  gsl_interp_accel_free(p);
}

NaturalSpline::NaturalSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  silence_gsl();
  if (x_.size() != y_.size())
    throw Error(ErrorCode::MismatchedLengths, "spline abscissae and ordinates differ in length");
  if (x_.size() < 3) throw Error(ErrorCode::TooShort, "spline needs at least three nodes");
  interp_.reset(gsl_interp_alloc(gsl_interp_cspline, x_.size()));
  if (!interp_ || gsl_interp_init(interp_.get(), x_.data(), y_.data(), x_.size()) != GSL_SUCCESS)
    throw Error(ErrorCode::InvalidArgument, "spline nodes must be strictly increasing");
}

double NaturalSpline::operator()(double x) const {
  const double xc = std::clamp(x, x_.front(), x_.back());
  return gsl_interp_eval(interp_.get(), x_.data(), y_.data(), xc, nullptr);
}

std::vector<double> NaturalSpline::operator()(std::span<const double> x) const {
  std::unique_ptr<gsl_interp_accel, AccelDeleter> acc(gsl_interp_accel_alloc());
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xc = std::clamp(x[i], x_.front(), x_.back());
    out[i] = gsl_interp_eval(interp_.get(), x_.data(), y_.data(), xc, acc.get());
  }
  return out;
}

}  // namespace shapewave::detail
