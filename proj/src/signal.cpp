#include "shapewave/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace shapewave {

Signal::Signal(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.size() != values_.size())
    throw Error(ErrorCode::MismatchedLengths,
                "times has " + std::to_string(times_.size()) + " samples, values has " +
                    std::to_string(values_.size()));
  if (times_.size() < kMinSamples)
    throw Error(ErrorCode::TooShort, "need at least " + std::to_string(kMinSamples) +
                                         " samples, got " + std::to_string(times_.size()));
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]))
      throw Error(ErrorCode::NonFiniteValue, "time at index " + std::to_string(i), i);
    if (i > 0 && !(times_[i] > times_[i - 1]))
      throw Error(ErrorCode::NonIncreasingTimes, "time at index " + std::to_string(i), i);
  }
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw Error(ErrorCode::NonFiniteValue, "value at index " + std::to_string(i), i);
}

Signal validate_signal(std::vector<double> times, std::vector<double> values) {
  return Signal(std::move(times), std::move(values));
}

PhaseFunction::PhaseFunction(std::vector<double> phases, int min_periods)
    : phases_(std::move(phases)) {
  if (phases_.size() < 2)
    throw Error(ErrorCode::TooShort, "phase needs at least two samples");
  for (std::size_t i = 0; i < phases_.size(); ++i) {
    if (!std::isfinite(phases_[i]))
      throw Error(ErrorCode::NonFiniteValue, "phase at index " + std::to_string(i), i);
    if (i > 0 && !(phases_[i] > phases_[i - 1]))
      throw Error(ErrorCode::NonMonotonePhase,
                  "phase does not increase at index " + std::to_string(i), i);
  }
  const double periods = span() / (2. * std::numbers::pi);
  const double rounded = std::round(periods);
  if (std::abs(periods - rounded) > kMaxPeriodDeviation)
    throw Error(ErrorCode::NotNearIntegerPeriods,
                "phase spans " + std::to_string(periods) + " periods");
  l_theta_ = static_cast<int>(rounded);
  if (l_theta_ < min_periods)
    throw Error(ErrorCode::TooFewPeriods, "phase spans " + std::to_string(l_theta_) +
                                              " periods, need " + std::to_string(min_periods));
}

std::vector<double> PhaseFunction::normalized() const {
  const double scale = 2. * std::numbers::pi * l_theta_;
  const double origin = phases_.front();
  std::vector<double> out(phases_.size());
  std::transform(phases_.begin(), phases_.end(), out.begin(),
                 [&](double theta) { return (theta - origin) / scale; });
  return out;
}

PhaseFunction validate_phase(const Signal& signal, std::vector<double> phases) {
  if (phases.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths,
                "phase has " + std::to_string(phases.size()) + " samples, signal has " +
                    std::to_string(signal.size()));
  return PhaseFunction(std::move(phases));
}

ShapeFunction::ShapeFunction(std::vector<cplx> coeffs, ShapeNormalization norm)
    : coeffs_(std::move(coeffs)), norm_(norm) {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidArgument, "shape needs c_0");
  coeffs_[0] = cplx(coeffs_[0].real(), 0.);
}

double ShapeFunction::operator()(double tau) const noexcept {
  if (coeffs_.empty()) return 0.;
  double acc = 0.;
  // highest harmonic first keeps the summation order fixed
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
    const double arg = static_cast<double>(k) * tau;
    acc += coeffs_[k].real() * std::cos(arg) - coeffs_[k].imag() * std::sin(arg);
  }
  return coeffs_[0].real() + 2. * acc;
}

std::vector<double> ShapeFunction::sample(std::size_t points) const {
  std::vector<double> out(points);
  for (std::size_t j = 0; j < points; ++j)
    out[j] = (*this)(2. * std::numbers::pi * static_cast<double>(j) / static_cast<double>(points));
  return out;
}

double ShapeFunction::peak_abs(std::size_t points) const {
  double peak = 0.;
  for (double v : sample(points)) peak = std::max(peak, std::abs(v));
  return peak;
}

ShapeFunction ShapeFunction::rotated(double offset) const {
  std::vector<cplx> out(coeffs_.size());
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    out[k] = coeffs_[k] * std::polar(1., static_cast<double>(k) * offset);
  return ShapeFunction(std::move(out), norm_);
}

double ExtractionResult::relative_residual(std::span<const double> values) const {
  const double num = std::sqrt(std::inner_product(residual.begin(), residual.end(),
                                                  residual.begin(), 0.));
  const double den = std::sqrt(std::inner_product(values.begin(), values.end(),
                                                  values.begin(), 0.));
  return den > 0. ? num / den : num;
}

NormalizedFactors normalize_rank1_factors(std::span<const double> a_raw,
                                          std::span<const cplx> c_raw, double s1) {
  if (!(s1 > 0.)) throw Error(ErrorCode::DegenerateFactors, "singular value is not positive");
  if (a_raw.empty() || c_raw.empty())
    throw Error(ErrorCode::DegenerateFactors, "empty factor");

  const ShapeFunction raw(std::vector<cplx>(c_raw.begin(), c_raw.end()));
  const double beta = raw.peak_abs();
  if (!(beta > 0.)) throw Error(ErrorCode::DegenerateFactors, "shape factor vanishes");

  const double mean =
      std::accumulate(a_raw.begin(), a_raw.end(), 0.) / static_cast<double>(a_raw.size());
  const auto largest = std::max_element(a_raw.begin(), a_raw.end(), [](double x, double y) {
    return std::abs(x) < std::abs(y);
  });
  int sign = 1;
  if (std::abs(mean) > 1e-14 * std::abs(*largest))
    sign = mean < 0. ? -1 : 1;
  else if (*largest < 0.)
    sign = -1;

  NormalizedFactors out;
  out.envelope.resize(a_raw.size());
  const double env_scale = sign * s1 * beta;
  std::transform(a_raw.begin(), a_raw.end(), out.envelope.begin(),
                 [&](double a) { return env_scale * a; });

  std::vector<cplx> coeffs(c_raw.begin(), c_raw.end());
  for (auto& c : coeffs) c *= static_cast<double>(sign) / beta;
  out.shape = ShapeFunction(std::move(coeffs), ShapeNormalization{true, sign, beta});
  return out;
}

}  // namespace shapewave
