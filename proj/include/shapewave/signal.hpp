#pragma once

// Core domain types shared by the whole extraction pipeline.
//
// Conventions:
//  * A shape function is stored by its non-negative harmonic coefficients
//    c_0..c_K and evaluated as s(tau) = c_0 + 2 * sum_k Re(c_k e^{i k tau}),
//    i.e. the two-sided series with c_{-k} = conj(c_k).
//  * The normalized phase of a sample is phi = (theta - theta_0) / (2 pi L),
//    so harmonic k of the shape sits exactly at bin k*L of the phase-domain
//    spectrum.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "shapewave/error.hpp"

namespace shapewave {

using cplx = std::complex<double>;

inline constexpr std::size_t kMinSamples = 16;
inline constexpr int kMinPeriods = 4;
inline constexpr double kMaxPeriodDeviation = 0.1;
inline constexpr std::size_t kShapeGridSize = 1024;

class Signal {
 public:
  // Throws Error{TooShort, NonIncreasingTimes, NonFiniteValue, MismatchedLengths}.
  Signal(std::vector<double> times, std::vector<double> values);

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

class PhaseFunction {
 public:
  // `min_periods` is lowered only for tapered analysis windows.
  PhaseFunction(std::vector<double> phases, int min_periods = kMinPeriods);

  std::span<const double> phases() const noexcept { return phases_; }
  std::size_t size() const noexcept { return phases_.size(); }
  int l_theta() const noexcept { return l_theta_; }
  double phase_origin() const noexcept { return phases_.front(); }
  double span() const noexcept { return phases_.back() - phases_.front(); }

  // (theta - theta_0) / (2 pi L) for every sample.
  std::vector<double> normalized() const;

 private:
  std::vector<double> phases_;
  int l_theta_ = 0;
};

Signal validate_signal(std::vector<double> times, std::vector<double> values);

PhaseFunction validate_phase(const Signal& signal, std::vector<double> phases);

struct ShapeNormalization {
  bool peak_normalized = false;
  int sign = 1;            // sign flip applied so that the envelope mean is >= 0
  double peak_scale = 1.;  // max |s_raw| the coefficients were divided by
};

class ShapeFunction {
 public:
  ShapeFunction() = default;
  // coeffs[0] must be real.
  explicit ShapeFunction(std::vector<cplx> coeffs, ShapeNormalization norm = {});

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  int band_limit() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const ShapeNormalization& normalization() const noexcept { return norm_; }

  double operator()(double tau) const noexcept;

  // s on tau_j = 2 pi j / points, j = 0..points-1.
  std::vector<double> sample(std::size_t points = kShapeGridSize) const;

  double peak_abs(std::size_t points = kShapeGridSize) const;

  // Coefficients of tau -> s(tau + offset).
  ShapeFunction rotated(double offset) const;

 private:
  std::vector<cplx> coeffs_;
  ShapeNormalization norm_;
};

struct Envelope {
  std::vector<double> values_phase;
  std::vector<double> values_time;
};

struct FitDiagnostics {
  std::vector<double> singular_values;
  double rank1_energy_fraction = 0.;
  double objective_value = 0.;
};

struct ExtractionResult {
  ShapeFunction shape;
  Envelope envelope;
  std::vector<double> residual;
  FitDiagnostics fit;
  int l_theta = 0;
  std::size_t grid_size = 0;

  double relative_residual(std::span<const double> values) const;
};

struct NormalizedFactors {
  std::vector<double> envelope;
  ShapeFunction shape;
};

// Canonical scaling of a rank-1 pair (a_raw, c_raw) with weight s1: the
// singular value is folded into the envelope, the shape is rescaled to unit
// peak and the sign is chosen so that the envelope has non-negative mean.
// The product envelope(phi) * s(tau) is unchanged.
NormalizedFactors normalize_rank1_factors(std::span<const double> a_raw,
                                          std::span<const cplx> c_raw, double s1);

}  // namespace shapewave
