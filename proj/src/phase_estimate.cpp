#include "shapewave/phase_estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "spline.hpp"

namespace shapewave {

namespace {

constexpr std::size_t kLowestBin = 3;          // below this the envelope dominates
constexpr double kPeakMargin = 1.05;           // fundamental vs. strongest peak outside its band
constexpr double kMinPeakToMeanPower = 20.;    // rejects flat (noise-like) spectra
constexpr int kCentroidPasses = 3;

struct Band {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

Band band_around(double centre, double half_width_fraction, std::size_t top) {
  const double lo = std::ceil(centre * (1. - half_width_fraction));
  const double hi = std::floor(centre * (1. + half_width_fraction));
  Band b;
  b.lo = std::max<std::size_t>(kLowestBin, static_cast<std::size_t>(std::max(lo, 0.)));
  b.hi = std::min<std::size_t>(top, static_cast<std::size_t>(std::max(hi, 0.)));
  return b;
}

void check_config(const PhaseEstimateConfig& c) {
  if (!(c.bandwidth > 0. && c.bandwidth < 1.))
    throw Error(ErrorCode::InvalidArgument, "bandwidth must lie in (0, 1)");
  if (!(c.smoothing_cutoff > 0. && c.smoothing_cutoff <= 0.5))
    throw Error(ErrorCode::InvalidArgument, "smoothing cutoff must lie in (0, 0.5]");
  if (c.fundamental_hint && !(*c.fundamental_hint >= static_cast<double>(kLowestBin)))
    throw Error(ErrorCode::InvalidArgument, "fundamental hint must be at least 3 cycles");
}

}  // namespace

std::vector<double> estimate_raw_phase(const Signal& signal, const PhaseEstimateConfig& config) {
  check_config(config);
  const std::size_t N = signal.size();
  const auto times = signal.times();
  const double t0 = times.front();
  const double duration = times.back() - t0;

  std::vector<double> grid(N);
  for (std::size_t i = 0; i < N; ++i)
    grid[i] = t0 + duration * static_cast<double>(i) / static_cast<double>(N - 1);
  grid.back() = times.back();
  const detail::NaturalSpline to_uniform(std::vector<double>(times.begin(), times.end()),
                                         std::vector<double>(signal.values().begin(),
                                                             signal.values().end()));
  const auto uniform = to_uniform(grid);
  const std::vector<cplx> x(uniform.begin(), uniform.end());
  const auto X = detail::dft(x, detail::Direction::forward);

  const std::size_t top = N / 2 - 1;
  if (top <= kLowestBin) throw Error(ErrorCode::TooShort, "record too short to estimate a phase");
  std::vector<double> power(top + 1, 0.);
  for (std::size_t m = 1; m <= top; ++m) power[m] = std::norm(X[m]);

  double centre = 0.;
  if (config.fundamental_hint) {
    centre = *config.fundamental_hint;
  } else {
    const auto peak = std::max_element(power.begin() + kLowestBin, power.end());
    centre = static_cast<double>(peak - power.begin());
  }
  for (int pass = 0; pass < kCentroidPasses; ++pass) {
    const Band b = band_around(centre, config.bandwidth, top);
    double w = 0.;
    double wm = 0.;
    for (std::size_t m = b.lo; m <= b.hi; ++m) {
      w += power[m];
      wm += power[m] * static_cast<double>(m);
    }
    if (w > 0.) centre = wm / w;
  }
  const Band band = band_around(centre, config.bandwidth, top);
  if (band.lo > band.hi) throw Error(ErrorCode::AmbiguousFundamental, "empty fundamental band");

  if (!config.fundamental_hint) {
    double inside = 0.;
    double outside = 0.;
    for (std::size_t m = kLowestBin; m <= top; ++m) {
      double& slot = (m >= band.lo && m <= band.hi) ? inside : outside;
      slot = std::max(slot, power[m]);
    }
    const double mean_power =
        std::accumulate(power.begin() + 1, power.end(), 0.) / static_cast<double>(top);
    if (inside < kPeakMargin * kPeakMargin * outside)
      throw Error(ErrorCode::AmbiguousFundamental,
                  "strongest peak near " + std::to_string(centre) +
                      " cycles is not 5% above the next candidate");
    if (inside < kMinPeakToMeanPower * mean_power)
      throw Error(ErrorCode::AmbiguousFundamental, "spectrum has no prominent fundamental");
  }

  std::vector<cplx> analytic(N, cplx{});
  for (std::size_t m = band.lo; m <= band.hi; ++m) analytic[m] = 2. * X[m];
  const auto z = detail::dft(analytic, detail::Direction::inverse);

  std::vector<double> psi(N);
  psi[0] = std::arg(z[0]);
  for (std::size_t i = 1; i < N; ++i) {
    double step = std::arg(z[i]) - std::arg(z[i - 1]);
    step -= 2. * std::numbers::pi * std::round(step / (2. * std::numbers::pi));
    psi[i] = psi[i - 1] + step;
  }

  // low-pass the deviation from the end-to-end trend
  const double rise = psi.back() - psi.front();
  const double periods = rise / (2. * std::numbers::pi);
  const double cutoff = config.smoothing_cutoff * std::round(periods);
  std::vector<cplx> dev(N);
  for (std::size_t i = 0; i < N; ++i)
    dev[i] = psi[i] - (psi.front() + rise * static_cast<double>(i) / static_cast<double>(N - 1));
  auto D = detail::dft(dev, detail::Direction::forward);
  for (std::size_t m = 0; m < N; ++m) {
    const double freq = static_cast<double>(m <= N / 2 ? m : N - m);
    if (freq >= cutoff) D[m] = 0.;
  }
  const auto smooth = detail::dft(D, detail::Direction::inverse);

  std::vector<double> theta(N);
  for (std::size_t i = 0; i < N; ++i)
    theta[i] = psi.front() + rise * static_cast<double>(i) / static_cast<double>(N - 1) +
               smooth[i].real() / static_cast<double>(N);
  for (std::size_t i = 1; i < N; ++i)
    if (!(theta[i] > theta[i - 1]))
      throw Error(ErrorCode::NonMonotoneEstimate,
                  "smoothed phase decreases at sample " + std::to_string(i), i);

  const detail::NaturalSpline back(std::move(grid), theta);
  auto out = back(times);
  for (std::size_t i = 1; i < N; ++i)
    if (!(out[i] > out[i - 1]))
      throw Error(ErrorCode::NonMonotoneEstimate,
                  "interpolated phase decreases at sample " + std::to_string(i), i);
  return out;
}

PhaseFunction estimate_phase(const Signal& signal, const PhaseEstimateConfig& config) {
  return validate_phase(signal, estimate_raw_phase(signal, config));
}

PhaseFunction exact_phase_from_samples(const Signal& signal, std::vector<double> phases) {
  return validate_phase(signal, std::move(phases));
}

std::pair<Signal, PhaseFunction> trim_to_whole_periods(const Signal& signal,
                                                       std::vector<double> phases) {
  if (phases.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase and signal lengths differ");
  const double two_pi = 2. * std::numbers::pi;
  const double periods = (phases.back() - phases.front()) / two_pi;
  const double whole = std::floor(periods + kMaxPeriodDeviation);
  if (whole < kMinPeriods)
    throw Error(ErrorCode::TooFewPeriods, "record spans " + std::to_string(periods) + " periods");

  const double target = phases.front() + two_pi * whole;
  std::size_t end = phases.size();
  if (phases.back() > target) {
    const auto it = std::upper_bound(phases.begin(), phases.end(), target);
    end = static_cast<std::size_t>(it - phases.begin());
    if (end < phases.size() && std::abs(phases[end] - target) < std::abs(phases[end - 1] - target))
      ++end;
  }
  const auto times = signal.times();
  const auto values = signal.values();
  Signal trimmed(std::vector<double>(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(end)),
                 std::vector<double>(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(end)));
  phases.resize(end);
  PhaseFunction phase = validate_phase(trimmed, std::move(phases));
  return {std::move(trimmed), std::move(phase)};
}

}  // namespace shapewave
