#include "shapewave/local_extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "shapewave/theta_transform.hpp"

namespace shapewave {

double window_taper(double phase_offset, double mu) noexcept {
  return 0.5 * (1. + std::cos(phase_offset / mu));
}

WindowSegment window_segment(const Signal& signal, const PhaseFunction& phase, std::size_t center,
                             double mu, bool taper) {
  if (!(mu >= 1.)) throw Error(ErrorCode::InvalidArgument, "mu must be >= 1");
  if (phase.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase and signal lengths differ");
  if (center >= signal.size())
    throw Error(ErrorCode::InvalidArgument, "window centre outside the record", center);

  const auto theta = phase.phases();
  const double two_pi = 2. * std::numbers::pi;
  const double mid = theta[center];
  const double reach = mu * std::numbers::pi;
  // samples landing on the window edge up to rounding belong to the window
  const double slack = 8. * std::numeric_limits<double>::epsilon() * (std::abs(mid) + reach);

  auto lo = static_cast<std::size_t>(
      std::lower_bound(theta.begin(), theta.end(), mid - reach - slack) - theta.begin());
  auto hi = static_cast<std::size_t>(
      std::upper_bound(theta.begin(), theta.end(), mid + reach + slack) - theta.begin());  // exclusive
  const bool cut_left = mid - reach < theta.front();
  const bool cut_right = mid + reach > theta.back();

  const auto span = [&] { return theta[hi - 1] - theta[lo]; };
  if (hi - lo < kMinSamples || span() < kMinWindowPeriods * two_pi)
    throw Error(ErrorCode::WindowTooShort,
                "window around sample " + std::to_string(center) + " spans " +
                    std::to_string(span() / two_pi) + " periods",
                center);

  // round the segment to whole periods, giving up samples on the side the
  // record did not already cut short
  const double periods = std::floor(span() / two_pi + kMaxPeriodDeviation);
  if (std::abs(span() / two_pi - periods) > kMaxPeriodDeviation) {
    if (cut_left && !cut_right) {
      hi = static_cast<std::size_t>(
          std::upper_bound(theta.begin(), theta.end(), theta[lo] + periods * two_pi) -
          theta.begin());
    } else if (cut_right && !cut_left) {
      lo = static_cast<std::size_t>(
          std::lower_bound(theta.begin(), theta.end(), theta[hi - 1] - periods * two_pi) -
          theta.begin());
    } else {
      const double half = periods * std::numbers::pi;
      lo = static_cast<std::size_t>(std::lower_bound(theta.begin(), theta.end(), mid - half) -
                                    theta.begin());
      hi = static_cast<std::size_t>(std::upper_bound(theta.begin(), theta.end(), mid + half) -
                                    theta.begin());
    }
  }
  if (hi - lo < kMinSamples)
    throw Error(ErrorCode::WindowTooShort, "window has too few samples", center);

  const auto times = signal.times();
  const auto values = signal.values();
  std::vector<double> t(times.begin() + static_cast<std::ptrdiff_t>(lo),
                        times.begin() + static_cast<std::ptrdiff_t>(hi));
  std::vector<double> f(hi - lo);
  std::vector<double> chi(hi - lo, 1.);
  for (std::size_t j = lo; j < hi; ++j) {
    if (taper) chi[j - lo] = window_taper(theta[j] - mid, mu);
    f[j - lo] = values[j] * chi[j - lo];
  }
  std::vector<double> th(theta.begin() + static_cast<std::ptrdiff_t>(lo),
                         theta.begin() + static_cast<std::ptrdiff_t>(hi));
  PhaseFunction seg_phase = [&] {
    try {
      return PhaseFunction(std::move(th), kMinWindowPeriods);
    } catch (const Error& e) {
      throw Error(ErrorCode::WindowTooShort, std::string("window phase: ") + e.what(), center);
    }
  }();
  return WindowSegment{Signal(std::move(t), std::move(f)), std::move(seg_phase), std::move(chi), lo};
}

std::vector<std::size_t> default_centers(const Signal& signal, const PhaseFunction& phase,
                                         double mu) {
  const auto theta = phase.phases();
  const double per_period =
      static_cast<double>(signal.size()) / static_cast<double>(std::max(phase.l_theta(), 1));
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(per_period / 8.)));
  const double reach = mu * std::numbers::pi;
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < theta.size(); j += stride)
    if (theta[j] - reach >= theta.front() && theta[j] + reach <= theta.back()) out.push_back(j);
  return out;
}

bool ShapeTrack::complete() const noexcept {
  return std::all_of(errors.begin(), errors.end(), [](const std::string& e) { return e.empty(); });
}

ShapeTrack extract_shape_track(const Signal& signal, const PhaseFunction& phase,
                               const WindowSpec& spec, std::optional<int> band_limit) {
  if (!(spec.mu >= 1.)) throw Error(ErrorCode::InvalidArgument, "mu must be >= 1");
  if (phase.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase and signal lengths differ");
  const auto centers = spec.centers.empty() ? default_centers(signal, phase, spec.mu) : spec.centers;
  if (!std::is_sorted(centers.begin(), centers.end()))
    throw Error(ErrorCode::InvalidArgument, "window centres must be sorted");

  ShapeTrack track;
  const auto times = signal.times();
  const std::size_t count = centers.size();
  track.center_indices = centers;
  track.centers.resize(count);
  track.shapes.resize(count);
  track.errors.resize(count);
  track.drift.resize(count);
  track.envelopes.resize(count);

  const ShapeFunction* previous = nullptr;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m = centers[i];
    if (m >= signal.size()) {
      track.centers[i] = std::numeric_limits<double>::quiet_NaN();
      track.errors[i] = std::string(error_name(ErrorCode::InvalidArgument));
      continue;
    }
    track.centers[i] = times[m];
    try {
      const WindowSegment seg = window_segment(signal, phase, m, spec.mu, spec.taper);
      const int L = seg.phase.l_theta();
      const std::size_t n = default_grid_size(seg.signal.size(), L);
      ExtractOptions opts;
      opts.grid_size = n;
      opts.band_limit = band_limit.value_or(default_band_limit(n, L));
      ExtractionResult res = extract_shape(seg.signal, seg.phase, opts);

      auto& env = track.envelopes[i];
      env.resize(seg.taper.size());
      for (std::size_t j = 0; j < env.size(); ++j)
        env[j] = seg.taper[j] > kTaperReliable ? res.envelope.values_time[j] / seg.taper[j]
                                               : std::numeric_limits<double>::quiet_NaN();
      track.shapes[i] = std::move(res.shape);
      if (previous) track.drift[i] = shape_distance(*previous, *track.shapes[i]);
      previous = &*track.shapes[i];
    } catch (const Error& e) {
      track.errors[i] = std::string(e.name());
    }
  }
  return track;
}

}  // namespace shapewave
