#include "shapewave/theta_transform.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fft.hpp"
#include "spline.hpp"

namespace shapewave {

namespace {

constexpr std::size_t kWrapNodes = 3;

int ceil_half(int l) { return (l + 1) / 2; }
int floor_half(int l) { return l / 2; }

}  // namespace

NormalizedPhaseGrid::NormalizedPhaseGrid(std::size_t n) : n_(n) {
  if (!is_power_of_two(n))
    throw Error(ErrorCode::InvalidArgument,
                "phase grid size " + std::to_string(n) + " is not a power of two");
}

std::vector<double> NormalizedPhaseGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = node(j);
  return out;
}

bool is_power_of_two(std::size_t n) noexcept { return n >= 1 && (n & (n - 1)) == 0; }

std::size_t default_grid_size(std::size_t samples, int l_theta) noexcept {
  const std::size_t target =
      std::max<std::size_t>(samples, 8 * static_cast<std::size_t>(std::max(l_theta, 1)));
  std::size_t n = 1;
  while (n < target) n <<= 1;
  return n;
}

Spectrum::Spectrum(std::vector<cplx> bins) : bins_(std::move(bins)) {}

cplx Spectrum::at(int omega) const {
  if (omega < min_omega() || omega > max_omega())
    throw Error(ErrorCode::InvalidArgument,
                "frequency " + std::to_string(omega) + " outside the spectrum");
  return bins_[static_cast<std::size_t>(omega - min_omega())];
}

Spectrum forward_spectrum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2 || !is_power_of_two(n))
    throw Error(ErrorCode::InvalidArgument,
                "spectrum length " + std::to_string(n) + " is not a power of two >= 2");
  std::vector<cplx> in(values.begin(), values.end());
  const auto raw = detail::dft(in, detail::Direction::forward);
  // reorder 0..n-1 into omega = -n/2 .. n/2-1
  std::vector<cplx> bins(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) bins[i] = raw[(i + half) % n];
  return Spectrum(std::move(bins));
}

PhaseDomainSignal resample_to_phase(const Signal& signal, const PhaseFunction& phase,
                                    std::size_t n) {
  if (phase.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase and signal lengths differ");
  if (!is_power_of_two(n))
    throw Error(ErrorCode::InvalidArgument, "grid size must be a power of two");
  if (n < 4 * static_cast<std::size_t>(phase.l_theta()))
    throw Error(ErrorCode::GridTooCoarse, "grid size " + std::to_string(n) + " < 4 * l_theta = " +
                                              std::to_string(4 * phase.l_theta()));

  const auto phi = phase.normalized();
  const auto f = signal.values();
  const std::size_t count = phi.size();
  const double last = phi.back();

  // One period of the record is continued on both sides so the spline stays
  // smooth across the wrap and covers [0, 1) even when the record is a little
  // short of a whole number of periods.
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(count + 2 * kWrapNodes + 8);
  y.reserve(x.capacity());
  std::vector<std::size_t> head;
  for (std::size_t l = count; l-- > 0 && head.size() < kWrapNodes;)
    if (phi[l] - 1. < 0.) head.push_back(l);
  for (auto it = head.rbegin(); it != head.rend(); ++it) {
    x.push_back(phi[*it] - 1.);
    y.push_back(f[*it]);
  }
  x.insert(x.end(), phi.begin(), phi.end());
  y.insert(y.end(), f.begin(), f.end());
  std::size_t appended = 0;
  for (std::size_t l = 0; l < count; ++l) {
    const double shifted = phi[l] + 1.;
    if (shifted <= last) continue;
    x.push_back(shifted);
    y.push_back(f[l]);
    if (++appended >= kWrapNodes && shifted > 1.) break;
  }

  const detail::NaturalSpline spline(std::move(x), std::move(y));
  PhaseDomainSignal out;
  out.grid = NormalizedPhaseGrid(n);
  out.values = spline(out.grid.nodes());
  out.spectrum = forward_spectrum(out.values);
  out.l_theta = phase.l_theta();
  return out;
}

BandRange band_indices(int k, int l_theta, std::size_t n) {
  if (l_theta < 1) throw Error(ErrorCode::InvalidArgument, "l_theta must be positive");
  const BandRange band{k * l_theta - floor_half(l_theta), k * l_theta + ceil_half(l_theta) - 1};
  const int half = static_cast<int>(n / 2);
  if (band.hi + 1 > half || band.lo < -half)
    throw Error(ErrorCode::BandExceedsNyquist,
                "band " + std::to_string(k) + " reaches bin " + std::to_string(band.hi) +
                    " but the grid of " + std::to_string(n) +
                    " points resolves up to " + std::to_string(half - 1) +
                    "; lower K or raise the grid size");
  return band;
}

DemodulatedBand extract_demodulated_band(const PhaseDomainSignal& pds, int k, EdgeBin edge) {
  const std::size_t n = pds.values.size();
  BandRange band = band_indices(k, pds.l_theta, n);
  if (edge == EdgeBin::drop_unpaired && pds.l_theta % 2 == 0) ++band.lo;

  const int shift = k * pds.l_theta;
  std::vector<cplx> buf(n, cplx{});
  for (int omega = band.lo; omega <= band.hi; ++omega) {
    const int base = omega - shift;
    const auto idx = static_cast<std::size_t>((base + static_cast<int>(n)) % static_cast<int>(n));
    buf[idx] = pds.spectrum.at(omega);
  }
  auto values = detail::dft(buf, detail::Direction::inverse);
  const double scale = 1. / static_cast<double>(n);
  for (auto& v : values) v *= scale;
  return DemodulatedBand{k, std::move(values)};
}

std::vector<double> interp_phase_to_time(std::span<const double> values_phase,
                                         const PhaseFunction& phase) {
  const std::size_t n = values_phase.size();
  if (n < 4) throw Error(ErrorCode::TooShort, "phase grid needs at least four nodes");
  const auto phi = phase.normalized();
  const double overshoot = std::max(0., phi.back() - 1.);
  const auto pad = std::min<std::size_t>(
      n, kWrapNodes + static_cast<std::size_t>(std::ceil(overshoot * static_cast<double>(n))));

  const double dn = static_cast<double>(n);
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(n + 2 * pad);
  y.reserve(n + 2 * pad);
  for (std::size_t j = n - pad; j < n; ++j) {
    x.push_back((static_cast<double>(j) - dn) / dn);
    y.push_back(values_phase[j]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    x.push_back(static_cast<double>(j) / dn);
    y.push_back(values_phase[j]);
  }
  for (std::size_t j = 0; j < pad; ++j) {
    x.push_back((static_cast<double>(j) + dn) / dn);
    y.push_back(values_phase[j]);
  }
  const detail::NaturalSpline spline(std::move(x), std::move(y));
  return spline(phi);
}

}  // namespace shapewave
