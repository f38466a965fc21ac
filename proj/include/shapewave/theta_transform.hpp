#pragma once

// Phase-space resampling, the discrete spectrum on the normalized-phase
// grid, and harmonic band splitting with demodulation to baseband.

#include <cstddef>
#include <span>
#include <vector>

#include "shapewave/signal.hpp"

namespace shapewave {

// Uniform grid phi_j = j / n on [0, 1).
class NormalizedPhaseGrid {
 public:
  explicit NormalizedPhaseGrid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double node(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(n_);
  }
  std::vector<double> nodes() const;

 private:
  std::size_t n_;
};

bool is_power_of_two(std::size_t n) noexcept;

// Smallest power of two >= max(samples, 8 * l_theta).
std::size_t default_grid_size(std::size_t samples, int l_theta) noexcept;

// Spectrum indexed by signed frequency omega = -n/2 .. n/2 - 1.
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<cplx> bins);  // bins[0] holds omega = -n/2

  std::size_t size() const noexcept { return bins_.size(); }
  int min_omega() const noexcept { return -static_cast<int>(bins_.size() / 2); }
  int max_omega() const noexcept { return static_cast<int>(bins_.size() / 2) - 1; }
  cplx at(int omega) const;
  std::span<const cplx> bins() const noexcept { return bins_; }

 private:
  std::vector<cplx> bins_;
};

// f(omega) = sum_j values_j e^{-2 pi i omega j / n}; n must be a power of two.
Spectrum forward_spectrum(std::span<const double> values);

struct PhaseDomainSignal {
  NormalizedPhaseGrid grid{4};
  std::vector<double> values;
  Spectrum spectrum;
  int l_theta = 0;
};

PhaseDomainSignal resample_to_phase(const Signal& signal, const PhaseFunction& phase,
                                    std::size_t n);

struct BandRange {
  int lo = 0;  // inclusive
  int hi = 0;  // inclusive
  bool contains(int omega) const noexcept { return omega >= lo && omega <= hi; }
};

// { omega : k L - floor(L/2) <= omega <= k L + ceil(L/2) - 1 }.
BandRange band_indices(int k, int l_theta, std::size_t n);

// For even L the lowest bin of every band has no mirror partner; dropping it
// keeps Re/Im of the demodulated band strictly inside |omega| < L/2.
enum class EdgeBin { keep, drop_unpaired };

struct DemodulatedBand {
  int k = 0;
  std::vector<cplx> values;
};

// g_k(phi_j) = (1/n) sum_{omega in band(k)} f(omega) e^{2 pi i (omega - k L) j / n}.
DemodulatedBand extract_demodulated_band(const PhaseDomainSignal& pds, int k,
                                         EdgeBin edge = EdgeBin::keep);

// Cubic-spline interpolation of values on the phase grid back to the sample
// times of `phase`. The grid is treated as one period of a periodic sequence.
std::vector<double> interp_phase_to_time(std::span<const double> values_phase,
                                         const PhaseFunction& phase);

}  // namespace shapewave
