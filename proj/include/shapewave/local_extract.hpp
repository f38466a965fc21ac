#pragma once

// Windowed shape extraction: one shape per analysis centre, from a
// raised-cosine tapered segment spanning |theta - theta_m| <= mu * pi.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shapewave/shape_extract.hpp"
#include "shapewave/signal.hpp"

namespace shapewave {

inline constexpr double kDefaultMu = 3.;
inline constexpr int kMinWindowPeriods = 2;
inline constexpr double kTaperReliable = 0.1;

struct WindowSpec {
  double mu = kDefaultMu;
  std::vector<std::size_t> centers;  // sample indices, ascending; empty selects the default set
  bool taper = true;
};

struct WindowSegment {
  Signal signal;
  PhaseFunction phase;
  std::vector<double> taper;  // chi at each kept sample
  std::size_t first = 0;      // index of the first kept sample in the full record
};

// chi = (1 + cos((theta - theta_m) / mu)) / 2.
double window_taper(double phase_offset, double mu) noexcept;

// Throws WindowTooShort when fewer than two periods fall inside the window.
WindowSegment window_segment(const Signal& signal, const PhaseFunction& phase, std::size_t center,
                             double mu, bool taper = true);

// Every ceil(samples_per_period / 8)-th sample whose full window lies inside the record.
std::vector<std::size_t> default_centers(const Signal& signal, const PhaseFunction& phase,
                                         double mu = kDefaultMu);

struct ShapeTrack {
  std::vector<double> centers;                      // seconds
  std::vector<std::size_t> center_indices;
  std::vector<std::optional<ShapeFunction>> shapes;  // empty where the window failed
  std::vector<std::string> errors;                   // error name, empty on success
  std::vector<std::optional<double>> drift;          // distance to the previous valid shape
  // Envelope divided by the taper; NaN where the taper is below kTaperReliable.
  std::vector<std::vector<double>> envelopes;

  std::size_t size() const noexcept { return centers.size(); }
  bool complete() const noexcept;
};

// Windows whose extraction fails are recorded in `errors` and skipped.
ShapeTrack extract_shape_track(const Signal& signal, const PhaseFunction& phase,
                               const WindowSpec& spec, std::optional<int> band_limit = std::nullopt);

}  // namespace shapewave
