#pragma once

// Phase functions for extraction: validated user-supplied samples, or a
// fundamental-band analytic-signal estimate.
//
// The estimator isolates the spectral band around the fundamental, forms the
// one-sided (analytic) signal, unwraps its angle, and keeps only the part of
// the deviation from the end-to-end linear trend below lambda * L cycles per
// record. It is a lightweight stand-in for a full adaptive time-frequency
// phase solver; its accuracy claims hold away from the record ends.

#include <optional>
#include <utility>
#include <vector>

#include "shapewave/signal.hpp"

namespace shapewave {

struct PhaseEstimateConfig {
  std::optional<double> fundamental_hint;  // cycles over the record
  double bandwidth = 0.5;                  // half-width of the band, fraction of the fundamental
  double smoothing_cutoff = 0.5;           // lambda
};

// Raw estimate aligned with signal.times(); may span a non-integer number of
// periods. Throws AmbiguousFundamental or NonMonotoneEstimate.
std::vector<double> estimate_raw_phase(const Signal& signal, const PhaseEstimateConfig& config = {});

// estimate_raw_phase followed by PhaseFunction validation.
PhaseFunction estimate_phase(const Signal& signal, const PhaseEstimateConfig& config = {});

PhaseFunction exact_phase_from_samples(const Signal& signal, std::vector<double> phases);

// Drops trailing samples so the remaining record spans the closest whole
// number of periods. Throws TooFewPeriods if fewer than kMinPeriods remain.
std::pair<Signal, PhaseFunction> trim_to_whole_periods(const Signal& signal,
                                                       std::vector<double> phases);

}  // namespace shapewave
