#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shapewave/datasets.hpp"
#include "shapewave/phase_estimate.hpp"
#include "shapewave/shape_extract.hpp"

using namespace shapewave;

namespace {

constexpr double kTwoPi = 2. * std::numbers::pi;

Signal record(std::size_t samples, auto&& fn) {
  std::vector<double> t(samples), f(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
    f[i] = fn(t[i]);
  }
  return Signal(std::move(t), std::move(f));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

// max |a_i - b_i - c| over [lo, hi) with c the mean offset there
double max_offset_error(std::span<const double> a, std::span<const double> b, std::size_t lo,
                        std::size_t hi) {
  double mean = 0.;
  for (std::size_t i = lo; i < hi; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(hi - lo);
  double worst = 0.;
  for (std::size_t i = lo; i < hi; ++i) worst = std::max(worst, std::abs(a[i] - b[i] - mean));
  return worst;
}

}  // namespace

TEST_CASE("a pure tone has a constant instantaneous frequency") {
  const std::size_t N = 2048;
  const Signal s = record(N, [](double t) { return std::cos(kTwoPi * 20. * t); });
  const auto p = estimate_phase(s);
  CHECK(p.l_theta() == 20);
  const auto th = p.phases();
  const auto t = s.times();
  for (std::size_t i = N / 20; i + 1 < N - N / 20; ++i) {
    const double rate = (th[i + 1] - th[i - 1]) / (t[i + 1] - t[i - 1]) / kTwoPi;
    CHECK(std::abs(rate - 20.) <= 0.2);
  }
}

TEST_CASE("pure tones recover their period count exactly") {
  for (int f = 8; f <= 64; ++f) {
    const Signal s = record(2048, [f](double t) { return std::cos(kTwoPi * f * t); });
    CHECK(estimate_phase(s).l_theta() == f);
  }
}

TEST_CASE("example 1 phase is recovered in the interior") {
  const auto ex = gen_example1(4096);
  const auto p = estimate_phase(ex.signal);
  CHECK(p.l_theta() == 20);
  const std::size_t N = ex.signal.size();
  CHECK(max_offset_error(p.phases(), ex.phase, N / 10, N - N / 10) <= 0.35);

  const auto res = extract_shape(ex.signal, p);
  CHECK(oracle::aligned_correlation(res.shape.sample(1024), oracle::sample(ex.shape, 1024)) >= 0.95);
}

TEST_CASE("white noise has no fundamental") {
  std::vector<double> v(4096, 0.);
  add_gaussian_noise(v, {1., 2024});
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const Signal s(std::move(t), std::move(v));
  CHECK(code_of([&] { estimate_phase(s); }) == ErrorCode::AmbiguousFundamental);
}

TEST_CASE("delaying the signal shifts the phase by a constant") {
  const auto ex = gen_example1(4096);
  const std::size_t N = ex.signal.size(), shift = 9;
  const auto v = ex.signal.values();
  const auto t = ex.signal.times();
  // f(t) and f(t - shift samples) on the same time axis
  const Signal a(std::vector<double>(t.begin(), t.end() - shift),
                 std::vector<double>(v.begin() + shift, v.end()));
  const Signal b(std::vector<double>(t.begin(), t.end() - shift),
                 std::vector<double>(v.begin(), v.end() - shift));
  const auto pa = estimate_raw_phase(a);
  const auto pb = estimate_raw_phase(b);
  const std::size_t M = N - shift;
  // compare the two estimates at the same underlying sample
  std::vector<double> ea(pa.begin(), pa.end() - shift), eb(pb.begin() + shift, pb.end());
  const std::size_t K = ea.size();
  CHECK(max_offset_error(ea, eb, K / 10, K - K / 10) <= 0.05);
  CHECK(M == pa.size());
}

TEST_CASE("exact phases are validated") {
  const auto ex = gen_example1(1024);
  CHECK(exact_phase_from_samples(ex.signal, ex.phase).l_theta() == 20);
  auto reversed = ex.phase;
  std::reverse(reversed.begin(), reversed.end());
  CHECK(code_of([&] { exact_phase_from_samples(ex.signal, reversed); }) ==
        ErrorCode::NonMonotonePhase);
  // 21 periods stretched to 31.5
  std::vector<double> stretched(ex.phase.size());
  for (std::size_t i = 0; i < stretched.size(); ++i) stretched[i] = 1.5 * kTwoPi * 21. * ex.signal.times()[i];
  CHECK(code_of([&] { exact_phase_from_samples(ex.signal, stretched); }) ==
        ErrorCode::NotNearIntegerPeriods);
  CHECK(code_of([&] { exact_phase_from_samples(ex.signal, std::vector<double>(10, 0.)); }) ==
        ErrorCode::MismatchedLengths);
}

TEST_CASE("configuration limits are enforced") {
  const Signal s = record(1024, [](double t) { return std::cos(kTwoPi * 20. * t); });
  PhaseEstimateConfig c;
  c.bandwidth = 1.;
  CHECK(code_of([&] { estimate_phase(s, c); }) == ErrorCode::InvalidArgument);
  c = {};
  c.smoothing_cutoff = 0.7;
  CHECK(code_of([&] { estimate_phase(s, c); }) == ErrorCode::InvalidArgument);
  c = {};
  c.fundamental_hint = 20.;
  CHECK(estimate_phase(s, c).l_theta() == 20);
}

TEST_CASE("trimming keeps a whole number of periods") {
  const Signal s = record(2000, [](double t) { return std::cos(kTwoPi * 10.5 * t); });
  std::vector<double> th(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) th[i] = kTwoPi * 10.5 * s.times()[i];
  const auto [seg, phase] = trim_to_whole_periods(s, th);
  CHECK(phase.l_theta() == 10);
  CHECK(std::abs(phase.span() / kTwoPi - 10.) <= 0.01);
  CHECK(seg.size() < s.size());
  CHECK(seg.times().front() == s.times().front());
}
