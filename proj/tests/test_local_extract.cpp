#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "shapewave/datasets.hpp"
#include "shapewave/local_extract.hpp"
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

PhaseFunction linear_phase(const Signal& s, int periods) {
  std::vector<double> th(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) th[i] = kTwoPi * periods * s.times()[i];
  return PhaseFunction(std::move(th));
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

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

double skewed(double tau) { return std::cos(tau + 0.5 * std::cos(2. * tau)); }

}  // namespace

TEST_CASE("taper is one at the centre and zero at the window edge") {
  for (double mu : {1., 2.5, 3., 7.}) {
    CHECK(std::abs(window_taper(0., mu) - 1.) <= 1e-12);
    CHECK(std::abs(window_taper(mu * std::numbers::pi, mu)) <= 1e-12);
    CHECK(std::abs(window_taper(-mu * std::numbers::pi, mu)) <= 1e-12);
  }
}

TEST_CASE("a midpoint window under linear phase covers mu periods") {
  const Signal s = record(4001, [](double) { return 1.; });
  const auto p = linear_phase(s, 20);
  const auto seg = window_segment(s, p, 2000, 3.);
  CHECK(seg.phase.l_theta() == 3);
  const auto mid = std::find(seg.signal.times().begin(), seg.signal.times().end(), s.times()[2000]);
  REQUIRE(mid != seg.signal.times().end());
  const auto j = static_cast<std::size_t>(mid - seg.signal.times().begin());
  CHECK(std::abs(seg.taper[j] - 1.) <= 1e-12);
  CHECK(std::abs(seg.taper.front()) <= 1e-12);
  CHECK(std::abs(seg.taper.back()) <= 1e-12);
  // constant input: the segment is the taper itself
  for (std::size_t i = 0; i < seg.taper.size(); ++i) CHECK(seg.signal.values()[i] == seg.taper[i]);
}

TEST_CASE("window_segment rejects windows shorter than two periods") {
  const Signal s = record(2048, [](double t) { return std::cos(kTwoPi * 20. * t); });
  const auto p = linear_phase(s, 20);
  CHECK(code_of([&] { window_segment(s, p, 1024, 1.); }) == ErrorCode::WindowTooShort);
  CHECK(code_of([&] { window_segment(s, p, 5, 1.5); }) == ErrorCode::WindowTooShort);
  CHECK(code_of([&] { window_segment(s, p, 1024, 0.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("a stationary signal drifts by at most 0.02") {
  const auto ex = gen_example1(4096);
  const PhaseFunction p(ex.phase);
  const auto track = extract_shape_track(ex.signal, p, WindowSpec{});
  REQUIRE(track.size() >= 8);
  CHECK(track.complete());
  for (const auto& d : track.drift)
    if (d) {
      CHECK(*d >= 0.);
      CHECK(*d <= 0.02);
    }
  const auto truth = oracle::sample(ex.shape, 1024);
  for (const auto& shape : track.shapes) CHECK(oracle::correlation(shape->sample(1024), truth) >= 0.99);
}

TEST_CASE("a morphing signal accumulates drift") {
  const int L = 40;
  const Signal s = gen_morphing_shape(8192, [](double tau) { return std::cos(tau); }, skewed, L);
  const auto p = linear_phase(s, L);
  const auto track = extract_shape_track(s, p, WindowSpec{});
  REQUIRE(track.complete());
  std::vector<double> steps;
  for (const auto& d : track.drift)
    if (d) steps.push_back(*d);
  const double total = shape_distance(*track.shapes.front(), *track.shapes.back());
  CHECK(total > 5. * median(steps));

  const ShapeFunction cosine({0., 0.5});
  CHECK(shape_distance(*track.shapes.front(), cosine) <
        shape_distance(*track.shapes.back(), cosine));
}

TEST_CASE("a full-record window agrees with the global extraction") {
  const auto ex = gen_example1(4096);
  const PhaseFunction p(ex.phase);
  WindowSpec spec;
  spec.mu = 20.;
  spec.centers = {2048};
  spec.taper = false;
  const auto track = extract_shape_track(ex.signal, p, spec);
  REQUIRE(track.complete());
  const auto global = extract_shape(ex.signal, p);
  CHECK(shape_distance(*track.shapes[0], global.shape) <= 0.02);
}

TEST_CASE("shifting the centres by one sample barely moves the shapes") {
  const auto ex = gen_example1(4096);
  const PhaseFunction p(ex.phase);
  WindowSpec a, b;
  for (std::size_t c = 700; c < 3400; c += 300) {
    a.centers.push_back(c);
    b.centers.push_back(c + 1);
  }
  const auto ta = extract_shape_track(ex.signal, p, a);
  const auto tb = extract_shape_track(ex.signal, p, b);
  REQUIRE(ta.complete());
  REQUIRE(tb.complete());
  for (std::size_t i = 0; i < ta.size(); ++i) CHECK(shape_distance(*ta.shapes[i], *tb.shapes[i]) <= 0.02);
}

TEST_CASE("tracks are bitwise reproducible") {
  const auto ex = gen_example1(2048, {0.3, 5});
  const PhaseFunction p(ex.phase);
  WindowSpec spec;
  spec.centers = {400, 800, 1200, 1600};
  const auto ta = extract_shape_track(ex.signal, p, spec);
  const auto tb = extract_shape_track(ex.signal, p, spec);
  REQUIRE(ta.size() == tb.size());
  for (std::size_t i = 0; i < ta.size(); ++i) {
    CHECK(ta.errors[i] == tb.errors[i]);
    REQUIRE(ta.shapes[i].has_value() == tb.shapes[i].has_value());
    if (!ta.shapes[i]) continue;
    const auto ca = ta.shapes[i]->coeffs();
    const auto cb = tb.shapes[i]->coeffs();
    REQUIRE(ca.size() == cb.size());
    for (std::size_t k = 0; k < ca.size(); ++k) CHECK(ca[k] == cb[k]);
    CHECK(ta.envelopes[i].size() == tb.envelopes[i].size());
  }
}

TEST_CASE("failed windows are recorded and the track continues") {
  const auto ex = gen_example1(2048);
  const PhaseFunction p(ex.phase);
  WindowSpec spec;
  spec.centers = {3, 1024, 5000};
  const auto track = extract_shape_track(ex.signal, p, spec);
  REQUIRE(track.size() == 3);
  CHECK(track.errors[0] == "WindowTooShort");
  CHECK(track.errors[1].empty());
  CHECK(track.errors[2] == "InvalidArgument");
  CHECK_FALSE(track.complete());
  CHECK(track.shapes[1].has_value());
  CHECK_FALSE(track.drift[1].has_value());
}

TEST_CASE("the de-biased envelope recovers the generating envelope near the centre") {
  const auto ex = gen_example1(4096);
  const PhaseFunction p(ex.phase);
  WindowSpec spec;
  spec.centers = {2048};
  const auto track = extract_shape_track(ex.signal, p, spec);
  REQUIRE(track.complete());
  const auto seg = window_segment(ex.signal, p, 2048, spec.mu);
  const auto& env = track.envelopes[0];
  // the fitted envelope is only defined up to the shape's peak scale
  const std::size_t mid = 2048 - seg.first;
  const double ratio = env[mid] / ex.envelope[2048];
  for (std::size_t j = 0; j < env.size(); ++j) {
    if (std::isnan(env[j])) {
      CHECK(seg.taper[j] <= kTaperReliable);
      continue;
    }
    if (seg.taper[j] < 0.5) continue;
    CHECK(std::abs(env[j] / ex.envelope[seg.first + j] / ratio - 1.) <= 0.05);
  }
}
