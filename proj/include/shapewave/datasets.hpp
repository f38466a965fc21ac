#pragma once

// Deterministic signal generators and CSV ingestion.
//
// Noise streams come from GSL's MT19937 generator seeded with the 64-bit seed
// and standard normals drawn with the Marsaglia-Tsang ziggurat
// (gsl_ran_gaussian_ziggurat). Ports that cannot reproduce that pair should
// substitute another named algorithm and compare statistics only.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "shapewave/signal.hpp"

namespace shapewave {

using ShapeEvaluator = std::function<double(double)>;

struct NoiseSpec {
  double sigma = 0.;
  std::uint64_t seed = 0;
};

// Adds sigma * N(0,1) draws to `values` in place. sigma == 0 leaves the input untouched.
void add_gaussian_noise(std::vector<double>& values, const NoiseSpec& noise);

struct Example1 {
  Signal signal;
  std::vector<double> phase;
  std::vector<double> envelope;
  ShapeEvaluator shape;  // 1 / (1.1 + cos(tau + cos 2 tau))
};

// theta = 40 pi t + 2 cos(6 pi t), a = 1 / (2 + sin 2 pi t), f = a s(theta) on
// a uniform grid over [0, 1].
Example1 gen_example1(std::size_t samples, const NoiseSpec& noise = {});

double example1_shape(double tau) noexcept;

struct DuffingParams {
  double epsilon = -1.;
  double gamma = 0.1;
  double beta = 1. / 25.;
  double omega_exponent = 2.;  // nonlinearity is sign(u) |u|^(1 + omega)
  double u0 = 1.;
  double v0 = 1.;
  double t_span = 400.;
  double dt = 0.01;
  std::size_t samples = 8192;  // output points on [0, t_span]
};

// u'' + u + eps sign(u)|u|^(1+omega) = gamma cos(beta t), classical RK4 with
// steps no longer than dt. Throws NonFiniteState if the trajectory escapes.
Signal gen_duffing(const DuffingParams& params, const NoiseSpec& noise = {});

// f(t) = (1 - t) a(theta) + t b(theta), theta = 2 pi L t on a uniform grid over [0, 1].
Signal gen_morphing_shape(std::size_t samples, const ShapeEvaluator& shape_a,
                          const ShapeEvaluator& shape_b, int l_theta);

// Header row `t,f` (or `t,theta`), LF or CRLF line endings.
Signal load_signal_csv(const std::filesystem::path& path);

struct PhaseSamples {
  std::vector<double> times;
  std::vector<double> phases;
};

PhaseSamples load_phase_csv(const std::filesystem::path& path);

}  // namespace shapewave
