#include "shapewave/datasets.hpp"

#include <gsl/gsl_randist.h>
#include <gsl/gsl_rng.h>

#include <array>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>

#include "shapewave/duffing.hpp"

namespace shapewave {

void add_gaussian_noise(std::vector<double>& values, const NoiseSpec& noise) {
  if (noise.sigma < 0.) throw Error(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
  if (noise.sigma == 0.) return;
  std::unique_ptr<gsl_rng, decltype(&gsl_rng_free)> rng(gsl_rng_alloc(gsl_rng_mt19937),
                                                        &gsl_rng_free);
  gsl_rng_set(rng.get(), static_cast<unsigned long>(noise.seed));
  for (double& v : values) v += gsl_ran_gaussian_ziggurat(rng.get(), noise.sigma);
}

double example1_shape(double tau) noexcept { return 1. / (1.1 + std::cos(tau + std::cos(2. * tau))); }

Example1 gen_example1(std::size_t samples, const NoiseSpec& noise) {
  if (samples < 512)
    throw Error(ErrorCode::TooShort, "example 1 needs at least 512 samples");
  std::vector<double> t(samples), theta(samples), a(samples), f(samples);
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = static_cast<double>(i) / last;
    theta[i] = 40. * std::numbers::pi * t[i] + 2. * std::cos(6. * std::numbers::pi * t[i]);
    a[i] = 1. / (2. + std::sin(2. * std::numbers::pi * t[i]));
    f[i] = a[i] * example1_shape(theta[i]);
  }
  add_gaussian_noise(f, noise);
  return Example1{Signal(std::move(t), std::move(f)), std::move(theta), std::move(a),
                  &example1_shape};
}

namespace detail {

DuffingTrajectory integrate_duffing(const DuffingParams& p) {
  if (!(p.dt > 0.) || !(p.t_span > 0.))
    throw Error(ErrorCode::InvalidArgument, "Duffing dt and t_span must be positive");
  if (p.t_span / p.dt < 1000.)
    throw Error(ErrorCode::InvalidArgument, "Duffing needs t_span / dt >= 1000");
  if (p.samples < 2) throw Error(ErrorCode::InvalidArgument, "Duffing needs at least two samples");

  using State = std::array<double, 2>;
  const auto rhs = [&p](const State& x, State& dxdt, double t) {
    const double u = x[0];
    const double nonlinear = std::copysign(std::pow(std::abs(u), 1. + p.omega_exponent), u);
    dxdt[0] = x[1];
    dxdt[1] = -u - p.epsilon * nonlinear + p.gamma * std::cos(p.beta * t);
  };

  boost::numeric::odeint::runge_kutta4<State> stepper;
  const double interval = p.t_span / static_cast<double>(p.samples - 1);
  const auto substeps = static_cast<std::size_t>(std::ceil(interval / p.dt - 1e-9));
  const double h = interval / static_cast<double>(substeps);

  DuffingTrajectory out;
  out.times.resize(p.samples);
  out.u.resize(p.samples);
  out.v.resize(p.samples);
  State x{p.u0, p.v0};
  for (std::size_t i = 0; i < p.samples; ++i) {
    const double t0 = interval * static_cast<double>(i);
    out.times[i] = t0;
    out.u[i] = x[0];
    out.v[i] = x[1];
    if (i + 1 == p.samples) break;
    for (std::size_t s = 0; s < substeps; ++s) {
      stepper.do_step(rhs, x, t0 + h * static_cast<double>(s), h);
      if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > 1e6)
        throw Error(ErrorCode::NonFiniteState,
                    "trajectory escapes near t = " +
                        std::to_string(t0 + h * static_cast<double>(s + 1)));
    }
  }
  return out;
}

}  // namespace detail

Signal gen_duffing(const DuffingParams& params, const NoiseSpec& noise) {
  auto traj = detail::integrate_duffing(params);
  add_gaussian_noise(traj.u, noise);
  return Signal(std::move(traj.times), std::move(traj.u));
}

Signal gen_morphing_shape(std::size_t samples, const ShapeEvaluator& shape_a,
                          const ShapeEvaluator& shape_b, int l_theta) {
  if (samples < kMinSamples) throw Error(ErrorCode::TooShort, "morphing fixture needs more samples");
  std::vector<double> t(samples), f(samples);
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    t[i] = static_cast<double>(i) / last;
    const double theta = 2. * std::numbers::pi * l_theta * t[i];
    f[i] = (1. - t[i]) * shape_a(theta) + t[i] * shape_b(theta);
  }
  return Signal(std::move(t), std::move(f));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

// Two numeric columns after an optional header row.
std::array<std::vector<double>, 2> read_two_columns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::array<std::vector<double>, 2> cols;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(line_no) + ": expected two columns", line_no);
    }
    double x = 0.;
    double y = 0.;
    const bool ok = parse_number(row.substr(0, comma), x) && parse_number(row.substr(comma + 1), y);
    if (!ok) {
      if (first) {  // header
        first = false;
        continue;
      }
      throw Error(ErrorCode::ParseError,
                  path.string() + ":" + std::to_string(line_no) + ": non-numeric cell", line_no);
    }
    first = false;
    cols[0].push_back(x);
    cols[1].push_back(y);
  }
  return cols;
}

}  // namespace

Signal load_signal_csv(const std::filesystem::path& path) {
  auto cols = read_two_columns(path);
  return validate_signal(std::move(cols[0]), std::move(cols[1]));
}

PhaseSamples load_phase_csv(const std::filesystem::path& path) {
  auto cols = read_two_columns(path);
  return PhaseSamples{std::move(cols[0]), std::move(cols[1])};
}

}  // namespace shapewave
