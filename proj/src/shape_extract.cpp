#include "shapewave/shape_extract.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace shapewave {

BandMatrix assemble_band_matrix(std::span<const DemodulatedBand> bands) {
  if (bands.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "need bands 0..K with K >= 1");
  const auto rows = static_cast<Eigen::Index>(bands.front().values.size());
  const int K = static_cast<int>(bands.size()) - 1;
  for (std::size_t k = 0; k < bands.size(); ++k) {
    if (static_cast<Eigen::Index>(bands[k].values.size()) != rows)
      throw Error(ErrorCode::MismatchedLengths,
                  "band " + std::to_string(k) + " has " + std::to_string(bands[k].values.size()) +
                      " samples, band 0 has " + std::to_string(rows));
    if (bands[k].k != static_cast<int>(k))
      throw Error(ErrorCode::InvalidArgument, "bands must be ordered k = 0..K");
  }

  BandMatrix out;
  out.band_limit = K;
  out.entries.resize(rows, 2 * K + 1);
  for (Eigen::Index j = 0; j < rows; ++j) {
    out.entries(j, 0) = bands[0].values[static_cast<std::size_t>(j)].real();
    for (int k = 1; k <= K; ++k) {
      const cplx g = bands[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(j)];
      out.entries(j, k) = g.real();
      out.entries(j, K + k) = g.imag();
    }
  }
  if (!out.entries.allFinite())
    throw Error(ErrorCode::NonFiniteValue, "band matrix has non-finite entries");
  return out;
}

Rank1Fit rank_one_fit(const BandMatrix& matrix) {
  const Eigen::MatrixXd& F = matrix.entries;
  if (F.size() == 0 || F.norm() == 0.)
    throw Error(ErrorCode::DegenerateInput, "band matrix is zero");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!sv.allFinite() || !svd.matrixU().allFinite() || !svd.matrixV().allFinite())
    throw Error(ErrorCode::NonConvergence, "SVD produced non-finite factors");

  Rank1Fit fit;
  fit.sigma1 = sv(0);
  fit.left = svd.matrixU().col(0);
  fit.right = svd.matrixV().col(0);
  fit.singular_values.assign(sv.data(), sv.data() + sv.size());
  fit.objective = (F - fit.sigma1 * fit.left * fit.right.transpose()).squaredNorm();
  return fit;
}

std::vector<cplx> coefficients_from_right(const Eigen::VectorXd& right, int band_limit) {
  if (right.size() != 2 * band_limit + 1)
    throw Error(ErrorCode::MismatchedLengths, "right factor length does not match 2K+1");
  std::vector<cplx> c(static_cast<std::size_t>(band_limit) + 1);
  c[0] = right(0);
  for (int k = 1; k <= band_limit; ++k) c[static_cast<std::size_t>(k)] = {right(k), right(band_limit + k)};
  return c;
}

int default_band_limit(std::size_t grid_size, int l_theta) noexcept {
  if (l_theta < 1) return 0;
  const int half = static_cast<int>(grid_size / 2);
  const int feasible = (half - (l_theta + 1) / 2) / l_theta;
  return std::clamp(feasible, 0, kMaxDefaultBandLimit);
}

ExtractionResult extract_shape(const Signal& signal, const PhaseFunction& phase,
                               const ExtractOptions& options) {
  if (phase.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase and signal lengths differ");
  const int L = phase.l_theta();
  const std::size_t n = options.grid_size.value_or(default_grid_size(signal.size(), L));
  const int K = options.band_limit.value_or(default_band_limit(n, L));
  if (K < 1)
    throw Error(options.band_limit ? ErrorCode::InvalidArgument : ErrorCode::BandExceedsNyquist,
                "band limit must be at least 1 (grid of " + std::to_string(n) +
                    " points cannot hold harmonic 1 of l_theta = " + std::to_string(L) + ")");
  band_indices(K, L, n);  // Nyquist feasibility before any work

  const PhaseDomainSignal pds = resample_to_phase(signal, phase, n);
  std::vector<DemodulatedBand> bands;
  bands.reserve(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k)
    bands.push_back(extract_demodulated_band(pds, k, EdgeBin::drop_unpaired));

  BandMatrix F = assemble_band_matrix(bands);
  if (options.zero_dc) F.entries.col(0).setZero();
  const Rank1Fit fit = rank_one_fit(F);

  const auto c_raw = coefficients_from_right(fit.right, K);
  auto factors = normalize_rank1_factors(
      std::span<const double>(fit.left.data(), static_cast<std::size_t>(fit.left.size())), c_raw,
      fit.sigma1);

  ExtractionResult out;
  out.l_theta = L;
  out.grid_size = n;
  // the fit lives in theta - theta_0; move it to absolute phase
  out.shape = factors.shape.rotated(-phase.phase_origin());
  out.envelope.values_phase = std::move(factors.envelope);
  out.envelope.values_time = interp_phase_to_time(out.envelope.values_phase, phase);

  const auto f = signal.values();
  const auto theta = phase.phases();
  out.residual.resize(f.size());
  for (std::size_t l = 0; l < f.size(); ++l)
    out.residual[l] = f[l] - out.envelope.values_time[l] * out.shape(theta[l]);

  double total = 0.;
  for (double s : fit.singular_values) total += s * s;
  out.fit.singular_values = fit.singular_values;
  out.fit.rank1_energy_fraction = total > 0. ? fit.sigma1 * fit.sigma1 / total : 0.;
  out.fit.objective_value = fit.objective;
  return out;
}

namespace {

constexpr std::size_t kOffsetGrid = 512;

double squared_norm(std::span<const cplx> c) {
  double acc = 0.;
  for (std::size_t k = 0; k < c.size(); ++k) acc += (k == 0 ? 1. : 2.) * std::norm(c[k]);
  return acc;
}

// Mean-square of a(tau) - sign * b(tau + offset) over one period.
double offset_error(std::span<const cplx> a, std::span<const cplx> b, double sign, double offset) {
  const std::size_t len = std::max(a.size(), b.size());
  double acc = 0.;
  for (std::size_t k = 0; k < len; ++k) {
    const cplx ca = k < a.size() ? a[k] : cplx{};
    const cplx cb = k < b.size() ? b[k] * std::polar(1., static_cast<double>(k) * offset) : cplx{};
    acc += (k == 0 ? 1. : 2.) * std::norm(ca - sign * cb);
  }
  return acc;
}

}  // namespace

double shape_distance(const ShapeFunction& a, const ShapeFunction& b) {
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  const double scale = 0.5 * (squared_norm(ca) + squared_norm(cb));
  if (scale == 0.) return 0.;

  const double step = 2. * std::numbers::pi / static_cast<double>(kOffsetGrid);
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1., -1.}) {
    std::vector<double> err(kOffsetGrid);
    for (std::size_t i = 0; i < kOffsetGrid; ++i)
      err[i] = offset_error(ca, cb, sign, step * static_cast<double>(i));
    for (std::size_t i = 0; i < kOffsetGrid; ++i) {
      best = std::min(best, err[i]);
      const double prev = err[(i + kOffsetGrid - 1) % kOffsetGrid];
      const double next = err[(i + 1) % kOffsetGrid];
      if (err[i] > prev || err[i] > next) continue;
      // polish every grid-local minimum between its neighbours
      const double centre = step * static_cast<double>(i);
      const auto refined = boost::math::tools::brent_find_minima(
          [&](double off) { return offset_error(ca, cb, sign, off); }, centre - step, centre + step,
          std::numeric_limits<double>::digits);
      best = std::min(best, refined.second);
    }
  }
  return std::sqrt(std::max(0., best) / scale);
}

}  // namespace shapewave
