#pragma once

// Band matrix assembly, rank-1 fitting, and the full single-window shape
// extraction pipeline.

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "shapewave/signal.hpp"
#include "shapewave/theta_transform.hpp"

namespace shapewave {

inline constexpr int kMaxDefaultBandLimit = 20;

// n x (2K+1), columns [Re g_0, Re g_1 .. Re g_K, Im g_1 .. Im g_K].
struct BandMatrix {
  Eigen::MatrixXd entries;
  int band_limit = 0;
};

BandMatrix assemble_band_matrix(std::span<const DemodulatedBand> bands);

struct Rank1Fit {
  Eigen::VectorXd left;   // unit, length n
  Eigen::VectorXd right;  // unit, length 2K+1
  double sigma1 = 0.;
  std::vector<double> singular_values;  // descending
  double objective = 0.;                // ||F - sigma1 u v^T||_F^2
};

Rank1Fit rank_one_fit(const BandMatrix& matrix);

// Right singular vector (Re c_0..Re c_K, Im c_1..Im c_K) as complex c_0..c_K.
std::vector<cplx> coefficients_from_right(const Eigen::VectorXd& right, int band_limit);

// min(20, floor((n/2 - ceil(L/2)) / L)).
int default_band_limit(std::size_t grid_size, int l_theta) noexcept;

struct ExtractOptions {
  std::optional<int> band_limit;
  std::optional<std::size_t> grid_size;
  bool zero_dc = false;  // drop band 0 before fitting, forcing c_0 = 0
};

// Shape coefficients in the result are expressed in absolute phase, so the
// model is f(t) ~ envelope(t) * shape(theta(t)).
ExtractionResult extract_shape(const Signal& signal, const PhaseFunction& phase,
                               const ExtractOptions& options = {});

// Relative L2 distance between two shape functions, minimized over circular
// shifts and sign of the second. Symmetric; zero iff the shapes agree up to
// rotation and sign.
double shape_distance(const ShapeFunction& a, const ShapeFunction& b);

}  // namespace shapewave
