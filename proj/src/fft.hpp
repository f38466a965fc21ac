#pragma once

#include <complex>
#include <span>
#include <vector>

namespace shapewave::detail {

enum class Direction { forward, inverse };

// Unnormalized DFT of any length: out_m = sum_j in_j e^{-+2 pi i m j / n}.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in, Direction dir);

}  // namespace shapewave::detail
