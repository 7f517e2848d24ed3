#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace rfsense::kernels::detail {
namespace {

void affine_scalar(const double* a, const double* b, const double* x, double* out,
                   std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    double acc = b[r];
    for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
    out[r] = acc;
  }
}

double log_sum_exp_scalar(const double* z, double* w, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const double zmax = *std::max_element(z, z + n);
  if (!std::isfinite(zmax)) {
    if (w != nullptr) {
      for (std::size_t i = 0; i < n; ++i) w[i] = (z[i] == zmax) ? 1.0 : 0.0;
    }
    return zmax;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::exp(z[i] - zmax);
    if (w != nullptr) w[i] = e;
    sum += e;
  }
  if (w != nullptr) {
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < n; ++i) w[i] *= inv;
  }
  return zmax + std::log(sum);
}

void weighted_column_sum_scalar(const double* a, const double* w, double* out,
                                std::size_t rows, std::size_t cols) {
  std::fill(out, out + cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    for (std::size_t c = 0; c < cols; ++c) out[c] += w[r] * row[c];
  }
}

std::complex<double> dot_conj_scalar(const std::complex<double>* x,
                                     const std::complex<double>* y, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable kScalarTable = {
    "scalar", affine_scalar, log_sum_exp_scalar, weighted_column_sum_scalar,
    dot_conj_scalar,
};

}  // namespace rfsense::kernels::detail
