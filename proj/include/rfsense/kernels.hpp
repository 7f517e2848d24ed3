#pragma once

// Data-parallel inner loops used by the log-space solver and the
// posynomial evaluators. Every kernel has a portable scalar reference
// implementation; an AVX2+FMA variant is compiled on x86-64 and selected at
// runtime when the CPU supports it. Setting RFSENSE_KERNELS=scalar in the
// environment forces the reference path.

#include <complex>
#include <cstddef>
#include <span>

namespace rfsense::kernels {

struct KernelTable {
  const char* name;

  // out[r] = b[r] + sum_c a[r * cols + c] * x[c]   (a is row-major)
  void (*affine)(const double* a, const double* b, const double* x, double* out,
                 std::size_t rows, std::size_t cols);

  // Returns log(sum_i exp(z[i])). When w is non-null it receives the softmax
  // weights exp(z[i] - result). n == 0 yields -inf.
  double (*log_sum_exp)(const double* z, double* w, std::size_t n);

  // out[c] = sum_r w[r] * a[r * cols + c]
  void (*weighted_column_sum)(const double* a, const double* w, double* out,
                              std::size_t rows, std::size_t cols);

  // sum_i conj(x[i]) * y[i]
  std::complex<double> (*dot_conj)(const std::complex<double>* x,
                                   const std::complex<double>* y, std::size_t n);
};

const KernelTable& scalar();

// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2();

// The table chosen for this process (resolved once).
const KernelTable& active();

inline void affine(std::span<const double> a, std::span<const double> b,
                   std::span<const double> x, std::span<double> out) {
  active().affine(a.data(), b.data(), x.data(), out.data(), out.size(), x.size());
}

inline double log_sum_exp(std::span<const double> z) {
  return active().log_sum_exp(z.data(), nullptr, z.size());
}

inline double log_sum_exp(std::span<const double> z, std::span<double> weights) {
  return active().log_sum_exp(z.data(), weights.data(), z.size());
}

inline void weighted_column_sum(std::span<const double> a, std::span<const double> w,
                                std::span<double> out) {
  active().weighted_column_sum(a.data(), w.data(), out.data(), w.size(), out.size());
}

inline std::complex<double> dot_conj(std::span<const std::complex<double>> x,
                                     std::span<const std::complex<double>> y) {
  return active().dot_conj(x.data(), y.data(), x.size());
}

}  // namespace rfsense::kernels
