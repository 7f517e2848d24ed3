// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma
// and is only reached through the runtime dispatcher.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_internal.hpp"

namespace rfsense::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

// exp(x) by Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2, and a degree-13
// Taylor polynomial for exp(r). Inputs below -708 flush to zero.
inline __m256d exp_pd(__m256d x) {
  const __m256d kHi = _mm256_set1_pd(709.0);
  const __m256d kLo = _mm256_set1_pd(-708.0);
  const __m256d kLog2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);

  const __m256d underflow = _mm256_cmp_pd(x, kLo, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, kLo), kHi);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, kLog2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, kLn2Hi, x);
  r = _mm256_fnmadd_pd(n, kLn2Lo, r);

  static constexpr double kInvFact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
      1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
      1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        1.0 / 2.0,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(kInvFact[0]);
  for (std::size_t i = 1; i < std::size(kInvFact); ++i) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kInvFact[i]));
  }

  const __m256i n64 = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(n));
  const __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

void affine_avx2(const double* a, const double* b, const double* x, double* out,
                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    __m256d acc = _mm256_setzero_pd();
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
    }
    double sum = b[r] + hsum(acc);
    for (; c < cols; ++c) sum += row[c] * x[c];
    out[r] = sum;
  }
}

double log_sum_exp_avx2(const double* z, double* w, std::size_t n) {
  if (n == 0) return -std::numeric_limits<double>::infinity();

  std::size_t i = 0;
  double zmax = -std::numeric_limits<double>::infinity();
  if (n >= 4) {
    __m256d vmax = _mm256_loadu_pd(z);
    for (i = 4; i + 4 <= n; i += 4) vmax = _mm256_max_pd(vmax, _mm256_loadu_pd(z + i));
    zmax = hmax(vmax);
  } else {
    i = 0;
  }
  for (; i < n; ++i) zmax = std::max(zmax, z[i]);

  if (!std::isfinite(zmax)) return kScalarTable.log_sum_exp(z, w, n);

  const __m256d shift = _mm256_set1_pd(zmax);
  __m256d acc = _mm256_setzero_pd();
  for (i = 0; i + 4 <= n; i += 4) {
    const __m256d e = exp_pd(_mm256_sub_pd(_mm256_loadu_pd(z + i), shift));
    if (w != nullptr) _mm256_storeu_pd(w + i, e);
    acc = _mm256_add_pd(acc, e);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double e = std::exp(z[i] - zmax);
    if (w != nullptr) w[i] = e;
    sum += e;
  }

  if (w != nullptr) {
    const __m256d inv = _mm256_set1_pd(1.0 / sum);
    for (i = 0; i + 4 <= n; i += 4) {
      _mm256_storeu_pd(w + i, _mm256_mul_pd(_mm256_loadu_pd(w + i), inv));
    }
    for (; i < n; ++i) w[i] /= sum;
  }
  return zmax + std::log(sum);
}

void weighted_column_sum_avx2(const double* a, const double* w, double* out,
                              std::size_t rows, std::size_t cols) {
  std::fill(out, out + cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = a + r * cols;
    const __m256d wr = _mm256_set1_pd(w[r]);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
      _mm256_storeu_pd(out + c,
                       _mm256_fmadd_pd(wr, _mm256_loadu_pd(row + c), _mm256_loadu_pd(out + c)));
    }
    for (; c < cols; ++c) out[c] += w[r] * row[c];
  }
}

// Interleaved layout: [re0, im0, re1, im1]. conj(x) * y has real part
// xr*yr + xi*yi and imaginary part xr*yi - xi*yr.
std::complex<double> dot_conj_avx2(const std::complex<double>* x,
                                   const std::complex<double>* y, std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d same = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    same = _mm256_fmadd_pd(xv, yv, same);
    cross = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), cross);
  }
  alignas(32) double s[4];
  alignas(32) double c[4];
  _mm256_store_pd(s, same);
  _mm256_store_pd(c, cross);
  double re = (s[0] + s[1]) + (s[2] + s[3]);
  double im = (c[0] - c[1]) + (c[2] - c[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

}  // namespace

const KernelTable kAvx2Table = {
    "avx2", affine_avx2, log_sum_exp_avx2, weighted_column_sum_avx2, dot_conj_avx2,
};

}  // namespace rfsense::kernels::detail
