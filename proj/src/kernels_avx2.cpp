// AVX2 variants of the arithmetic kernels. This translation unit is compiled
// with -mavx2 -mfma; nothing here runs unless the dispatcher verified CPU
// support at runtime.

#include "screenal/kernels.hpp"

#if defined(SCREENAL_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))

#include <immintrin.h>

namespace screenal::kernels::detail {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double out = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

double squared_norm_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
    acc1 = _mm256_fmadd_pd(b, b, acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(a, a, acc0);
  }
  double out = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) out += x[i] * x[i];
  return out;
}

void scale_avx2(double* x, std::size_t n, double a) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  }
  for (; i < n; ++i) x[i] *= a;
}

double sparse_dot_avx2(const std::uint32_t* idx, const double* val, std::size_t n,
                       const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d g = _mm256_i32gather_pd(y, vi, 8);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + i), g, acc);
  }
  double out = hsum(acc);
  for (; i < n; ++i) out += val[i] * y[idx[i]];
  return out;
}

void sparse_axpy_avx2(double a, const std::uint32_t* idx, const double* val, std::size_t n,
                      double* y) {
  const __m256d va = _mm256_set1_pd(a);
  alignas(32) double tmp[4];
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
    const __m256d g = _mm256_i32gather_pd(y, vi, 8);
    _mm256_store_pd(tmp, _mm256_fmadd_pd(va, _mm256_loadu_pd(val + i), g));
    // No scatter in AVX2; indices are distinct so plain stores are safe.
    y[idx[i]] = tmp[0];
    y[idx[i + 1]] = tmp[1];
    y[idx[i + 2]] = tmp[2];
    y[idx[i + 3]] = tmp[3];
  }
  for (; i < n; ++i) y[idx[i]] += a * val[i];
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops{dot_avx2, squared_norm_avx2, scale_avx2, sparse_dot_avx2,
                       sparse_axpy_avx2};
  return &ops;
}

}  // namespace screenal::kernels::detail

#else

namespace screenal::kernels::detail {

const Ops* avx2_ops() { return nullptr; }

}  // namespace screenal::kernels::detail

#endif
