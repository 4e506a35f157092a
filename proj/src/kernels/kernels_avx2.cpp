// Compiled with -mavx2 -mfma. Only reached after a CPUID check.
#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cmath>

namespace l2t::kernels::detail {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void gemv_avx2(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double s = dot_avx2(w + r * cols, x, cols);
        out[r] = bias ? s + bias[r] : s;
    }
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void gemv_t_acc_avx2(const double* w, std::size_t rows, std::size_t cols, const double* g,
                     double* out) {
    for (std::size_t r = 0; r < rows; ++r) axpy_avx2(g[r], w + r * cols, out, cols);
}

void ger_avx2(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
              const double* x) {
    for (std::size_t r = 0; r < rows; ++r) axpy_avx2(g[r], x, g_mat + r * cols, cols);
}

void column_moments_avx2(const double* data, std::size_t rows, std::size_t cols, double* mean,
                         double* stddev) {
    for (std::size_t c = 0; c < cols; ++c) {
        mean[c] = 0.0;
        stddev[c] = 0.0;
    }
    if (rows == 0) return;
    const double inv = 1.0 / static_cast<double>(rows);
    const __m256d vinv = _mm256_set1_pd(inv);
    std::size_t c = 0;
    for (; c + 4 <= cols; c += 4) {
        __m256d s = _mm256_setzero_pd();
        for (std::size_t r = 0; r < rows; ++r) s = _mm256_add_pd(s, _mm256_loadu_pd(data + r * cols + c));
        const __m256d m = _mm256_mul_pd(s, vinv);
        __m256d q = _mm256_setzero_pd();
        for (std::size_t r = 0; r < rows; ++r) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(data + r * cols + c), m);
            q = _mm256_fmadd_pd(d, d, q);
        }
        _mm256_storeu_pd(mean + c, m);
        _mm256_storeu_pd(stddev + c, _mm256_sqrt_pd(_mm256_mul_pd(q, vinv)));
    }
    for (; c < cols; ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < rows; ++r) s += data[r * cols + c];
        const double m = s * inv;
        double q = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double d = data[r * cols + c] - m;
            q += d * d;
        }
        mean[c] = m;
        stddev[c] = std::sqrt(q * inv);
    }
}

}  // namespace l2t::kernels::detail
