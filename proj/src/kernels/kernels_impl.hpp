#pragma once

#include <cstddef>

namespace l2t::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void gemv_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* bias, double* out);
void gemv_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* g,
                       double* out);
void ger_scalar(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
                const double* x);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void column_moments_scalar(const double* data, std::size_t rows, std::size_t cols, double* mean,
                           double* stddev);

#if defined(L2T_HAVE_AVX2)
double dot_avx2(const double* a, const double* b, std::size_t n);
void gemv_avx2(const double* w, std::size_t rows, std::size_t cols, const double* x,
               const double* bias, double* out);
void gemv_t_acc_avx2(const double* w, std::size_t rows, std::size_t cols, const double* g,
                     double* out);
void ger_avx2(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
              const double* x);
void axpy_avx2(double a, const double* x, double* y, std::size_t n);
void column_moments_avx2(const double* data, std::size_t rows, std::size_t cols, double* mean,
                         double* stddev);
#endif

}  // namespace l2t::kernels::detail
