#include "kernels_impl.hpp"

#include <cmath>

namespace l2t::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void gemv_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* bias, double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double s = dot_scalar(w + r * cols, x, cols);
        out[r] = bias ? s + bias[r] : s;
    }
}

void gemv_t_acc_scalar(const double* w, std::size_t rows, std::size_t cols, const double* g,
                       double* out) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double gr = g[r];
        const double* wr = w + r * cols;
        for (std::size_t c = 0; c < cols; ++c) out[c] += gr * wr[c];
    }
}

void ger_scalar(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
                const double* x) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double gr = g[r];
        double* row = g_mat + r * cols;
        for (std::size_t c = 0; c < cols; ++c) row[c] += gr * x[c];
    }
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void column_moments_scalar(const double* data, std::size_t rows, std::size_t cols, double* mean,
                           double* stddev) {
    for (std::size_t c = 0; c < cols; ++c) {
        mean[c] = 0.0;
        stddev[c] = 0.0;
    }
    if (rows == 0) return;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) mean[c] += data[r * cols + c];
    const double inv = 1.0 / static_cast<double>(rows);
    for (std::size_t c = 0; c < cols; ++c) mean[c] *= inv;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double d = data[r * cols + c] - mean[c];
            stddev[c] += d * d;
        }
    for (std::size_t c = 0; c < cols; ++c) stddev[c] = std::sqrt(stddev[c] * inv);
}

}  // namespace l2t::kernels::detail
