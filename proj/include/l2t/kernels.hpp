#pragma once

// Dense double-precision kernels used by the MLP and the population
// statistics. Each kernel has a portable scalar reference implementation
// and, on x86-64, an AVX2+FMA implementation. The active table is picked
// once at startup from CPUID; set L2T_KERNELS=scalar to force the
// reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace l2t::kernels {

struct KernelTable {
    std::string_view name;

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // out = W x + bias, W is (rows x cols) row-major; bias may be null.
    void (*gemv)(const double* w, std::size_t rows, std::size_t cols, const double* x,
                 const double* bias, double* out);

    // out += W^T g
    void (*gemv_t_acc)(const double* w, std::size_t rows, std::size_t cols, const double* g,
                       double* out);

    // G += g x^T
    void (*ger)(double* g_mat, std::size_t rows, std::size_t cols, const double* g,
                const double* x);

    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // Per-column mean and population standard deviation (divisor rows).
    void (*column_moments)(const double* data, std::size_t rows, std::size_t cols, double* mean,
                           double* stddev);
};

const KernelTable& scalar_table();

// Null when the binary was built without AVX2 support or the CPU lacks it.
const KernelTable* avx2_table();

// The table selected for this process.
const KernelTable& active();

// Override the selection (tests and benchmarks). Returns false if the
// requested table is unavailable.
bool select(std::string_view name);

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
    active().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace l2t::kernels
