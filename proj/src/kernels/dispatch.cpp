#include "l2t/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_impl.hpp"

namespace l2t::kernels {

namespace {

using namespace detail;

constexpr KernelTable kScalar{"scalar",     dot_scalar, gemv_scalar,          gemv_t_acc_scalar,
                              ger_scalar,   axpy_scalar, column_moments_scalar};

#if defined(L2T_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2",   dot_avx2, gemv_avx2,          gemv_t_acc_avx2,
                            ger_avx2, axpy_avx2, column_moments_avx2};

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelTable* pick_default() {
    if (const char* env = std::getenv("L2T_KERNELS"); env && std::string(env) == "scalar")
        return &kScalar;
    if (const KernelTable* t = avx2_table()) return t;
    return &kScalar;
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{pick_default()};
    return table;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(L2T_HAVE_AVX2)
    static const bool ok = cpu_has_avx2();
    return ok ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

bool select(std::string_view name) {
    if (name == kScalar.name) {
        current().store(&kScalar);
        return true;
    }
    if (const KernelTable* t = avx2_table(); t && name == t->name) {
        current().store(t);
        return true;
    }
    return false;
}

}  // namespace l2t::kernels
