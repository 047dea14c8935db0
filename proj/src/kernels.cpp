#include "calex/kernels.hpp"

#include <atomic>

#include "calex/error.hpp"

namespace calex::kernels {

namespace {

constexpr Table kScalarTable{scalar::dot, scalar::dot3, scalar::wsumsq,
                             scalar::sum, scalar::axpy};

#if CALEX_HAS_AVX2_KERNELS
constexpr Table kAvx2Table{avx2::dot, avx2::dot3, avx2::wsumsq, avx2::sum,
                           avx2::axpy};
#endif

const Table* detect() {
#if CALEX_HAS_AVX2_KERNELS
    if (cpu_has_avx2()) return &kAvx2Table;
#endif
    return &kScalarTable;
}

std::atomic<const Table*> g_table{nullptr};

const Table& table() {
    const Table* t = g_table.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = detect();
        g_table.store(t, std::memory_order_release);
    }
    return *t;
}

}  // namespace

const char* isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool cpu_has_avx2() {
#if CALEX_HAS_AVX2_KERNELS && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active() {
#if CALEX_HAS_AVX2_KERNELS
    if (&table() == &kAvx2Table) return Isa::avx2;
#endif
    return Isa::scalar;
}

void force(Isa isa) {
    if (isa == Isa::scalar) {
        g_table.store(&kScalarTable, std::memory_order_release);
        return;
    }
#if CALEX_HAS_AVX2_KERNELS
    if (cpu_has_avx2()) {
        g_table.store(&kAvx2Table, std::memory_order_release);
        return;
    }
#endif
    throw Error(ErrorKind::BadSpec, "avx2 kernels not supported on this CPU");
}

void reset() { g_table.store(detect(), std::memory_order_release); }

double dot(const double* x, const double* y, std::size_t n) {
    return table().dot(x, y, n);
}

double dot3(const double* w, const double* x, const double* y, std::size_t n) {
    return table().dot3(w, x, y, n);
}

double wsumsq(const double* w, const double* x, std::size_t n) {
    return table().wsumsq(w, x, n);
}

double sum(const double* x, std::size_t n) { return table().sum(x, n); }

void axpy(double a, const double* x, double* y, std::size_t n) {
    table().axpy(a, x, y, n);
}

}  // namespace calex::kernels
