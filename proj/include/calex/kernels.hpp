#pragma once

#include <cstddef>

// Dense double-precision kernels behind the numeric hot loops (coordinate
// descent, linear predictors, loess windows). Two implementations share one
// contract: kernels::scalar is the reference, kernels::avx2 the vectorized
// variant compiled with -mavx2 -mfma in its own translation unit. The
// top-level entry points dispatch through a function table selected at
// runtime from CPUID, overridable via force() for equivalence tests and for
// pinning runs to the scalar path.
//
// Accumulation order differs between the two paths, so reductions agree only
// to rounding (~1e-13 relative); elementwise ops (axpy without fma tails)
// agree except for fma contraction. Tests pin the tolerances.

namespace calex::kernels {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

// True when the running CPU supports the AVX2+FMA path.
bool cpu_has_avx2();

// Currently dispatched ISA.
Isa active();

// Force a specific path; throws Error(BadSpec) if unsupported on this CPU.
void force(Isa isa);

// Return to CPUID-based auto selection.
void reset();

double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double wsumsq(const double* w, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

struct Table {
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    double (*wsumsq)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double wsumsq(const double* w, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CALEX_HAS_AVX2_KERNELS 1
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
double dot3(const double* w, const double* x, const double* y, std::size_t n);
double wsumsq(const double* w, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace avx2
#else
#define CALEX_HAS_AVX2_KERNELS 0
#endif

}  // namespace calex::kernels
