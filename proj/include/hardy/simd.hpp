#pragma once

// Data-parallel inner loops over quadrature nodes.
//
// Every routine has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is chosen once at startup from CPUID and can
// be overridden (tests pin both levels and compare). Reductions differ from
// the scalar path only by summation order.

#include <complex>
#include <cstddef>
#include <span>

namespace hardy::simd {

using cplx = std::complex<double>;

enum class Level { Scalar, Avx2 };

const char* to_string(Level level);

/// Whether the running CPU (and this build) can execute `level`.
bool supported(Level level);

/// Best level supported by the running CPU.
Level detected();

/// Level currently used by the free functions below.
Level active();

/// Pin the dispatch level. Throws hardy::Error(Unsupported) when the CPU
/// cannot run it.
void set_active(Level level);

struct KernelTable {
    cplx (*weighted_sum)(const double* w, const cplx* v, std::size_t n);
    cplx (*weighted_dot)(const double* w, const cplx* f, const cplx* g, std::size_t n);
    double (*weighted_abs_pow_sum)(const double* w, const cplx* v, double p, std::size_t n);
    double (*weighted_pow_sum_real)(const double* w, const double* r, double e, std::size_t n);
    double (*max_abs)(const cplx* v, std::size_t n);
    void (*axpy)(double c, const cplx* x, cplx* y, std::size_t n);
    // out_j = (1 - sum_d conj(a_d) z_{d,j})^(-power); returns min_j Re(1 - <z_j, a>).
    double (*kernel_power)(const cplx* const* coords, const cplx* a, std::size_t dims,
                           int power, std::size_t n, cplx* out);
};

const KernelTable& table(Level level);

// Convenience wrappers on the active level.

cplx weighted_sum(std::span<const double> w, std::span<const cplx> v);
cplx weighted_dot(std::span<const double> w, std::span<const cplx> f, std::span<const cplx> g);
double weighted_abs_pow_sum(std::span<const double> w, std::span<const cplx> v, double p);
double weighted_pow_sum_real(std::span<const double> w, std::span<const double> r, double e);
double max_abs(std::span<const cplx> v);
void axpy(double c, std::span<const cplx> x, std::span<cplx> y);
double kernel_power(std::span<const cplx* const> coords, std::span<const cplx> a, int power,
                    std::span<cplx> out);

}  // namespace hardy::simd
