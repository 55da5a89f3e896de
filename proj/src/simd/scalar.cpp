#include <algorithm>
#include <cmath>
#include <limits>

#include "tables.hpp"

namespace hardy::simd::detail {
namespace {

inline double abs_pow_from_sq(double r2, double p) {
    if (p == 2.0) return r2;
    if (p == 1.0) return std::sqrt(r2);
    if (p == 4.0) return r2 * r2;
    return std::pow(r2, 0.5 * p);
}

cplx weighted_sum(const double* w, const cplx* v, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        re += w[j] * v[j].real();
        im += w[j] * v[j].imag();
    }
    return {re, im};
}

cplx weighted_dot(const double* w, const cplx* f, const cplx* g, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double fr = f[j].real(), fi = f[j].imag();
        const double gr = g[j].real(), gi = g[j].imag();
        re += w[j] * (fr * gr + fi * gi);
        im += w[j] * (fi * gr - fr * gi);
    }
    return {re, im};
}

double weighted_abs_pow_sum(const double* w, const cplx* v, double p, std::size_t n) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double r2 = v[j].real() * v[j].real() + v[j].imag() * v[j].imag();
        acc += w[j] * abs_pow_from_sq(r2, p);
    }
    return acc;
}

double weighted_pow_sum_real(const double* w, const double* r, double e, std::size_t n) {
    double acc = 0.0;
    if (e == 1.0) {
        for (std::size_t j = 0; j < n; ++j) acc += w[j] * r[j];
    } else if (e == 2.0) {
        for (std::size_t j = 0; j < n; ++j) acc += w[j] * (r[j] * r[j]);
    } else {
        for (std::size_t j = 0; j < n; ++j) acc += w[j] * std::pow(r[j], e);
    }
    return acc;
}

double max_abs(const cplx* v, std::size_t n) {
    double m2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        m2 = std::max(m2, v[j].real() * v[j].real() + v[j].imag() * v[j].imag());
    }
    return std::sqrt(m2);
}

void axpy(double c, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        y[j] = {y[j].real() + c * x[j].real(), y[j].imag() + c * x[j].imag()};
    }
}

double kernel_power(const cplx* const* coords, const cplx* a, std::size_t dims, int power,
                    std::size_t n, cplx* out) {
    double min_re = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double wr = 1.0, wi = 0.0;
        for (std::size_t d = 0; d < dims; ++d) {
            const double ar = a[d].real(), ai = a[d].imag();
            const double zr = coords[d][j].real(), zi = coords[d][j].imag();
            wr -= ar * zr + ai * zi;
            wi -= ar * zi - ai * zr;
        }
        min_re = std::min(min_re, wr);
        double ur = wr, ui = wi;
        for (int k = 1; k < power; ++k) {
            const double tr = ur * wr - ui * wi;
            ui = ur * wi + ui * wr;
            ur = tr;
        }
        const double inv = 1.0 / (ur * ur + ui * ui);
        out[j] = {ur * inv, -ui * inv};
    }
    return min_re;
}

}  // namespace

const KernelTable scalar_table{
    weighted_sum, weighted_dot, weighted_abs_pow_sum, weighted_pow_sum_real,
    max_abs,      axpy,         kernel_power,
};

}  // namespace hardy::simd::detail
