// AVX2+FMA variants. Functions carry a target attribute instead of building
// the whole translation unit with -mavx2, so no AVX code can leak into inline
// functions shared with the scalar path.

#include "tables.hpp"

#if HARDY_HAVE_AVX2_TABLE

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#define HARDY_AVX2 __attribute__((target("avx2,fma")))

namespace hardy::simd::detail {
namespace {

inline const double* raw(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* raw(cplx* p) { return reinterpret_cast<double*>(p); }

// [w0, w0, w1, w1] from two consecutive weights.
HARDY_AVX2 inline __m256d dup_pair(const double* w) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0x50);
}

HARDY_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

HARDY_AVX2 cplx weighted_sum(const double* w, const cplx* v, std::size_t n) {
    const double* x = raw(v);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        acc0 = _mm256_fmadd_pd(dup_pair(w + j), _mm256_loadu_pd(x + 2 * j), acc0);
        acc1 = _mm256_fmadd_pd(dup_pair(w + j + 2), _mm256_loadu_pd(x + 2 * j + 4), acc1);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
    double re = lanes[0] + lanes[2];
    double im = lanes[1] + lanes[3];
    for (; j < n; ++j) {
        re += w[j] * v[j].real();
        im += w[j] * v[j].imag();
    }
    return {re, im};
}

HARDY_AVX2 cplx weighted_dot(const double* w, const cplx* f, const cplx* g, std::size_t n) {
    const double* fx = raw(f);
    const double* gx = raw(g);
    __m256d acc_re = _mm256_setzero_pd();  // w * [fr gr, fi gi]
    __m256d acc_im = _mm256_setzero_pd();  // w * [fr gi, fi gr]
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        const __m256d wd = dup_pair(w + j);
        const __m256d fv = _mm256_loadu_pd(fx + 2 * j);
        const __m256d gv = _mm256_loadu_pd(gx + 2 * j);
        const __m256d gs = _mm256_permute_pd(gv, 0x5);
        acc_re = _mm256_fmadd_pd(wd, _mm256_mul_pd(fv, gv), acc_re);
        acc_im = _mm256_fmadd_pd(wd, _mm256_mul_pd(fv, gs), acc_im);
    }
    alignas(32) double r[4], i[4];
    _mm256_store_pd(r, acc_re);
    _mm256_store_pd(i, acc_im);
    double re = r[0] + r[1] + r[2] + r[3];
    double im = (i[1] - i[0]) + (i[3] - i[2]);
    for (; j < n; ++j) {
        const double fr = f[j].real(), fi = f[j].imag();
        const double gr = g[j].real(), gi = g[j].imag();
        re += w[j] * (fr * gr + fi * gi);
        im += w[j] * (fi * gr - fr * gi);
    }
    return {re, im};
}

// Squared moduli of four consecutive complex values, in order.
HARDY_AVX2 inline __m256d abs2_quad(const double* x) {
    const __m256d a = _mm256_loadu_pd(x);
    const __m256d b = _mm256_loadu_pd(x + 4);
    const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    // hadd yields [r0, r2, r1, r3]
    return _mm256_permute4x64_pd(h, 0xD8);
}

HARDY_AVX2 double weighted_abs_pow_sum(const double* w, const cplx* v, double p, std::size_t n) {
    const double* x = raw(v);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    if (p == 2.0) {
        for (; j + 4 <= n; j += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), abs2_quad(x + 2 * j), acc);
    } else if (p == 1.0) {
        for (; j + 4 <= n; j += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_sqrt_pd(abs2_quad(x + 2 * j)),
                                  acc);
    } else if (p == 4.0) {
        for (; j + 4 <= n; j += 4) {
            const __m256d r2 = abs2_quad(x + 2 * j);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_mul_pd(r2, r2), acc);
        }
    } else {
        const double half = 0.5 * p;
        alignas(32) double r2[4];
        for (; j + 4 <= n; j += 4) {
            _mm256_store_pd(r2, abs2_quad(x + 2 * j));
            for (double& r : r2) r = std::pow(r, half);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_load_pd(r2), acc);
        }
    }
    double total = hsum(acc);
    for (; j < n; ++j) {
        const double r2 = v[j].real() * v[j].real() + v[j].imag() * v[j].imag();
        double t;
        if (p == 2.0) t = r2;
        else if (p == 1.0) t = std::sqrt(r2);
        else if (p == 4.0) t = r2 * r2;
        else t = std::pow(r2, 0.5 * p);
        total += w[j] * t;
    }
    return total;
}

HARDY_AVX2 double weighted_pow_sum_real(const double* w, const double* r, double e,
                                        std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    if (e == 1.0) {
        for (; j + 4 <= n; j += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_loadu_pd(r + j), acc);
    } else if (e == 2.0) {
        for (; j + 4 <= n; j += 4) {
            const __m256d rv = _mm256_loadu_pd(r + j);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_mul_pd(rv, rv), acc);
        }
    } else {
        alignas(32) double t[4];
        for (; j + 4 <= n; j += 4) {
            for (int k = 0; k < 4; ++k) t[k] = std::pow(r[j + k], e);
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_load_pd(t), acc);
        }
    }
    double total = hsum(acc);
    for (; j < n; ++j) {
        const double t = e == 1.0 ? r[j] : (e == 2.0 ? r[j] * r[j] : std::pow(r[j], e));
        total += w[j] * t;
    }
    return total;
}

HARDY_AVX2 double max_abs(const cplx* v, std::size_t n) {
    const double* x = raw(v);
    __m256d m = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) m = _mm256_max_pd(m, abs2_quad(x + 2 * j));
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, m);
    double m2 = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; j < n; ++j)
        m2 = std::max(m2, v[j].real() * v[j].real() + v[j].imag() * v[j].imag());
    return std::sqrt(m2);
}

HARDY_AVX2 void axpy(double c, const cplx* x, cplx* y, std::size_t n) {
    const double* xs = raw(x);
    double* ys = raw(y);
    const std::size_t len = 2 * n;
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t k = 0;
    for (; k + 4 <= len; k += 4)
        _mm256_storeu_pd(ys + k, _mm256_fmadd_pd(cv, _mm256_loadu_pd(xs + k), _mm256_loadu_pd(ys + k)));
    for (; k < len; ++k) ys[k] += c * xs[k];
}

HARDY_AVX2 double kernel_power(const cplx* const* coords, const cplx* a, std::size_t dims,
                               int power, std::size_t n, cplx* out) {
    const __m256d one_zero = _mm256_setr_pd(1.0, 0.0, 1.0, 0.0);
    const __m256d conj_mask = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    __m256d min_re = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    double* o = raw(out);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
        __m256d wv = one_zero;
        for (std::size_t d = 0; d < dims; ++d) {
            const __m256d z = _mm256_loadu_pd(raw(coords[d]) + 2 * j);
            const __m256d zs = _mm256_permute_pd(z, 0x5);
            const __m256d ar = _mm256_set1_pd(a[d].real());
            const __m256d ai = _mm256_mul_pd(_mm256_set1_pd(a[d].imag()), conj_mask);
            // conj(a) * z as [ar zr + ai zi, ar zi - ai zr]
            wv = _mm256_sub_pd(wv, _mm256_fmadd_pd(ai, zs, _mm256_mul_pd(ar, z)));
        }
        min_re = _mm256_min_pd(min_re, _mm256_unpacklo_pd(wv, wv));
        __m256d u = wv;
        const __m256d w_re = _mm256_movedup_pd(wv);
        const __m256d w_im = _mm256_permute_pd(wv, 0xF);
        for (int k = 1; k < power; ++k) {
            const __m256d us = _mm256_permute_pd(u, 0x5);
            u = _mm256_addsub_pd(_mm256_mul_pd(u, w_re), _mm256_mul_pd(us, w_im));
        }
        const __m256d sq = _mm256_mul_pd(u, u);
        const __m256d n2 = _mm256_hadd_pd(sq, sq);
        _mm256_storeu_pd(o + 2 * j, _mm256_div_pd(_mm256_mul_pd(u, conj_mask), n2));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, min_re);
    double result = std::min(lanes[0], lanes[2]);
    if (j < n) {
        const cplx* tail[8];
        const std::size_t dd = std::min<std::size_t>(dims, 8);
        for (std::size_t d = 0; d < dd; ++d) tail[d] = coords[d] + j;
        result = std::min(result, scalar_table.kernel_power(tail, a, dims, power, n - j, out + j));
    }
    return result;
}

}  // namespace

const KernelTable avx2_table{
    weighted_sum, weighted_dot, weighted_abs_pow_sum, weighted_pow_sum_real,
    max_abs,      axpy,         kernel_power,
};

}  // namespace hardy::simd::detail

#endif
