#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "hardy/error.hpp"
#include "hardy/simd.hpp"

using hardy::simd::cplx;
using hardy::simd::Level;

namespace {

struct Data {
    std::vector<double> w;
    std::vector<cplx> f, g;
    std::vector<double> r;
};

Data make_data(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Data d;
    for (std::size_t j = 0; j < n; ++j) {
        d.w.push_back(0.5 * (u(rng) + 1.0));
        d.f.emplace_back(u(rng), u(rng));
        d.g.emplace_back(u(rng), u(rng));
        d.r.push_back(std::abs(u(rng)) + 0.1);
    }
    return d;
}

void close(cplx a, cplx b, double tol) {
    CHECK(std::abs(a - b) <= tol * (1.0 + std::abs(b)));
}

void close(double a, double b, double tol) { CHECK(std::abs(a - b) <= tol * (1.0 + std::abs(b))); }

}  // namespace

TEST_CASE("scalar level is always available") {
    CHECK(hardy::simd::supported(Level::Scalar));
    CHECK(hardy::simd::supported(hardy::simd::detected()));
}

TEST_CASE("scalar reference matches naive loops") {
    const auto& s = hardy::simd::table(Level::Scalar);
    const Data d = make_data(37, 1);
    cplx sum = 0.0, dot = 0.0;
    double p3 = 0.0, mx = 0.0;
    for (std::size_t j = 0; j < d.f.size(); ++j) {
        sum += d.w[j] * d.f[j];
        dot += d.w[j] * d.f[j] * std::conj(d.g[j]);
        p3 += d.w[j] * std::pow(std::abs(d.f[j]), 3.0);
        mx = std::max(mx, std::abs(d.f[j]));
    }
    close(s.weighted_sum(d.w.data(), d.f.data(), 37), sum, 1e-14);
    close(s.weighted_dot(d.w.data(), d.f.data(), d.g.data(), 37), dot, 1e-14);
    close(s.weighted_abs_pow_sum(d.w.data(), d.f.data(), 3.0, 37), p3, 1e-13);
    close(s.max_abs(d.f.data(), 37), mx, 1e-15);
}

TEST_CASE("avx2 variants agree with the scalar reference") {
    if (!hardy::simd::supported(Level::Avx2)) {
        MESSAGE("avx2 not supported here; skipped");
        return;
    }
    const auto& s = hardy::simd::table(Level::Scalar);
    const auto& v = hardy::simd::table(Level::Avx2);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 31u, 1000u, 1003u}) {
        CAPTURE(n);
        const Data d = make_data(n, 7 + static_cast<unsigned>(n));
        close(v.weighted_sum(d.w.data(), d.f.data(), n), s.weighted_sum(d.w.data(), d.f.data(), n),
              1e-13);
        close(v.weighted_dot(d.w.data(), d.f.data(), d.g.data(), n),
              s.weighted_dot(d.w.data(), d.f.data(), d.g.data(), n), 1e-13);
        for (double p : {1.0, 2.0, 4.0, 4.0 / 3.0, 3.5}) {
            close(v.weighted_abs_pow_sum(d.w.data(), d.f.data(), p, n),
                  s.weighted_abs_pow_sum(d.w.data(), d.f.data(), p, n), 1e-13);
        }
        for (double e : {1.0, 2.0, 0.75}) {
            close(v.weighted_pow_sum_real(d.w.data(), d.r.data(), e, n),
                  s.weighted_pow_sum_real(d.w.data(), d.r.data(), e, n), 1e-13);
        }
        close(v.max_abs(d.f.data(), n), s.max_abs(d.f.data(), n), 1e-15);

        std::vector<cplx> y1 = d.g, y2 = d.g;
        s.axpy(-0.3, d.f.data(), y1.data(), n);
        v.axpy(-0.3, d.f.data(), y2.data(), n);
        for (std::size_t j = 0; j < n; ++j) close(y2[j], y1[j], 1e-15);

        // kernel powers on points of the closed unit ball of C^2
        std::vector<cplx> z0(n), z1(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double norm = std::sqrt(std::norm(d.f[j]) + std::norm(d.g[j]));
            z0[j] = d.f[j] / norm;
            z1[j] = d.g[j] / norm;
        }
        const cplx* coords[2] = {z0.data(), z1.data()};
        const cplx a[2] = {cplx(0.3, -0.2), cplx(-0.1, 0.5)};
        for (int power : {1, 2, 3, 5}) {
            std::vector<cplx> o1(n), o2(n);
            const double m1 = s.kernel_power(coords, a, 2, power, n, o1.data());
            const double m2 = v.kernel_power(coords, a, 2, power, n, o2.data());
            if (n == 0) CHECK((std::isinf(m1) && std::isinf(m2)));
            else CHECK(m1 == doctest::Approx(m2).epsilon(1e-15));
            for (std::size_t j = 0; j < n; ++j) close(o2[j], o1[j], 1e-13);
        }
    }
}

TEST_CASE("dispatch can be pinned and restored") {
    const Level before = hardy::simd::active();
    hardy::simd::set_active(Level::Scalar);
    CHECK(hardy::simd::active() == Level::Scalar);
    const std::vector<double> w{0.25, 0.75};
    const std::vector<cplx> v{cplx(1, 0), cplx(0, 2)};
    close(hardy::simd::weighted_sum(w, v), cplx(0.25, 1.5), 1e-15);
    hardy::simd::set_active(before);
    CHECK(hardy::simd::active() == before);
}

TEST_CASE("wrappers reject mismatched lengths") {
    const std::vector<double> w{1.0};
    const std::vector<cplx> v{1.0, 2.0};
    CHECK_THROWS_AS(hardy::simd::weighted_sum(w, v), hardy::Error);
}
