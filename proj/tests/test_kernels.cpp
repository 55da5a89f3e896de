#include <numbers>
#include <random>

#include "doctest.h"
#include "hardy/kernels.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

// ||k_a||_4^4 on the disc: sum (k+1)^2 r^{2k}.
double disc_l4_pow4(double r) { return (1.0 + r * r) / std::pow(1.0 - r * r, 3); }

// ||k_a||_1 on the disc: 2F1(1/2,1/2;1;r^2) = (2/pi) K(r).
double disc_l1(double r) { return 2.0 / std::numbers::pi * std::comp_ellint_1(r); }

// ||k_a||_4^4 on the ball of C^2 by the binomial series against sphere moments.
double ball2_l4_pow4(double r) {
    double s = 0.0;
    for (int k = 0; k < 4000; ++k) {
        const double c = (k + 1.0) * (k + 2.0) * (k + 3.0) / 6.0;
        s += c * c * std::pow(r * r, k) / (k + 1.0);
    }
    return s;
}

Point random_point(const Domain& d, std::mt19937_64& rng, double rmax) {
    if (d.kind() == DomainKind::Disc) return {oracle::random_in_disc(rng, rmax)};
    if (d.kind() == DomainKind::Bidisc) {
        return {oracle::random_in_disc(rng, rmax), oracle::random_in_disc(rng, rmax)};
    }
    Point a{oracle::random_in_disc(rng, 1.0), oracle::random_in_disc(rng, 1.0)};
    const double n = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
    std::uniform_real_distribution<double> u(0.0, rmax);
    const double r = u(rng);
    return {a[0] * r / n, a[1] * r / n};
}

}  // namespace

TEST_CASE("kernel_eval matches the closed forms") {
    CHECK(kernel_eval(Domain::disc(), {0.0}, {cplx(0.3, 0.9)}) == cplx(1.0));
    CHECK(std::abs(kernel_eval(Domain::disc(), {0.5}, {0.5}) - 4.0 / 3.0) < 1e-15);
    CHECK(std::abs(kernel_eval(Domain::ball(2), {0.5, 0.0}, {0.5, 0.0}) - 16.0 / 9.0) < 1e-15);
    const Point a{cplx(0.2, 0.3), cplx(-0.4, 0.1)};
    const Point z{cplx(0.6, 0.0), cplx(0.0, 0.8)};
    CHECK(std::abs(kernel_eval(Domain::ball(2), a, z) - oracle::ball_kernel(a, z)) < 1e-14);
    CHECK(std::abs(kernel_eval(Domain::bidisc(), a, z) -
                   oracle::disc_kernel(a[0], z[0]) * oracle::disc_kernel(a[1], z[1])) < 1e-14);
    CHECK_THROWS_AS(kernel_eval(Domain::disc(), {1.0}, {0.0}), Error);
    CHECK(kernel_diagonal(Domain::ball(2), {0.6, 0.0}) == doctest::Approx(1.0 / (0.64 * 0.64)));
}

TEST_CASE("kernel samples agree with pointwise evaluation") {
    for (const Domain& d : {Domain::disc(), Domain::ball(2), Domain::bidisc(), Domain::ball(3)}) {
        const auto rule = build_quadrature(d, 8);
        Point a(d.dim(), 0.0);
        a[0] = cplx(0.3, -0.2);
        if (d.dim() > 1) a[1] = cplx(0.1, 0.4);
        const auto ks = kernel_samples(a, *rule);
        for (std::size_t j = 0; j < rule->size(); ++j) {
            CHECK(std::abs(ks[j] - kernel_eval(d, a, rule->node(j))) < 1e-13);
        }
    }
}

TEST_CASE("kernel_norm examples") {
    const auto disc = build_quadrature(Domain::disc(), 256);
    const auto ball = build_quadrature(Domain::ball(2), 24);
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
        CHECK(kernel_norm({0.0}, p, *disc) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(kernel_norm({0.0, 0.0}, p, *ball) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(kernel_norm({0.5}, 2.0, *disc) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
    const auto axis = build_sphere_rule(2, {48, 96, 1, 1});
    CHECK(kernel_norm({0.6, 0.0}, 2.0, *axis) == doctest::Approx(1.5625).epsilon(1e-12));
}

TEST_CASE("NormEngine: squared L2 norm equals the diagonal on all domains") {
    std::mt19937_64 rng(11);
    for (const Domain& d : {Domain::disc(), Domain::ball(2), Domain::bidisc()}) {
        NormEngine engine(d);
        for (int i = 0; i < 8; ++i) {
            const Point a = random_point(d, rng, 0.9);
            const auto& e = engine.norm(a, 2.0);
            CAPTURE(d.name());
            CHECK(e.converged);
            CHECK(std::abs(e.value * e.value / kernel_diagonal(d, a) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("NormEngine: disc norms against series oracles") {
    NormEngine engine(Domain::disc());
    for (double r : {0.1, 0.5, 0.8, 0.95}) {
        const Point a{std::polar(r, 1.1)};
        CHECK(engine.value(a, 1.0) == doctest::Approx(disc_l1(r)).epsilon(1e-10));
        CHECK(std::pow(engine.value(a, 4.0), 4) == doctest::Approx(disc_l4_pow4(r)).epsilon(1e-9));
        CHECK(engine.value(a, kInf) == doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-12));
        const double p = 4.0 / 3.0;
        CHECK(std::pow(engine.value(a, p), p) ==
              doctest::Approx(oracle::disc_kernel_pow_integral(r, p, 400000)).epsilon(1e-8));
    }
}

TEST_CASE("NormEngine: ball and bidisc norms against independent oracles") {
    NormEngine ball(Domain::ball(2));
    for (double r : {0.3, 0.7}) {
        const Point a{cplx(0.0, r / std::sqrt(2.0)), r / std::sqrt(2.0)};
        CHECK(std::pow(ball.value(a, 4.0), 4) == doctest::Approx(ball2_l4_pow4(r)).epsilon(1e-9));
        // canonical frame agrees with a full isotropic rule at a generic point
        const auto full = build_sphere_rule(2, {40, 80, 1, 80});
        CHECK(ball.value(a, 3.0) == doctest::Approx(kernel_norm(a, 3.0, *full)).epsilon(1e-9));
    }
    NormEngine bidisc(Domain::bidisc());
    NormEngine disc(Domain::disc());
    const Point a{cplx(0.4, 0.3), cplx(-0.6, 0.0)};
    for (double p : {1.0, 3.0, 4.0}) {
        CHECK(bidisc.value(a, p) ==
              doctest::Approx(disc.value({a[0]}, p) * disc.value({a[1]}, p)).epsilon(1e-10));
    }
}

TEST_CASE("NormEngine: monotone in p and cached") {
    NormEngine engine(Domain::ball(2));
    const Point a{0.5, cplx(0.0, 0.3)};
    const double ps[] = {1.0, 4.0 / 3.0, 2.0, 3.0, 4.0, kInf};
    const auto t = engine.table(a, ps);
    double prev = 0.0;
    for (double p : ps) {
        CHECK(t.norm(p) >= prev);
        prev = t.norm(p);
    }
    CHECK(t.diagonal == doctest::Approx(kernel_diagonal(Domain::ball(2), a)));
    CHECK_THROWS_AS(t.norm(5.0), Error);
    CHECK(t.omega(2.0) == doctest::Approx(std::pow(t.norm(4.0), -4.0)));
    CHECK(&engine.norm(a, 2.0) == &engine.norm({cplx(0.0, 0.3), 0.5}, 2.0));
}

TEST_CASE("reproducing property") {
    const auto disc = build_quadrature(Domain::disc(), 64);
    CHECK(reproducing_check([](const Point&) { return cplx(1.0); }, {0.3}, disc) < 1e-14);
    const auto cube = [](const Point& z) { return std::pow(z[0], 3); };
    // M nodes alias z^3 against the kernel modes k = 3 + jM: error a^{M+3}/(1-a^M)
    const double alias = std::pow(0.7, 67) / (1.0 - std::pow(0.7, 64));
    CHECK(reproducing_check(cube, {0.7}, disc) == doctest::Approx(alias).epsilon(1e-6));
    CHECK(reproducing_check(cube, {0.7}, build_quadrature(Domain::disc(), 128)) < 1e-12);
    const auto ball = rotate_to_point(build_sphere_rule(2, {48, 96, 4, 8}),
                                      {0.3, cplx(0.0, 0.4)});
    CHECK(reproducing_check([](const Point& z) { return z[0] * z[1]; }, {0.3, cplx(0.0, 0.4)},
                            ball) < 1e-10);
}

TEST_CASE("Poisson kernel") {
    const auto rule = build_quadrature(Domain::disc(), 128);
    const auto p0 = poisson_kernel({0.0}, rule);
    for (cplx v : p0.values) CHECK(std::abs(v - 1.0) < 1e-15);
    const auto pa = poisson_kernel({0.5}, rule);
    CHECK(std::abs(lp_norm(pa, 1.0) - 1.0) < 1e-12);
    const auto z = sample(rule, [](const Point& p) { return p[0]; });
    CHECK(std::abs(inner_product(z, pa) - 0.5) < 1e-12);
    for (int k = 0; k <= 8; ++k) {
        const auto m = sample(rule, [k](const Point& p) { return std::pow(p[0], k); });
        CHECK(std::abs(inner_product(m, pa) - std::pow(0.5, k)) < 1e-10);
    }
}

TEST_CASE("analytic projection") {
    const auto rule = build_quadrature(Domain::disc(), 128);
    const auto zbar = sample(rule, [](const Point& p) { return std::conj(p[0]); });
    CHECK(std::abs(analytic_projection_eval(zbar, {0.5})) < 1e-14);
    const auto poly = sample(rule, [](const Point& p) { return 2.0 - p[0] + 3.0 * p[0] * p[0]; });
    CHECK(std::abs(analytic_projection_eval(poly, {cplx(0.2, 0.1)}) -
                   (2.0 - cplx(0.2, 0.1) + 3.0 * cplx(0.2, 0.1) * cplx(0.2, 0.1))) < 1e-13);
    const auto one = sample(rule, [](const Point&) { return cplx(1.0); });
    CHECK(std::abs(analytic_projection_eval(one, {0.7}) - 1.0) < 1e-13);
}

TEST_CASE("SH(q) scans") {
    NormEngine engine(Domain::disc());
    const double radii[] = {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.95};
    const auto grid = radial_grid(Domain::disc(), radii, 3);
    const auto two = sh_q_scan(engine, 2.0, grid);
    for (const auto& pt : two.points) CHECK(std::abs(pt.ratio - 1.0) < 1e-10);
    const auto four = sh_q_scan(engine, 4.0, grid);
    REQUIRE(four.alpha);
    CHECK(*four.alpha > 0.0);
    CHECK(*four.alpha < 1.0);
    CHECK(four.points.front().ratio == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& pt : four.points) CHECK(pt.ratio <= 1.0 + 1e-10);
    CHECK(four.warnings.empty());
    CHECK(four.max_residual < 1e-8);
    CHECK_THROWS_AS(sh_q_scan(engine, 1.0, grid), Error);
}

TEST_CASE("SH(p,s) scans") {
    NormEngine engine(Domain::disc());
    const double radii[] = {0.0, 0.25, 0.5, 0.75, 0.9};
    const auto grid = radial_grid(Domain::disc(), radii, 1);
    const auto sh = sh_ps_scan(engine, 2.0, 1.0, grid);
    CHECK(sh.q == doctest::Approx(2.0));
    for (const auto& pt : sh.points) {
        const double r = std::abs(pt.a[0]);
        CHECK(pt.ratio == doctest::Approx(1.0 + r).epsilon(1e-9));
    }
    REQUIRE(sh.beta);
    CHECK(*sh.beta <= 2.0);
    CHECK(*sh.beta >= 1.0);

    NormEngine bidisc(Domain::bidisc());
    const std::vector<Point> g{{0.5, 0.5}};
    const auto b = sh_ps_scan(bidisc, 2.0, 1.0, g);
    REQUIRE(b.beta);
    CHECK(std::isfinite(*b.beta));
    CHECK(*b.beta == doctest::Approx(1.5 * 1.5).epsilon(1e-9));
    CHECK_THROWS_AS(sh_ps_scan(engine, 1.0, 2.0, grid), Error);
}

TEST_CASE("Holder interpolation of kernel norms") {
    NormEngine engine(Domain::disc());
    const auto zero = holder_interp_check(engine, {0.0}, 2.0, 3.0);
    CHECK(zero.lhs == doctest::Approx(1.0));
    CHECK(zero.rhs == doctest::Approx(1.0));
    const auto h = holder_interp_check(engine, {0.8}, 2.0, 3.0);
    CHECK(h.theta == doctest::Approx(0.75));
    CHECK(h.holds);
    CHECK(h.lhs < h.rhs);
    const auto eq = holder_interp_check(engine, {0.8}, 3.0, 3.0);
    CHECK(eq.theta == 1.0);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-15));
    CHECK_THROWS_AS(holder_interp_check(engine, {0.8}, 4.0, 3.0), Error);
    const double radii[] = {0.1, 0.4, 0.7, 0.9, 0.95};
    for (const Point& a : radial_grid(Domain::disc(), radii, 2)) {
        for (double q : {2.0, 3.0, 6.0}) CHECK(holder_interp_check(engine, a, 1.5, q).holds);
    }
}

TEST_CASE("Stein-Weiss weights") {
    NormEngine disc(Domain::disc());
    const auto zero = stein_weiss_weight_check(disc, {0.0}, 2.0, 4.0);
    CHECK(zero.lhs == doctest::Approx(1.0));
    CHECK(zero.rhs == doctest::Approx(1.0));
    const auto w = stein_weiss_weight_check(disc, {0.7}, 2.0, 4.0);
    CHECK(w.holds);
    // the weight inequality is the norm inequality raised to -2p
    const auto h = holder_interp_check(disc, {0.7}, 2.0, 4.0);
    CHECK(w.lhs == doctest::Approx(std::pow(h.rhs, -4.0)).epsilon(1e-12));
    CHECK(w.rhs == doctest::Approx(std::pow(h.lhs, -4.0)).epsilon(1e-12));

    NormEngine ball(Domain::ball(2));
    const double c = 0.9 / std::sqrt(2.0);
    CHECK(stein_weiss_weight_check(ball, {0.5 * c, cplx(0.0, 0.5 * c)}, 2.0, 3.0).holds);
    CHECK_THROWS_AS(stein_weiss_weight_check(disc, {0.5}, 1.0, 3.0), Error);
}

TEST_CASE("sup norms use the boundary maximum") {
    NormEngine ball(Domain::ball(2));
    CHECK(ball.value({0.0, cplx(0.0, -0.5)}, kInf) == doctest::Approx(4.0).epsilon(1e-14));
    // the node maximum of a fine axis rule approaches it from below
    const auto axis = build_sphere_rule(2, {64, 128, 1, 1});
    const double nodes = kernel_norm({0.5, 0.0}, kInf, *axis);
    CHECK(nodes < 4.0);
    CHECK(nodes > 3.9);
    NormEngine bidisc(Domain::bidisc());
    CHECK(bidisc.value({cplx(0.0, 0.5), -0.2}, kInf) == doctest::Approx(2.5).epsilon(1e-14));
    NormEngine disc(Domain::disc());
    CHECK(disc.value({cplx(-0.3, 0.4)}, kInf) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("pairing rules reproduce polynomials at off-axis ball points") {
    const Domain ball = Domain::ball(3);
    const Point a{cplx(0.4, -0.3), 0.5, cplx(0.0, 0.45)};
    const auto rule = pairing_rule(ball, a, 6);
    const auto f = [](const Point& z) { return z[0] * z[1] * z[1] * z[2] * z[2] * z[2] - 2.0 * z[2] + 1.0; };
    CHECK(reproducing_check(f, a, rule) < 1e-10);
    CHECK(reproducing_check([](const Point& z) { return z[1] * z[1] * z[1] * z[1]; }, a, rule) < 1e-10);
    CHECK(pairing_rule(Domain::disc(), {0.5}, 8)->size() == adapted_rule(Domain::disc(), std::vector<Point>{{0.5}})->size());
    CHECK_THROWS_AS(pairing_rule(ball, a, -1), Error);
}
