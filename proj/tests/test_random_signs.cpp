#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hardy/kernels.hpp"
#include "hardy/random_signs.hpp"
#include "hardy/sequences.hpp"
#include "oracles.hpp"

using namespace hardy;

namespace {

ExpectOptions exact() {
    ExpectOptions o;
    o.method = ExpectMethod::Exact;
    return o;
}

// Direct 2^N loop, independent of the Gray-code sweep.
double brute_abs_pow(const std::vector<cplx>& x, double q) {
    const std::size_t n = x.size();
    double total = 0.0;
    for (std::uint64_t k = 0; k < (1ull << n); ++k) {
        cplx s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += ((k >> a) & 1u ? -1.0 : 1.0) * x[a];
        total += std::pow(std::abs(s), q);
    }
    return total / static_cast<double>(1ull << n);
}

}  // namespace

TEST_CASE("low moments of signs") {
    auto e1 = expect([](std::span<const int> e) { return double(e[0]); }, 3, exact());
    CHECK(e1.value == 0.0);
    CHECK(e1.samples == 8);
    auto e12 = expect([](std::span<const int> e) { return double(e[0] * e[1]); }, 2, exact());
    CHECK(e12.value == 0.0);
    auto e4 = expect([](std::span<const int> e) { return std::pow(double(e[0] + e[1]), 4); }, 2, exact());
    CHECK(e4.value == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(e4.method == "exact");
}

TEST_CASE("enumeration caps and seeds") {
    auto f = [](std::span<const int>) { return 1.0; };
    CHECK_THROWS_AS(expect(f, 21, exact()), Error);
    try {
        expect(f, 21, exact());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Capacity);
    }
    ExpectOptions mc;
    mc.method = ExpectMethod::MonteCarlo;
    CHECK_THROWS_AS(expect(f, 3, mc), Error);
    ExpectOptions autop;
    CHECK_THROWS_AS(expect(f, 25, autop), Error);
    autop.seed = 7;
    autop.samples = 100;
    auto r = expect(f, 25, autop);
    CHECK(r.method == "monte-carlo");
    CHECK(r.value == 1.0);
}

TEST_CASE("khintchine ratio at q = 2 is one") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int n = 1 + t % 12;
        std::vector<cplx> x(n);
        for (auto& v : x) v = {g(rng), g(rng)};
        worst = std::max(worst, std::abs(khintchine_ratio(x, 2.0).ratio - 1.0));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("khintchine ratio values and invariances") {
    std::vector<cplx> ones{1.0, 1.0};
    CHECK(khintchine_ratio(ones, 4.0).ratio == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(khintchine_ratio(std::vector<cplx>{0.0, 0.0}, 4.0), Error);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<cplx> x(9);
    for (auto& v : x) v = {g(rng), g(rng)};
    const double base = khintchine_ratio(x, 3.0).ratio;
    CHECK(base == doctest::Approx(brute_abs_pow(x, 3.0) / std::pow(
        [&] { double s = 0; for (auto v : x) s += std::norm(v); return s; }(), 1.5)).epsilon(1e-12));

    auto perm = x;
    std::reverse(perm.begin(), perm.end());
    std::rotate(perm.begin(), perm.begin() + 3, perm.end());
    CHECK(khintchine_ratio(perm, 3.0).ratio == doctest::Approx(base).epsilon(1e-12));

    // A common unimodular factor leaves the ratio unchanged.
    auto rot = x;
    for (auto& v : rot) v *= std::polar(1.0, 0.9);
    CHECK(khintchine_ratio(rot, 3.0).ratio == doctest::Approx(base).epsilon(1e-12));
    // So does flipping the sign of one entry.
    auto flip = x;
    flip[4] = -flip[4];
    CHECK(khintchine_ratio(flip, 3.0).ratio == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("monte carlo is reproducible and agrees with exact") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::vector<cplx> x(14);
    for (auto& v : x) v = {g(rng), g(rng)};
    ExpectOptions mc;
    mc.method = ExpectMethod::MonteCarlo;
    mc.seed = 1234;
    mc.samples = 20000;
    auto a = khintchine_ratio(x, 4.0, mc);
    auto b = khintchine_ratio(x, 4.0, mc);
    CHECK(a.ratio == b.ratio);
    CHECK(a.expectation.seed == std::optional<std::uint64_t>(1234));
    CHECK(a.expectation.stderr_value > 0.0);
    auto e = khintchine_ratio(x, 4.0, exact());
    CHECK(std::abs(a.expectation.value - e.expectation.value) <= 4.0 * a.expectation.stderr_value);
    mc.seed = 1235;
    CHECK(khintchine_ratio(x, 4.0, mc).ratio != a.ratio);
}

TEST_CASE("gray-code sign sums match direct sums") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    const int n = 12;
    const std::size_t m = 5;
    std::vector<std::vector<cplx>> x(n, std::vector<cplx>(m));
    for (auto& v : x)
        for (auto& c : v) c = {g(rng), g(rng)};
    std::uint64_t visits = 0;
    double worst = 0.0;
    std::vector<bool> seen(1u << n, false);
    auto sweep = for_each_sign_sum(x, exact(), [&](std::span<const int> eps, std::span<const cplx> s) {
        std::uint64_t key = 0;
        for (int a = 0; a < n; ++a)
            if (eps[a] < 0) key |= 1u << a;
        seen[key] = true;
        for (std::size_t j = 0; j < m; ++j) {
            cplx d = 0.0;
            for (int a = 0; a < n; ++a) d += double(eps[a]) * x[a][j];
            worst = std::max(worst, std::abs(d - s[j]));
        }
        ++visits;
    });
    CHECK(sweep.patterns == (1u << n));
    CHECK(visits == (1u << n));
    CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
    CHECK(worst < 1e-12);
}

TEST_CASE("weak-from-carleson chain") {
    PointSequence s(Domain::disc(), {{cplx(0.5, 0.0)}, {cplx(0.0, 0.6)}, {cplx(-0.4, -0.3)}, {cplx(0.7, 0.2)}});
    auto rule = adapted_rule(s.domain(), s.points());
    std::vector<cplx> mu{1.0, cplx(0.0, -2.0), 0.5, cplx(1.0, 1.0)};
    const double q = 4.0;
    auto d = carleson_constant(s, q, rule);
    auto rep = weak_from_carleson_check(s, q, mu, *rule, d.value);
    CHECK(rep.holds);
    CHECK(rep.supplied_sufficient);
    CHECK(rep.left > 0.0);
    CHECK(rep.left <= rep.middle * (1 + 1e-12));
    CHECK(rep.middle <= rep.right * (1 + 1e-10));
    CHECK(rep.sweep.method == "exact");

    // Middle term against a per-node brute force.
    auto t = normalized_kernel_columns(s, q, *rule);
    double direct = 0.0;
    for (std::uint64_t k = 0; k < 16; ++k) {
        double integral = 0.0;
        for (std::size_t j = 0; j < rule->size(); ++j) {
            cplx v = 0.0;
            for (int a = 0; a < 4; ++a)
                v += ((k >> a) & 1u ? -1.0 : 1.0) * mu[a] * t(static_cast<Eigen::Index>(j), a);
            integral += rule->weights[j] * std::pow(std::abs(v), q);
        }
        direct += integral / 16.0;
    }
    CHECK(rep.middle == doctest::Approx(direct).epsilon(1e-12));

    // An undersized constant is flagged but replaced by the observed one.
    auto low = weak_from_carleson_check(s, q, mu, *rule, 0.5);
    CHECK_FALSE(low.supplied_sufficient);
    CHECK(low.holds);
    CHECK(low.constant_effective > 0.5);
}
