#include "hardy/random_signs.hpp"

#include <bit>
#include <cmath>

#include "hardy/rng.hpp"
#include "hardy/sequences.hpp"
#include "hardy/simd.hpp"

namespace hardy {

namespace {

template <class T>
T pairwise(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() == 1) return v[0];
    const std::size_t h = v.size() / 2;
    return pairwise(v.first(h)) + pairwise(v.subspan(h));
}

bool use_exact(int n, const ExpectOptions& opts) {
    require(n >= 1, ErrorKind::Parameter, "sign expectation needs n >= 1");
    switch (opts.method) {
        case ExpectMethod::Exact:
            require(n <= kExactSignCap, ErrorKind::Capacity,
                    "exact enumeration is capped at n = " + std::to_string(kExactSignCap) +
                        ", got " + std::to_string(n));
            return true;
        case ExpectMethod::MonteCarlo: break;
        case ExpectMethod::Auto:
            if (n <= kExactSignCap) return true;
            break;
    }
    require(opts.seed.has_value(), ErrorKind::Parameter, "Monte Carlo expectations need a seed");
    require(opts.samples >= 1, ErrorKind::Parameter, "Monte Carlo needs at least one sample");
    return false;
}

// Pattern number i of a Monte Carlo run; chunks of 1024 share a generator.
void draw_pattern(std::uint64_t seed, std::uint64_t i, std::mt19937_64& rng,
                  std::vector<int>& eps) {
    if (i % 1024 == 0) rng = sub_generator(seed, i / 1024);
    std::uint64_t bits = 0;
    for (std::size_t a = 0; a < eps.size(); ++a) {
        if (a % 64 == 0) bits = rng();
        eps[a] = (bits >> (a % 64)) & 1u ? -1 : 1;
    }
}

}  // namespace

void PairwiseMean::add(double v) {
    current_ += v;
    ++count_;
    if (++in_chunk_ == kChunk) {
        chunks_.push_back(current_);
        current_ = 0.0;
        in_chunk_ = 0;
    }
}

double PairwiseMean::sum() const {
    std::vector<double> all = chunks_;
    if (in_chunk_) all.push_back(current_);
    return pairwise<double>(all);
}

void PairwiseVectorMean::add(std::span<const cplx> v) {
    require(v.size() == current_.size(), ErrorKind::Shape, "vector mean length mismatch");
    for (std::size_t i = 0; i < v.size(); ++i) current_[i] += v[i];
    ++count_;
    if (++in_chunk_ == kChunk) {
        chunks_.push_back(current_);
        std::fill(current_.begin(), current_.end(), 0.0);
        in_chunk_ = 0;
    }
}

std::vector<cplx> PairwiseVectorMean::mean() const {
    std::vector<cplx> out(current_.size());
    std::vector<cplx> col;
    for (std::size_t i = 0; i < out.size(); ++i) {
        col.clear();
        for (const auto& c : chunks_) col.push_back(c[i]);
        if (in_chunk_) col.push_back(current_[i]);
        out[i] = count_ ? pairwise<cplx>(col) / static_cast<double>(count_) : cplx(0.0);
    }
    return out;
}

ExpectationEstimate expect(const std::function<double(std::span<const int>)>& f, int n,
                           const ExpectOptions& opts) {
    ExpectationEstimate est;
    std::vector<int> eps(n);
    if (use_exact(n, opts)) {
        PairwiseMean mean;
        const std::uint64_t total = std::uint64_t{1} << n;
        for (std::uint64_t k = 0; k < total; ++k) {
            for (int a = 0; a < n; ++a) eps[a] = (k >> a) & 1u ? -1 : 1;
            mean.add(f(eps));
        }
        est.value = mean.mean();
        est.method = "exact";
        est.samples = total;
        return est;
    }
    PairwiseMean mean, squares;
    std::mt19937_64 rng;
    for (std::uint64_t i = 0; i < opts.samples; ++i) {
        draw_pattern(*opts.seed, i, rng, eps);
        const double v = f(eps);
        mean.add(v);
        squares.add(v * v);
    }
    const double m = mean.mean();
    const double n_s = static_cast<double>(opts.samples);
    const double var = opts.samples > 1
                           ? std::max(0.0, (squares.sum() - n_s * m * m) / (n_s - 1.0))
                           : 0.0;
    est.value = m;
    est.method = "monte-carlo";
    est.stderr_value = std::sqrt(var / n_s);
    est.samples = opts.samples;
    est.seed = opts.seed;
    return est;
}

SignSweep for_each_sign_sum(
    std::span<const std::vector<cplx>> x, const ExpectOptions& opts,
    const std::function<void(std::span<const int>, std::span<const cplx>)>& visit) {
    const int n = static_cast<int>(x.size());
    const bool exact = use_exact(n, opts);
    const std::size_t m = x[0].size();
    for (const auto& v : x) require(v.size() == m, ErrorKind::Shape, "sign sum vectors differ in length");
    std::vector<int> eps(n, 1);
    std::vector<cplx> sum(m);
    auto recompute = [&] {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (int a = 0; a < n; ++a) simd::axpy(eps[a], x[a], sum);
    };
    SignSweep sweep;
    if (exact) {
        const std::uint64_t total = std::uint64_t{1} << n;
        recompute();
        visit(eps, sum);
        for (std::uint64_t k = 1; k < total; ++k) {
            const int a = std::countr_zero(k);
            eps[a] = -eps[a];
            if (k % 1024 == 0) recompute();
            else simd::axpy(2.0 * eps[a], x[a], sum);
            visit(eps, sum);
        }
        sweep.method = "exact";
        sweep.patterns = total;
        return sweep;
    }
    std::mt19937_64 rng;
    for (std::uint64_t i = 0; i < opts.samples; ++i) {
        draw_pattern(*opts.seed, i, rng, eps);
        recompute();
        visit(eps, sum);
    }
    sweep.method = "monte-carlo";
    sweep.patterns = opts.samples;
    sweep.seed = opts.seed;
    return sweep;
}

KhintchineResult khintchine_ratio(std::span<const cplx> x, double q, const ExpectOptions& opts) {
    require(q >= 1.0 && std::isfinite(q), ErrorKind::Parameter, "Khintchine exponent must be in [1, inf)");
    double l2 = 0.0;
    for (cplx c : x) l2 += std::norm(c);
    require(!x.empty() && l2 > 0.0, ErrorKind::Parameter, "Khintchine ratio of a zero vector");
    const std::vector<cplx> xs(x.begin(), x.end());
    auto f = [&](std::span<const int> eps) {
        cplx s = 0.0;
        for (std::size_t a = 0; a < xs.size(); ++a) s += static_cast<double>(eps[a]) * xs[a];
        return q == 2.0 ? std::norm(s) : std::pow(std::abs(s), q);
    };
    KhintchineResult out;
    out.expectation = expect(f, static_cast<int>(x.size()), opts);
    out.ratio = out.expectation.value / std::pow(l2, q / 2.0);
    return out;
}

WeakChainReport weak_from_carleson_check(const PointSequence& s, double q, std::span<const cplx> mu,
                                         const QuadratureRule& rule, double d_q,
                                         const ExpectOptions& opts) {
    require(q >= 2.0 && std::isfinite(q), ErrorKind::Parameter, "weak Carleson chain needs 2 <= q < inf");
    require(mu.size() == s.size(), ErrorKind::Shape, "mu has the wrong length");
    const Eigen::MatrixXcd t = normalized_kernel_columns(s, q, rule);
    const std::size_t m = rule.size();
    std::vector<std::vector<cplx>> x(s.size(), std::vector<cplx>(m));
    std::vector<cplx> sq(m, 0.0);
    double mu_q = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) {
        mu_q += std::pow(std::abs(mu[a]), q);
        for (std::size_t j = 0; j < m; ++j) {
            const cplx v = mu[a] * t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a));
            x[a][j] = v;
            sq[j] += std::norm(v);
        }
    }
    require(mu_q > 0.0, ErrorKind::Parameter, "mu must be nonzero");

    WeakChainReport rep;
    rep.q = q;
    rep.left = simd::weighted_abs_pow_sum(rule.weights, sq, q / 2.0);
    PairwiseMean mean, squares;
    double best = 0.0;
    rep.sweep = for_each_sign_sum(x, opts, [&](std::span<const int>, std::span<const cplx> sum) {
        const double v = simd::weighted_abs_pow_sum(rule.weights, sum, q);
        mean.add(v);
        squares.add(v * v);
        best = std::max(best, v);
    });
    rep.middle = mean.mean();
    if (rep.sweep.method == "monte-carlo") {
        const double n = static_cast<double>(mean.count());
        const double var = std::max(0.0, (squares.sum() - n * rep.middle * rep.middle) / std::max(1.0, n - 1.0));
        rep.stderr_value = std::sqrt(var / n);
    }
    rep.constant_supplied = d_q;
    rep.right = std::pow(d_q, q) * mu_q;
    rep.constant_effective = std::max(d_q, std::pow(best / mu_q, 1.0 / q));
    rep.khintchine_factor = rep.middle / rep.left;
    rep.carleson_factor = rep.middle / rep.right;
    const double slack = 1e-10 * rep.middle + 4.0 * rep.stderr_value;
    rep.supplied_sufficient = rep.middle <= rep.right + slack;
    rep.holds = rep.middle <= std::pow(rep.constant_effective, q) * mu_q + slack &&
                std::isfinite(rep.khintchine_factor) && rep.khintchine_factor > 0.0;
    return rep;
}

}  // namespace hardy
