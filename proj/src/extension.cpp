#include "hardy/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hardy/rng.hpp"
#include "hardy/simd.hpp"

namespace hardy {

namespace {

constexpr double kRel = 1e-8;

double pow_integral(const QuadratureRule& rule, std::span<const cplx> v, double p) {
    return std::isinf(p) ? simd::max_abs(v) : simd::weighted_abs_pow_sum(rule.weights, v, p);
}

// Mean of the values plus 4 standard errors (MC) or the mean itself (exact).
struct Moments {
    PairwiseMean mean;
    PairwiseMean squares;
    double max = 0.0;

    void add(double v) {
        mean.add(v);
        squares.add(v * v);
        max = std::max(max, v);
    }
    double upper(bool mc) const {
        const double m = mean.mean();
        if (!mc) return m;
        const double n = static_cast<double>(mean.count());
        const double var = std::max(0.0, (squares.sum() - n * m * m) / std::max(1.0, n - 1.0));
        return m + 4.0 * std::sqrt(var / n);
    }
};

}  // namespace

double split_exponent(double s, double p) { return dual_exponent_for_split(s, p); }

SplitData split_target(std::span<const cplx> nu, double s, double p) {
    require(s >= 1.0 && s < p, ErrorKind::Parameter,
            "split needs 1 <= s < p, got s=" + exponent_label(s) + " p=" + exponent_label(p));
    require(!nu.empty(), ErrorKind::Parameter, "split of an empty target");
    SplitData out;
    out.s = s;
    out.p = p;
    out.q = split_exponent(s, p);
    out.nu.assign(nu.begin(), nu.end());
    for (cplx v : nu) {
        const double r = std::abs(v);
        if (r == 0.0) {
            out.lambda.push_back(0.0);
            out.mu.push_back(0.0);
            continue;
        }
        const cplx sgn = v / r;
        if (std::isinf(p)) {
            out.lambda.push_back(sgn);
            out.mu.push_back(r);
        } else {
            out.lambda.push_back(sgn * std::pow(r, s / p));
            out.mu.push_back(std::pow(r, s / out.q));
        }
    }
    return out;
}

double vector_norm(std::span<const cplx> v, double p) {
    double acc = 0.0;
    for (cplx c : v) acc = std::isinf(p) ? std::max(acc, std::abs(c)) : acc + std::pow(std::abs(c), p);
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

double vector_norm(std::span<const double> v, double p) {
    std::vector<cplx> c(v.begin(), v.end());
    return vector_norm(c, p);
}

ExtensionCoeffs coeff_c(const PointSequence& s, double s_exp, double p,
                        std::span<const NormTable> tables, std::optional<double> budget) {
    require(tables.size() == s.size(), ErrorKind::Shape, "one norm table per point is needed");
    const double q = split_exponent(s_exp, p);
    ExtensionCoeffs out;
    out.budget = budget;
    for (std::size_t a = 0; a < s.size(); ++a) {
        const NormTable& t = tables[a];
        const double target = std::isinf(p) ? 1.0 : t.norm(conjugate_exponent(p));
        require(t.diagonal > 0.0, ErrorKind::Invariant, "kernel diagonal must be positive");
        const double c = t.norm(conjugate_exponent(s_exp)) * t.norm(q) / (target * t.diagonal);
        out.c.push_back(c);
        out.max_c = std::max(out.max_c, c);
    }
    if (budget) out.within_budget = out.max_c <= *budget * (1.0 + kRel);
    return out;
}

BudgetReport extension_budget(NormEngine& engine, const PointSequence& s, double s_exp, double p) {
    BudgetReport out;
    const double q = split_exponent(s_exp, p);
    std::vector<Point> grid = s.points();
    grid.push_back(Point(static_cast<std::size_t>(s.domain().dim()), 0.0));
    if (q > 1.0 && !std::isinf(q)) {
        out.alpha_scan = sh_q_scan(engine, q, grid);
        out.alpha = out.alpha_scan.alpha;
        for (const auto& w : out.alpha_scan.warnings) out.warnings.push_back(w);
    } else {
        out.warnings.push_back("alpha skipped: SH(q) needs 1 < q < inf, q=" + exponent_label(q));
    }
    out.beta_scan = sh_ps_scan(engine, p, s_exp, grid);
    out.beta = out.beta_scan.beta;
    for (const auto& w : out.beta_scan.warnings) out.warnings.push_back(w);
    if (out.alpha && out.beta) {
        // With unit dual targets at p = inf, c_a = 1/alpha_a exactly.
        out.value = std::isinf(p) ? 1.0 / *out.alpha : *out.beta / *out.alpha;
    }
    return out;
}

ExtensionContext make_extension_context(const PointSequence& s, const DualSystem& dual,
                                        double s_exp, double p, NormEngine& engine,
                                        RulePtr rule) {
    require(dual.p == p || (std::isinf(dual.p) && std::isinf(p)), ErrorKind::Contract,
            "dual system exponent " + exponent_label(dual.p) + " differs from p=" + exponent_label(p));
    require(dual.points == s.points(), ErrorKind::Contract, "dual system was built for other points");
    require(engine.domain() == s.domain() && rule->domain == s.domain(), ErrorKind::Contract,
            "engine, rule and sequence domains differ");
    ExtensionContext ctx(s, dual);
    ctx.s = s_exp;
    ctx.p = p;
    ctx.q = split_exponent(s_exp, p);
    ctx.rule = rule;
    std::vector<double> exps{conjugate_exponent(s_exp), ctx.q};
    if (!std::isinf(p)) exps.push_back(conjugate_exponent(p));
    for (const Point& a : s.points()) ctx.tables.push_back(engine.table(a, exps));
    ctx.budget = extension_budget(engine, s, s_exp, p);
    ctx.coeffs = coeff_c(s, s_exp, p, ctx.tables, ctx.budget.value);
    for (std::size_t a = 0; a < s.size(); ++a) {
        ctx.norm_q.push_back(ctx.tables[a].norm(ctx.q));
        ctx.norm_s_dual.push_back(ctx.tables[a].norm(conjugate_exponent(s_exp)));
        auto k = kernel_samples(s[a], *rule);
        for (cplx& v : k) v /= ctx.norm_q[a];
        auto r = dual.samples(a, *rule);
        std::vector<cplx> pa(k.size());
        for (std::size_t j = 0; j < k.size(); ++j) pa[j] = ctx.coeffs.c[a] * r[j] * k[j];
        ctx.kq.push_back(std::move(k));
        ctx.rho.push_back(std::move(r));
        ctx.P.push_back(std::move(pa));
    }
    return ctx;
}

cplx extension_eval(const ExtensionContext& ctx, std::span<const cplx> nu, const Point& z) {
    require(nu.size() == ctx.seq.size(), ErrorKind::Shape, "target has the wrong length");
    cplx h = 0.0;
    for (std::size_t a = 0; a < nu.size(); ++a) {
        if (nu[a] == 0.0) continue;
        h += nu[a] * ctx.coeffs.c[a] * ctx.dual.eval(a, z) *
             kernel_eval(ctx.seq.domain(), ctx.seq[a], z) / ctx.norm_q[a];
    }
    return h;
}

HoloExpr extension_expr(const ExtensionContext& ctx, std::span<const cplx> nu) {
    require(nu.size() == ctx.seq.size(), ErrorKind::Shape, "target has the wrong length");
    HoloExpr h(ctx.seq.domain());
    for (std::size_t a = 0; a < nu.size(); ++a) {
        if (nu[a] == 0.0) continue;
        const cplx coeff = nu[a] * ctx.coeffs.c[a] / ctx.norm_q[a];
        h += coeff * (ctx.dual.expr(a) * HoloExpr::kernel(ctx.seq.domain(), ctx.seq[a]));
    }
    return h;
}

std::vector<cplx> extension_samples(const ExtensionContext& ctx, std::span<const cplx> nu) {
    require(nu.size() == ctx.seq.size(), ErrorKind::Shape, "target has the wrong length");
    std::vector<cplx> h(ctx.rule->size(), 0.0);
    for (std::size_t a = 0; a < nu.size(); ++a) {
        const cplx w = nu[a];
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < h.size(); ++j) h[j] += w * ctx.P[a][j];
    }
    return h;
}

ExtensionResult build_extension(const ExtensionContext& ctx, std::span<const cplx> nu) {
    ExtensionResult out;
    out.h = extension_expr(ctx, nu);
    double scale = 0.0;
    double worst = 0.0;
    for (std::size_t a = 0; a < nu.size(); ++a) {
        const cplx want = nu[a] * ctx.norm_s_dual[a];
        const double r = std::abs(extension_eval(ctx, nu, ctx.seq[a]) - want);
        out.residuals.push_back(r);
        worst = std::max(worst, r);
        scale = std::max(scale, std::abs(want));
    }
    out.relative_residual = scale > 0.0 ? worst / scale : worst;
    out.norm_s = lp_norm(*ctx.rule, extension_samples(ctx, nu), ctx.s);
    const double nn = vector_norm(nu, ctx.s);
    out.norm_ratio = nn > 0.0 ? out.norm_s / nn : 0.0;
    return out;
}

LinearityReport linearity_check(const ExtensionContext& ctx, std::span<const cplx> nu1,
                                std::span<const cplx> nu2, cplx c, std::span<const Point> points) {
    require(nu1.size() == nu2.size(), ErrorKind::Shape, "targets differ in length");
    std::vector<cplx> sum(nu1.size()), scaled(nu1.size());
    for (std::size_t a = 0; a < nu1.size(); ++a) {
        sum[a] = nu1[a] + nu2[a];
        scaled[a] = c * nu1[a];
    }
    LinearityReport out;
    for (const Point& z : points) {
        const cplx h1 = extension_eval(ctx, nu1, z);
        const cplx h2 = extension_eval(ctx, nu2, z);
        const cplx hs = extension_eval(ctx, sum, z);
        const cplx hc = extension_eval(ctx, scaled, z);
        out.additivity = std::max(out.additivity, std::abs(hs - h1 - h2) / (1.0 + std::abs(hs)));
        out.homogeneity = std::max(out.homogeneity, std::abs(hc - c * h1) / (1.0 + std::abs(hc)));
    }
    return out;
}

std::vector<Point> test_panel(const Domain& domain, int interior, int boundary, std::uint64_t seed) {
    auto rng = sub_generator(seed, 0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss;
    const int n = domain.dim();
    auto on_sphere = [&] {
        Point z(n);
        if (domain.kind() == DomainKind::Bidisc) {
            for (auto& c : z) c = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
            return z;
        }
        double r2 = 0.0;
        for (auto& c : z) {
            c = {gauss(rng), gauss(rng)};
            r2 += std::norm(c);
        }
        for (auto& c : z) c /= std::sqrt(r2);
        return z;
    };
    std::vector<Point> out;
    for (int i = 0; i < interior; ++i) {
        Point z = on_sphere();
        const double r = 0.9 * unit(rng);
        for (auto& c : z) c *= r;
        out.push_back(z);
    }
    for (int i = 0; i < boundary; ++i) out.push_back(on_sphere());
    return out;
}

namespace {

std::vector<cplx> random_sphere_target(std::mt19937_64& rng, std::size_t n, double s) {
    std::normal_distribution<double> g;
    std::vector<cplx> nu(n);
    for (auto& v : nu) v = {g(rng), g(rng)};
    const double r = vector_norm(nu, s);
    for (auto& v : nu) v /= r;
    return nu;
}

struct HolderSweep {
    HolderCheck check;
    double f_ratio = 0.0;  // sign factor for f, see NormBoundReport::f_factor
    double g_max = 0.0;    // max over patterns of int|g|^q / ||mu||_q^q
    std::string method;
    std::uint64_t patterns = 0;
};

HolderSweep holder_sweep(const ExtensionContext& ctx, std::span<const cplx> nu,
                         std::span<const double> rho_p, const ExpectOptions& opts) {
    const SplitData split = split_target(nu, ctx.s, ctx.p);
    const std::size_t m = ctx.rule->size();
    const std::size_t n = ctx.seq.size();
    std::vector<std::vector<cplx>> x(n, std::vector<cplx>(2 * m));
    for (std::size_t a = 0; a < n; ++a) {
        const cplx lf = split.lambda[a] * ctx.coeffs.c[a];
        for (std::size_t j = 0; j < m; ++j) {
            x[a][j] = lf * ctx.rho[a][j];
            x[a][m + j] = split.mu[a] * ctx.kq[a][j];
        }
    }
    const bool inf_p = std::isinf(ctx.p);
    Moments fm, gm;
    HolderSweep out;
    auto sweep = for_each_sign_sum(x, opts, [&](std::span<const int>, std::span<const cplx> sum) {
        fm.add(pow_integral(*ctx.rule, sum.first(m), ctx.p));
        gm.add(simd::weighted_abs_pow_sum(ctx.rule->weights, sum.subspan(m), ctx.q));
    });
    const bool mc = sweep.method == "monte-carlo";
    out.method = sweep.method;
    out.patterns = sweep.patterns;

    HolderCheck& hc = out.check;
    hc.norm_h = lp_norm(*ctx.rule, extension_samples(ctx, nu), ctx.s);
    hc.norm_nu = vector_norm(nu, ctx.s);
    const double g_part = std::pow(gm.mean.mean(), 1.0 / ctx.q);
    const double g_upper = std::pow(gm.upper(mc), 1.0 / ctx.q);
    if (inf_p) {
        hc.budget = fm.max * g_part;
        hc.budget_upper = fm.max * g_upper;
    } else {
        hc.budget = std::pow(fm.mean.mean(), 1.0 / ctx.p) * g_part;
        hc.budget_upper = std::pow(fm.upper(mc), 1.0 / ctx.p) * g_upper;
    }
    hc.holds = hc.norm_h <= hc.budget_upper * (1.0 + kRel);

    const double mu_q = std::pow(vector_norm(split.mu, ctx.q), ctx.q);
    out.g_max = mu_q > 0.0 ? gm.max / mu_q : 0.0;
    if (inf_p) {
        double rho_sup = 0.0;
        for (double r : rho_p) rho_sup = std::max(rho_sup, r);
        const double denom = ctx.coeffs.max_c * rho_sup * vector_norm(split.lambda, kInf);
        out.f_ratio = denom > 0.0 ? fm.max / denom : 0.0;
    } else {
        double denom = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            denom += std::pow(std::abs(split.lambda[a]) * ctx.coeffs.c[a] * rho_p[a], ctx.p);
        out.f_ratio = denom > 0.0 ? fm.upper(mc) / denom : 0.0;
    }
    return out;
}

}  // namespace

NormBoundReport verify_norm_bound(const ExtensionContext& ctx, int batch, std::uint64_t seed,
                                  const ExpectOptions& opts_in) {
    require(batch >= 1, ErrorKind::Parameter, "batch must be >= 1");
    ExpectOptions opts = opts_in;
    if (!opts.seed) opts.seed = seed;
    const std::size_t n = ctx.seq.size();
    NormBoundReport rep;
    rep.batch = static_cast<std::uint64_t>(batch);
    rep.seed = seed;

    std::vector<std::vector<cplx>> targets;
    auto rng = sub_generator(seed, 1);
    for (int i = 0; i < batch; ++i) targets.push_back(random_sphere_target(rng, n, ctx.s));
    std::size_t farthest = 0;
    double rmax = -1.0;
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<cplx> e(n, 0.0);
        e[a] = 1.0;
        targets.push_back(e);
        double r = 0.0;
        for (cplx c : ctx.seq[a]) r += std::norm(c);
        if (r > rmax) {
            rmax = r;
            farthest = a;
        }
    }

    std::vector<double> rho_p(n);
    for (std::size_t a = 0; a < n; ++a) rho_p[a] = lp_norm(*ctx.rule, ctx.rho[a], ctx.p);
    rep.rho_bound = *std::max_element(rho_p.begin(), rho_p.end());

    const CarlesonReport d = carleson_constant(ctx.seq, ctx.q, ctx.rule, CarlesonOptions{32, seed});
    rep.d_q = d.value;
    rep.d_q_method = d.method;

    double g_max = 0.0;
    rep.min_unit_ratio = kInf;
    for (std::size_t t = 0; t < targets.size(); ++t) {
        HolderSweep hs = holder_sweep(ctx, targets[t], rho_p, opts);
        const double ratio = hs.check.norm_h / hs.check.norm_nu;
        rep.ratios.push_back(ratio);
        if (ratio > rep.c_i_estimate) {
            rep.c_i_estimate = ratio;
            rep.c_i_argmax = t;
        }
        if (t >= static_cast<std::size_t>(batch)) {
            rep.min_unit_ratio = std::min(rep.min_unit_ratio, ratio);
            if (t - batch == farthest) rep.farthest_unit_ratio = ratio;
        }
        rep.holder_holds = rep.holder_holds && hs.check.holds;
        rep.worst_holder_ratio = std::max(rep.worst_holder_ratio, hs.check.norm_h / hs.check.budget_upper);
        rep.f_factor = std::max(rep.f_factor, hs.f_ratio);
        g_max = std::max(g_max, hs.g_max);
        rep.sweep_method = hs.method;
        rep.patterns = hs.patterns;
        rep.holder.push_back(hs.check);
    }

    rep.d_q_effective = std::max(rep.d_q, std::pow(g_max, 1.0 / ctx.q));
    rep.coefficient_bound = ctx.coeffs.max_c;
    if (ctx.coeffs.budget) rep.coefficient_bound = std::max(rep.coefficient_bound, *ctx.coeffs.budget);
    const double f_part = std::isinf(ctx.p) ? rep.f_factor : std::pow(rep.f_factor, 1.0 / ctx.p);
    rep.constant_budget = rep.coefficient_bound * rep.rho_bound * f_part * rep.d_q_effective;
    rep.budget_holds = rep.c_i_estimate <= rep.constant_budget * (1.0 + kRel);
    if (!ctx.coeffs.within_budget)
        rep.warnings.push_back("max c_a exceeds the alpha^-1 beta budget on this instance");
    if (rep.d_q_effective > rep.d_q * (1.0 + 1e-12))
        rep.warnings.push_back("observed Carleson ratio exceeds the computed D_q; using the observed value");

    const auto& worst = targets[rep.c_i_argmax];
    try {
        const RulePtr fine = refined_rule(*ctx.rule);
        const double coarse = lp_norm(*ctx.rule, extension_samples(ctx, worst), ctx.s);
        const double finer = lp_norm(*fine, extension_expr(ctx, worst).samples(*fine), ctx.s);
        rep.quadrature_residual = std::abs(coarse - finer) / finer;
    } catch (const Error& e) {
        rep.quadrature_residual = std::numeric_limits<double>::quiet_NaN();
        rep.warnings.push_back(std::string("quadrature residual unavailable: ") + e.what());
    }
    return rep;
}

FactorizationReport randomized_factorization(const ExtensionContext& ctx, const SplitData& split,
                                             std::span<const Point> points) {
    const std::size_t n = ctx.seq.size();
    require(split.lambda.size() == n, ErrorKind::Shape, "split has the wrong length");
    require(split.s == ctx.s && split.p == ctx.p, ErrorKind::Contract, "split exponents differ from the extension");
    const std::size_t m = points.size();
    std::vector<std::vector<cplx>> x(n, std::vector<cplx>(2 * m));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t j = 0; j < m; ++j) {
            x[a][j] = split.lambda[a] * ctx.coeffs.c[a] * ctx.dual.eval(a, points[j]);
            x[a][m + j] = split.mu[a] * kernel_eval(ctx.seq.domain(), ctx.seq[a], points[j]) / ctx.norm_q[a];
        }
    }
    ExpectOptions exact;
    exact.method = ExpectMethod::Exact;
    PairwiseVectorMean mean(m);
    std::vector<cplx> prod(m);
    auto sweep = for_each_sign_sum(x, exact, [&](std::span<const int>, std::span<const cplx> sum) {
        for (std::size_t j = 0; j < m; ++j) prod[j] = sum[j] * sum[m + j];
        mean.add(prod);
    });
    const auto e = mean.mean();
    FactorizationReport rep;
    rep.points = m;
    rep.patterns = sweep.patterns;
    for (std::size_t j = 0; j < m; ++j) {
        const cplx h = extension_eval(ctx, split.nu, points[j]);
        rep.max_error = std::max(rep.max_error, std::abs(h - e[j]) / (1.0 + std::abs(h)));
    }
    return rep;
}

namespace {

struct SignMoments {
    double expectation = 0.0;
    double square_function = 0.0;  // int (sum |x_a|^2)^(p/2)
    std::size_t violations = 0;
    std::string method;
};

// E int |sum eps_a x_a|^p together with the square-function integral and the
// pointwise l^2 <= l^p comparison.
SignMoments sign_moments(const std::vector<std::vector<cplx>>& x, const QuadratureRule& rule,
                         double p, const ExpectOptions& opts) {
    const std::size_t m = rule.size();
    std::vector<double> sq(m, 0.0), lp(m, 0.0);
    for (const auto& v : x) {
        for (std::size_t j = 0; j < m; ++j) {
            sq[j] += std::norm(v[j]);
            lp[j] += std::pow(std::abs(v[j]), p);
        }
    }
    SignMoments out;
    for (std::size_t j = 0; j < m; ++j) {
        if (std::sqrt(sq[j]) > std::pow(lp[j], 1.0 / p) * (1.0 + 1e-12)) ++out.violations;
    }
    out.square_function = simd::weighted_pow_sum_real(rule.weights, sq, p / 2.0);
    PairwiseMean mean;
    auto sweep = for_each_sign_sum(x, opts, [&](std::span<const int>, std::span<const cplx> sum) {
        mean.add(simd::weighted_abs_pow_sum(rule.weights, sum, p));
    });
    out.expectation = mean.mean();
    out.method = sweep.method;
    return out;
}

}  // namespace

ExpectationBoundReport dual_expectation_bound_p_le_2(const DualSystem& dual, std::span<const cplx> lambda,
                                                     const QuadratureRule& rule,
                                                     const ExpectOptions& opts) {
    const double p = dual.p;
    require(p >= 1.0 && p <= 2.0, ErrorKind::Parameter, "this route needs 1 <= p <= 2, got p=" + exponent_label(p));
    require(lambda.size() == dual.size(), ErrorKind::Shape, "lambda has the wrong length");
    const double lam_p = std::pow(vector_norm(lambda, p), p);
    require(lam_p > 0.0, ErrorKind::Parameter, "lambda must be nonzero");
    ExpectationBoundReport rep;
    rep.p = p;
    std::vector<std::vector<cplx>> x;
    double rho_sup = 0.0, orth = 0.0;
    for (std::size_t a = 0; a < dual.size(); ++a) {
        auto r = dual.samples(a, rule);
        const double rp = simd::weighted_abs_pow_sum(rule.weights, r, p);
        rho_sup = std::max(rho_sup, rp);
        orth += std::norm(lambda[a]) * simd::weighted_abs_pow_sum(rule.weights, r, 2.0);
        for (auto& v : r) v *= lambda[a];
        x.push_back(std::move(r));
    }
    const SignMoments sm = sign_moments(x, rule, p, opts);
    rep.expectation = sm.expectation;
    rep.ratio = sm.expectation / lam_p;
    rep.khintchine_factor = sm.expectation / sm.square_function;
    rep.rho_bound = std::pow(rho_sup, 1.0 / p);
    rep.bound = rep.khintchine_factor * rho_sup;
    rep.nodes = rule.size();
    rep.pointwise_violations = sm.violations;
    rep.holds = rep.ratio <= rep.bound * (1.0 + 1e-10) && sm.violations == 0;
    if (p == 2.0) rep.orthogonality_residual = std::abs(sm.expectation - orth) / sm.expectation;
    rep.sweep_method = sm.method;
    return rep;
}

ExpectationBoundReport dual_expectation_bound_infty(const PointSequence& s, const DualSystem& dual,
                                                    double p, std::span<const cplx> lambda,
                                                    const RulePtr& rule, const ExpectOptions& opts) {
    require(s.domain().kind() == DomainKind::Disc && dual.method == DualMethod::Blaschke,
            ErrorKind::Unsupported, "the p = inf route needs a disc Blaschke system");
    require(std::isinf(dual.p), ErrorKind::Contract, "the p = inf route needs a dual system for p = inf");
    require(dual.points == s.points(), ErrorKind::Contract, "dual system was built for other points");
    require(p >= 2.0 && !std::isinf(p), ErrorKind::Parameter, "the weak-Carleson step needs 2 <= p < inf");
    require(lambda.size() == s.size(), ErrorKind::Shape, "lambda has the wrong length");
    const double lam_p = std::pow(vector_norm(lambda, p), p);
    require(lam_p > 0.0, ErrorKind::Parameter, "lambda must be nonzero");

    ExpectationBoundReport rep;
    rep.p = p;
    double c_sup = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) c_sup = std::max(c_sup, blaschke_sup_norm(dual, a));
    rep.rho_bound = c_sup;

    // Columns k_{p,a} normalized on the rule, as in the weak-Carleson solver.
    const Eigen::MatrixXcd t = normalized_kernel_columns(s, p, *rule);
    const std::size_t m = rule->size();
    std::vector<std::vector<cplx>> x;
    std::vector<double> dom(m, 0.0);
    for (std::size_t a = 0; a < s.size(); ++a) {
        const auto r = dual.samples(a, *rule);
        std::vector<cplx> rp(m);
        for (std::size_t j = 0; j < m; ++j) {
            const cplx k = t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a));
            rp[j] = r[j] * k;
            if (std::abs(rp[j]) > c_sup * std::abs(k) * (1.0 + 1e-12)) ++rep.pointwise_violations;
            dom[j] += std::norm(lambda[a] * k);
        }
        const double norm = lp_norm(*rule, rp, p);
        rep.max_rho_p_norm = std::max(rep.max_rho_p_norm, norm);
        for (auto& v : rp) v *= lambda[a];
        x.push_back(std::move(rp));
    }
    rep.rho_p_norm_holds = rep.max_rho_p_norm <= c_sup * (1.0 + kRel);

    const SignMoments sm = sign_moments(x, *rule, p, opts);
    rep.expectation = sm.expectation;
    rep.ratio = sm.expectation / lam_p;
    rep.khintchine_factor = sm.expectation / sm.square_function;
    rep.nodes = m;

    const CarlesonReport w = weak_carleson_constant(s, p, rule);
    rep.weak_constant = w.value;
    const double instance = std::pow(simd::weighted_pow_sum_real(rule->weights, dom, p / 2.0) / lam_p, 2.0 / p);
    rep.weak_constant_effective = std::max(w.value, instance);
    rep.bound = rep.khintchine_factor * std::pow(c_sup, p) * std::pow(rep.weak_constant_effective, p / 2.0);
    rep.holds = rep.ratio <= rep.bound * (1.0 + 1e-10) && rep.rho_p_norm_holds && rep.pointwise_violations == 0;
    rep.sweep_method = sm.method;
    return rep;
}

TypeReport type_p_bound_check(const DualSystem& dual, std::span<const cplx> lambda,
                              const QuadratureRule& rule, const ExpectOptions& opts) {
    const double p = dual.p;
    require(p >= 1.0 && p <= 2.0, ErrorKind::Parameter, "type-p check needs 1 <= p <= 2, got p=" + exponent_label(p));
    require(lambda.size() == dual.size(), ErrorKind::Shape, "lambda has the wrong length");
    std::vector<std::vector<cplx>> x;
    TypeReport rep;
    for (std::size_t a = 0; a < dual.size(); ++a) {
        auto r = dual.samples(a, rule);
        for (auto& v : r) v *= lambda[a];
        rep.denominator += simd::weighted_abs_pow_sum(rule.weights, r, p);
        x.push_back(std::move(r));
    }
    require(rep.denominator > 0.0, ErrorKind::Parameter, "lambda must be nonzero");
    rep.expectation = sign_moments(x, rule, p, opts).expectation;
    rep.ratio = rep.expectation / rep.denominator;
    return rep;
}

}  // namespace hardy
