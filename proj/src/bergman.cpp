#include "hardy/bergman.hpp"

#include <cmath>

#include "hardy/simd.hpp"

namespace hardy {

namespace {

double pow_mean(const QuadratureRule& rule, std::span<const cplx> v, double p) {
    if (std::isinf(p)) return simd::max_abs(v);
    return std::pow(simd::weighted_abs_pow_sum(rule.weights, v, p), 1.0 / p);
}

std::vector<cplx> evaluate(const Evaluator& f, const QuadratureRule& rule) {
    std::vector<cplx> out(rule.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(rule.node(j));
    return out;
}

NormResult refined_norm(const RefineOptions& opts, double p,
                        const std::function<RulePtr(int)>& rule_at, const Evaluator& f) {
    auto eval = [&](int res) {
        const RulePtr r = rule_at(res);
        return pow_mean(*r, evaluate(f, *r), p);
    };
    const Refinement r = refine(opts, eval);
    NormResult out{r.value, r.resolution, r.residual, r.converged};
    if (std::isinf(p)) out.converged = true;  // node max; not gated
    return out;
}

}  // namespace

Domain BergmanSpec::base() const { return n == 1 ? Domain::disc() : Domain::ball(n); }
Domain BergmanSpec::lifted() const { return Domain::ball(lift_dim()); }

RulePtr build_volume_rule(int n, int k, int radial) {
    require(n >= 1 && k >= 0 && radial >= 1, ErrorKind::Parameter, "volume rule needs n >= 1, k >= 0");
    std::vector<double> r, wr;
    gauss_legendre_unit(radial, r, wr);
    double total = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        wr[i] *= std::pow(r[i], 2 * n - 1) * std::pow(1.0 - r[i] * r[i], k);
        total += wr[i];
    }
    const RulePtr dir = n == 1 ? build_quadrature(Domain::disc(), std::max(4, 2 * radial))
                               : build_sphere_rule(n, {radial, 2 * radial, radial, 2 * radial});
    auto rule = std::make_shared<QuadratureRule>();
    rule->domain = n == 1 ? Domain::disc() : Domain::ball(n);
    rule->resolution = radial;
    rule->volume = true;
    rule->description = "volume GL(|z|)=" + std::to_string(radial) + " x " + dir->description +
                        " weight (1-|z|^2)^" + std::to_string(k);
    rule->coords.assign(n, {});
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t j = 0; j < dir->size(); ++j) {
            for (int d = 0; d < n; ++d) rule->coords[d].push_back(r[i] * dir->coords[d][j]);
            rule->weights.push_back(wr[i] / total * dir->weights[j]);
        }
    }
    return rule;
}

BergmanSpec make_bergman_spec(int n, int k, int radial) {
    require(n >= 1 && k >= 0, ErrorKind::Parameter, "Bergman spec needs n >= 1 and k >= 0");
    require(n + k + 1 <= 8, ErrorKind::Parameter, "lift dimension n + k + 1 is capped at 8");
    BergmanSpec spec;
    spec.n = n;
    spec.k = k;
    spec.radial = radial;
    spec.rule = build_volume_rule(n, k, radial);
    return spec;
}

Evaluator lift(Evaluator f, int n) {
    return [f = std::move(f), n](const Point& z) { return f(Point(z.begin(), z.begin() + n)); };
}

Evaluator restrict_to_base(Evaluator f, int n, int dim) {
    return [f = std::move(f), n, dim](const Point& z) {
        Point full(dim, 0.0);
        std::copy(z.begin(), z.begin() + n, full.begin());
        return f(full);
    };
}

NormResult bergman_norm(const Evaluator& f, double p, const BergmanSpec& spec) {
    require(p >= 1.0, ErrorKind::Parameter, "Bergman norm exponent must be >= 1");
    RefineOptions opts{spec.radial, spec.max_radial, spec.tol};
    return refined_norm(opts, p, [&](int res) {
        return res == spec.radial && spec.rule ? spec.rule : build_volume_rule(spec.n, spec.k, res);
    }, f);
}

NormResult lifted_hardy_norm(const Evaluator& f, double p, const BergmanSpec& spec) {
    require(p >= 1.0, ErrorKind::Parameter, "Hardy norm exponent must be >= 1");
    const int dim = spec.lift_dim();
    const Evaluator g = lift(f, spec.n);
    RefineOptions opts{spec.radial, spec.max_radial, spec.tol};
    // A function of z_1 alone only needs the leading level resolved.
    if (spec.n == 1) {
        return refined_norm(opts, p, [&](int res) {
            return build_sphere_rule(dim, {res, 2 * res, 1, 1, true});
        }, g);
    }
    opts.max = std::min(opts.max, 32);
    return refined_norm(opts, p, [&](int res) {
        return build_sphere_rule(dim, {res, 2 * res, res, 2 * res, true});
    }, g);
}

NormResult hardy_norm(const Evaluator& f, int dim, double p, int start, int max, double tol) {
    require(p >= 1.0, ErrorKind::Parameter, "Hardy norm exponent must be >= 1");
    return refined_norm(RefineOptions{start, max, tol}, p, [&](int res) {
        return dim == 1 ? build_quadrature(Domain::disc(), res)
                        : build_sphere_rule(dim, {res, 2 * res, res, 2 * res, true});
    }, f);
}

SubordinationReport subordination_check(const Evaluator& f, double p, const BergmanSpec& spec) {
    SubordinationReport rep;
    rep.bergman = bergman_norm(f, p, spec);
    rep.hardy = lifted_hardy_norm(f, p, spec);
    const double scale = std::max(std::abs(rep.hardy.value), std::numeric_limits<double>::min());
    rep.residual = std::abs(rep.bergman.value - rep.hardy.value) / scale;
    return rep;
}

cplx bergman_kernel_eval(const Point& a, const Point& z, double p, const BergmanSpec& spec) {
    const Domain base = spec.base();
    base.check_interior(a);
    base.check_interior(z);
    const int m = spec.lift_dim();
    double a2 = 0.0;
    cplx w = 1.0;
    for (int d = 0; d < spec.n; ++d) {
        a2 += std::norm(a[d]);
        w -= z[d] * std::conj(a[d]);
    }
    const double pc = conjugate_exponent(p);
    const double scale = std::isinf(pc) ? 1.0 : std::pow(1.0 - a2, m / pc);
    return scale * std::pow(w, -static_cast<double>(m));
}

namespace {

RulePtr embed_rule(const QuadratureRule& rule, int dim) {
    auto out = std::make_shared<QuadratureRule>(rule);
    out->domain = Domain::ball(dim);
    out->coords.resize(dim, std::vector<cplx>(rule.size(), 0.0));
    return out;
}

Point embed(const Point& a, int dim) {
    Point out(dim, 0.0);
    std::copy(a.begin(), a.end(), out.begin());
    return out;
}

// ||(1 - <z,a>)^-m||_{A^p}; the sup is attained at the boundary point a/|a|.
double bergman_kernel_norm(const Point& a, double p, const BergmanSpec& spec, bool* converged) {
    const int m = spec.lift_dim();
    if (std::isinf(p)) {
        double r = 0.0;
        for (cplx c : a) r += std::norm(c);
        if (converged) *converged = true;
        return std::pow(1.0 - std::sqrt(r), -static_cast<double>(m));
    }
    const Evaluator k = [a, m, n = spec.n](const Point& z) {
        cplx w = 1.0;
        for (int d = 0; d < n; ++d) w -= z[d] * std::conj(a[d]);
        return std::pow(w, -static_cast<double>(m));
    };
    const NormResult r = bergman_norm(k, p, spec);
    if (converged) *converged = r.converged;
    return r.value;
}

}  // namespace

NormLink norm_link_check(const Point& a, double p, const BergmanSpec& spec) {
    spec.base().check_interior(a);
    NormLink out;
    NormEngine engine(spec.lifted());
    const NormEntry& h = engine.norm(embed(a, spec.lift_dim()), p);
    out.hardy = h.value;
    bool conv = false;
    out.bergman = bergman_kernel_norm(a, p, spec, &conv);
    out.converged = conv && (std::isinf(p) || h.converged);
    out.residual = std::abs(out.hardy - out.bergman) / out.hardy;
    return out;
}

BergmanExtension bergman_extension(const std::vector<Point>& s, std::span<const cplx> nu, double s_exp,
                                   double p, const BergmanSpec& spec, DualMethod method) {
    const int dim = spec.lift_dim();
    const Domain lifted = spec.lifted();
    BergmanExtension out;
    out.lift_dim = dim;
    for (const Point& a : s) {
        spec.base().check_interior(a);
        out.embedded.push_back(embed(a, dim));
    }
    PointSequence seq(lifted, out.embedded);
    NormEngine engine(lifted);
    const RulePtr rule = adapted_rule(lifted, seq.points());
    const DualSystem dual = make_dual_system(method, seq, p, engine);
    auto ctx = std::make_shared<const ExtensionContext>(make_extension_context(seq, dual, s_exp, p, engine, rule));
    out.ctx = ctx;
    out.hardy = build_extension(*ctx, nu);

    const std::vector<cplx> target(nu.begin(), nu.end());
    const Evaluator T = [ctx, target](const Point& z) { return extension_eval(*ctx, target, z); };
    out.U = restrict_to_base(T, spec.n, dim);

    const double sc = conjugate_exponent(s_exp);
    double scale = 0.0, worst = 0.0;
    for (std::size_t a = 0; a < s.size(); ++a) {
        const cplx want = nu[a] * bergman_kernel_norm(s[a], sc, spec, nullptr);
        const double r = std::abs(out.U(s[a]) - want);
        out.residuals.push_back(r);
        worst = std::max(worst, r);
        scale = std::max(scale, std::abs(want));
    }
    out.relative_residual = scale > 0.0 ? worst / scale : worst;

    // Both norms from samples of T: on the volume rule embedded at w = 0, and
    // on a sphere rule of B_dim whose leading level matches it.
    const HoloExpr h = extension_expr(*ctx, nu);
    auto at_base = [&](int res) {
        const RulePtr r = embed_rule(*build_volume_rule(spec.n, spec.k, res), dim);
        return pow_mean(*r, h.samples(*r), s_exp);
    };
    const Refinement rb = refine(RefineOptions{spec.radial, spec.max_radial, spec.tol}, at_base);
    out.norm_bergman = rb.value;
    out.bergman_residual = rb.residual;
    out.matched_resolution = std::min(rb.resolution, dim == 2 ? 48 : 64);
    const int rm = out.matched_resolution;
    const RulePtr sphere = dim == 2 ? build_sphere_rule(dim, {rm, 2 * rm, rm, 2 * rm, true})
                                    : build_sphere_rule(dim, {rm, 2 * rm, 1, 1, true});
    out.norm_bergman_matched = at_base(rm);
    out.norm_hardy = pow_mean(*sphere, h.samples(*sphere), s_exp);
    out.contraction_holds = out.norm_bergman_matched <= out.norm_hardy * (1.0 + 1e-8);
    return out;
}

}  // namespace hardy
