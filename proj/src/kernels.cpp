#include "hardy/kernels.hpp"

#include <algorithm>
#include <numbers>

#include "hardy/simd.hpp"

namespace hardy {

namespace {

// (1 - sum conj(a_d) z_d)^(-power) with the branch check.
cplx inverse_power(const Point& a, const Point& z, int power) {
    cplx w = 1.0;
    for (std::size_t d = 0; d < a.size(); ++d) w -= std::conj(a[d]) * z[d];
    require(w.real() > 0.0, ErrorKind::Invariant, "kernel base has nonpositive real part");
    cplx u = w;
    for (int k = 1; k < power; ++k) u *= w;
    return 1.0 / u;
}

double norm2(const Point& a) {
    double s = 0.0;
    for (cplx c : a) s += std::norm(c);
    return s;
}

}  // namespace

cplx kernel_eval(const Domain& domain, const Point& a, const Point& z) {
    domain.check_interior(a);
    require(z.size() == a.size(), ErrorKind::Shape, "kernel_eval: dimension mismatch");
    if (domain.kind() == DomainKind::Bidisc) {
        return inverse_power({a[0]}, {z[0]}, 1) * inverse_power({a[1]}, {z[1]}, 1);
    }
    return inverse_power(a, z, domain.dim());
}

double kernel_diagonal(const Domain& domain, const Point& a) {
    domain.check_interior(a);
    if (domain.kind() == DomainKind::Bidisc) {
        return 1.0 / ((1.0 - std::norm(a[0])) * (1.0 - std::norm(a[1])));
    }
    return std::pow(1.0 - norm2(a), -domain.dim());
}

std::vector<cplx> kernel_samples(const Point& a, const QuadratureRule& rule) {
    const Domain& domain = rule.domain;
    domain.check_interior(a);
    const std::size_t m = rule.size();
    std::vector<cplx> out(m);
    const auto ptrs = rule.coord_ptrs();
    double min_re = 0.0;
    if (domain.kind() == DomainKind::Bidisc) {
        std::vector<cplx> second(m);
        min_re = simd::kernel_power(std::span(ptrs.data(), 1), std::span(a.data(), 1), 1, out);
        min_re = std::min(min_re, simd::kernel_power(std::span(ptrs.data() + 1, 1),
                                                     std::span(a.data() + 1, 1), 1, second));
        for (std::size_t j = 0; j < m; ++j) out[j] *= second[j];
    } else {
        min_re = simd::kernel_power(ptrs, a, domain.dim(), out);
    }
    require(m == 0 || min_re > 0.0, ErrorKind::Invariant,
            "kernel base has nonpositive real part on the rule");
    return out;
}

BoundarySamples kernel_samples(const Point& a, const RulePtr& rule) {
    return BoundarySamples{kernel_samples(a, *rule), rule};
}

double kernel_norm(const Point& a, double p, const QuadratureRule& rule) {
    return lp_norm(rule, kernel_samples(a, rule), p);
}

RulePtr adapted_rule(const Domain& domain, std::span<const Point> points, double tol) {
    require(tol > 0.0 && tol < 1.0, ErrorKind::Parameter, "adapted_rule: tol must lie in (0,1)");
    double r = 0.0;
    bool on_axis = true;
    for (const Point& a : points) {
        domain.check_interior(a);
        if (domain.kind() == DomainKind::Bidisc) {
            r = std::max({r, std::abs(a[0]), std::abs(a[1])});
        } else {
            r = std::max(r, std::sqrt(norm2(a)));
            for (std::size_t d = 1; d < a.size(); ++d) on_axis = on_axis && a[d] == 0.0;
        }
    }
    const double modes = r > 0.0 ? std::log(tol) / std::log(r) : 0.0;
    auto pow2_at_least = [](double x, int lo, int hi) {
        int m = lo;
        while (m < x && m < hi) m *= 2;
        return m;
    };
    switch (domain.kind()) {
        case DomainKind::Disc:
            return build_quadrature(domain, pow2_at_least(modes + 32.0, 64, 1 << 16));
        case DomainKind::Bidisc:
            return build_quadrature(domain, pow2_at_least(modes + 16.0, 32, 512));
        case DomainKind::Ball: {
            const int res = std::min(96, static_cast<int>(std::ceil(0.5 * modes)) + 8);
            if (on_axis) return build_sphere_rule(domain.dim(), {res, 2 * res, 1, 1});
            return build_quadrature(domain, res);
        }
    }
    fail(ErrorKind::Unsupported, "unknown domain");
}

RulePtr pairing_rule(const Domain& domain, const Point& a, int degree, double tol) {
    require(degree >= 0, ErrorKind::Parameter, "pairing_rule: degree must be >= 0");
    if (domain.kind() != DomainKind::Ball) return adapted_rule(domain, std::span<const Point>(&a, 1), tol);
    const Point axis = canonical_point(domain, a);
    const RulePtr base = adapted_rule(domain, std::span<const Point>(&axis, 1), tol);
    SphereShape shape = *base->shape;
    shape.tail_radial = degree / 2 + 1;
    shape.tail_angular = degree + 1;
    // the leading level must also carry the polynomial
    shape.radial = std::max(shape.radial, degree / 2 + 1);
    shape.angular = std::max(shape.angular, degree + 1);
    return rotate_to_point(build_sphere_rule(domain.dim(), shape), a);
}

Point canonical_point(const Domain& domain, const Point& a) {
    domain.check_interior(a);
    Point out(a.size(), 0.0);
    if (domain.kind() == DomainKind::Ball) {
        out[0] = std::sqrt(norm2(a));
    } else {
        for (std::size_t d = 0; d < a.size(); ++d) out[d] = std::abs(a[d]);
    }
    return out;
}

double NormTable::norm(double p) const {
    // Exponents computed two ways (12/5 vs 1/(1/1.5 - 1/4)) may differ in the last bits.
    auto it = norms.lower_bound(p * (1.0 - 1e-12));
    if (it != norms.end() && !(it->first == p || std::abs(it->first - p) <= 1e-12 * std::abs(p)))
        it = norms.end();
    require(it != norms.end(), ErrorKind::Dependency,
            "kernel norm for p=" + exponent_label(p) + " was not computed");
    return it->second.value;
}

bool NormTable::has(double p) const {
    try {
        norm(p);
        return true;
    } catch (const Error&) {
        return false;
    }
}

double NormTable::omega(double q) const { return std::pow(norm(2.0 * q), -2.0 * q); }

RefineOptions default_norm_refinement(const Domain& domain) {
    switch (domain.kind()) {
        case DomainKind::Disc: return {16, 1 << 15, 1e-10};
        case DomainKind::Ball: return {8, 1024, 1e-10};
        case DomainKind::Bidisc: return {16, 1024, 1e-10};
    }
    return {};
}

NormEngine::NormEngine(Domain domain)
    : domain_(domain), opts_(default_norm_refinement(domain)) {}

NormEngine::NormEngine(Domain domain, RefineOptions opts) : domain_(domain), opts_(opts) {}

RulePtr NormEngine::canonical_rule(int resolution) const {
    if (domain_.kind() == DomainKind::Ball) {
        // the canonical point lies on the first axis, so only z_1 is resolved
        return build_sphere_rule(domain_.dim(), {resolution, 2 * resolution, 1, 1});
    }
    return build_quadrature(domain_, resolution);
}

const NormEntry& NormEngine::norm(const Point& a, double p) {
    require(p >= 1.0, ErrorKind::Parameter, "kernel norm exponent must be >= 1");
    const Point c = canonical_point(domain_, a);
    std::vector<double> key;
    for (cplx v : c) key.push_back(v.real());
    auto cache_key = std::make_pair(key, p);
    if (auto it = cache_.find(cache_key); it != cache_.end()) return it->second;

    if (std::isinf(p)) {
        // |k_c| peaks at the boundary point e_1 (ball, disc) or (1, 1) (bidisc).
        Point z(c.size(), 0.0);
        z[0] = 1.0;
        if (domain_.kind() == DomainKind::Bidisc) z[1] = 1.0;
        NormEntry entry{std::abs(kernel_eval(domain_, c, z)), 0, 0.0, true};
        return cache_.emplace(cache_key, entry).first->second;
    }

    auto eval = [&](int res) {
        auto it = rules_.find(res);
        if (it == rules_.end()) it = rules_.emplace(res, canonical_rule(res)).first;
        const auto& rule = *it->second;
        return abs_pow_integral(rule, kernel_samples(c, rule), p);
    };
    const Refinement r = refine(opts_, eval);
    NormEntry entry;
    entry.resolution = r.resolution;
    entry.residual = r.residual;
    entry.converged = r.converged;
    if (p == 1.0) entry.value = r.value;
    else entry.value = std::pow(r.value, 1.0 / p);
    return cache_.emplace(cache_key, entry).first->second;
}

NormTable NormEngine::table(const Point& a, std::span<const double> exponents) {
    NormTable t;
    t.a = a;
    t.diagonal = kernel_diagonal(domain_, a);
    for (double p : exponents) t.norms[p] = norm(a, p);
    return t;
}

double reproducing_check(const std::function<cplx(const Point&)>& f, const Point& a,
                         const RulePtr& rule) {
    const auto fs = sample(rule, f);
    const auto ks = kernel_samples(a, *rule);
    const cplx pairing = simd::weighted_dot(rule->weights, fs.values, ks);
    return std::abs(pairing - f(a));
}

BoundarySamples poisson_kernel(const Point& a, const RulePtr& rule) {
    auto ks = kernel_samples(a, rule);
    const double diag = kernel_diagonal(rule->domain, a);
    for (cplx& v : ks.values) v = std::norm(v) / diag;
    return ks;
}

cplx analytic_projection_eval(const BoundarySamples& f, const Point& a) {
    require(f.rule != nullptr && f.values.size() == f.rule->size(), ErrorKind::Shape,
            "samples do not match their rule");
    const auto ks = kernel_samples(a, *f.rule);
    return simd::weighted_dot(f.rule->weights, f.values, ks);
}

double dual_exponent_for_split(double s, double p) {
    require(s >= 1.0, ErrorKind::Parameter, "s must be >= 1");
    require(s < p, ErrorKind::Parameter, "split needs s < p");
    if (std::isinf(p)) return s;
    return 1.0 / (1.0 / s - 1.0 / p);
}

namespace {

struct ScanTerm {
    double value = 0.0;
    double residual = 0.0;
    bool converged = true;
};

ScanTerm fetch(NormEngine& engine, const Point& a, double p) {
    const NormEntry& e = engine.norm(a, p);
    ScanTerm t{e.value, 0.0, true};
    if (!std::isinf(p)) {
        t.residual = e.residual == kInf ? 0.0 : e.residual;
        t.converged = e.converged;
    }
    return t;
}

void finish_point(ShConstants& out, ShPoint pt, bool converged) {
    if (!converged) {
        pt.excluded = true;
        pt.note = "quadrature not converged";
        std::string where;
        for (cplx c : pt.a) where += " " + std::to_string(c.real()) + (c.imag() < 0 ? "" : "+") +
                                     std::to_string(c.imag()) + "i";
        out.warnings.push_back("excluded point" + where + ": norms not converged");
    } else {
        out.max_residual = std::max(out.max_residual, pt.residual);
    }
    out.points.push_back(std::move(pt));
}

}  // namespace

ShConstants sh_q_scan(NormEngine& engine, double q, std::span<const Point> grid) {
    require(q > 1.0 && !std::isinf(q), ErrorKind::Parameter, "SH(q) needs 1 < q < inf");
    ShConstants out;
    out.hypothesis = "SH(q)";
    out.q = q;
    const double qc = conjugate_exponent(q);
    for (const Point& a : grid) {
        const ScanTerm n2 = fetch(engine, a, 2.0);
        const ScanTerm nq = fetch(engine, a, q);
        const ScanTerm nqc = fetch(engine, a, qc);
        ShPoint pt;
        pt.a = a;
        pt.ratio = n2.value * n2.value / (nq.value * nqc.value);
        pt.residual = std::max({n2.residual, nq.residual, nqc.residual});
        const bool ok = n2.converged && nq.converged && nqc.converged;
        if (ok) out.alpha = out.alpha ? std::min(*out.alpha, pt.ratio) : pt.ratio;
        finish_point(out, std::move(pt), ok);
    }
    return out;
}

ShConstants sh_ps_scan(NormEngine& engine, double p, double s, std::span<const Point> grid) {
    const double q = dual_exponent_for_split(s, p);
    ShConstants out;
    out.hypothesis = "SH(p,s)";
    out.p = p;
    out.s = s;
    out.q = q;
    const double sc = conjugate_exponent(s);
    const double pc = conjugate_exponent(p);
    const double qc = conjugate_exponent(q);
    for (const Point& a : grid) {
        const ScanTerm ns = fetch(engine, a, sc);
        const ScanTerm np = fetch(engine, a, pc);
        const ScanTerm nq = fetch(engine, a, qc);
        ShPoint pt;
        pt.a = a;
        pt.ratio = ns.value / (np.value * nq.value);
        pt.residual = std::max({ns.residual, np.residual, nq.residual});
        const bool ok = ns.converged && np.converged && nq.converged;
        if (ok) out.beta = out.beta ? std::max(*out.beta, pt.ratio) : pt.ratio;
        finish_point(out, std::move(pt), ok);
    }
    return out;
}

std::vector<Point> radial_grid(const Domain& domain, std::span<const double> radii, int angles) {
    require(angles >= 1, ErrorKind::Parameter, "radial_grid needs at least one angle");
    std::vector<Point> out;
    for (double r : radii) {
        for (int k = 0; k < angles; ++k) {
            const cplx u = std::polar(r, 2.0 * std::numbers::pi * k / angles);
            Point a(domain.dim(), 0.0);
            if (domain.kind() == DomainKind::Bidisc) {
                a[0] = r;
                a[1] = u;
            } else {
                a[0] = u;
            }
            domain.check_interior(a);
            out.push_back(std::move(a));
        }
    }
    return out;
}

namespace {

double interp_theta(double p, double q) {
    require(p >= 1.0 && q >= p && !std::isinf(q), ErrorKind::Parameter,
            "interpolation needs 1 <= p <= q < inf");
    if (q == 1.0) return 1.0;
    return (1.0 - 1.0 / p) / (1.0 - 1.0 / q);
}

}  // namespace

InequalityPair holder_interp_check(NormEngine& engine, const Point& a, double p, double q) {
    InequalityPair out;
    out.theta = interp_theta(p, q);
    out.lhs = engine.value(a, 2.0 * p);
    out.rhs = std::pow(engine.value(a, 2.0), 1.0 - out.theta) *
              std::pow(engine.value(a, 2.0 * q), out.theta);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-10);
    return out;
}

InequalityPair stein_weiss_weight_check(NormEngine& engine, const Point& a, double p, double q) {
    require(p > 1.0 && q > p, ErrorKind::Parameter, "weight check needs 1 < p < q");
    InequalityPair out;
    out.theta = interp_theta(p, q);
    const double e = -2.0 * p;
    out.lhs = std::pow(engine.value(a, 2.0), e * (1.0 - out.theta)) *
              std::pow(engine.value(a, 2.0 * q), e * out.theta);
    out.rhs = std::pow(engine.value(a, 2.0 * p), e);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-10);
    return out;
}

}  // namespace hardy
