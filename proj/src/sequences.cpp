#include "hardy/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hardy/rng.hpp"

namespace hardy {

PointSequence::PointSequence(Domain domain, std::vector<Point> points)
    : domain_(domain), points_(std::move(points)) {
    require(!points_.empty(), ErrorKind::Contract, "point sequence is empty");
    for (const Point& a : points_) domain_.check_interior(a);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        for (std::size_t j = i + 1; j < points_.size(); ++j) {
            require(points_[i] != points_[j], ErrorKind::Contract,
                    "point sequence has repeated points (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
        }
    }
}

namespace {

double disc_distance(cplx a, cplx b) { return std::abs((a - b) / (1.0 - std::conj(a) * b)); }

}  // namespace

double gleason_distance(const Domain& domain, const Point& a, const Point& b) {
    domain.check_interior(a);
    domain.check_interior(b);
    switch (domain.kind()) {
        case DomainKind::Disc: return disc_distance(a[0], b[0]);
        case DomainKind::Bidisc:
            return std::max(disc_distance(a[0], b[0]), disc_distance(a[1], b[1]));
        case DomainKind::Ball: {
            double na = 0.0, nb = 0.0;
            cplx ba = 1.0;
            for (std::size_t d = 0; d < a.size(); ++d) {
                na += std::norm(a[d]);
                nb += std::norm(b[d]);
                ba -= b[d] * std::conj(a[d]);
            }
            const double c = (1.0 - na) * (1.0 - nb) / std::norm(ba);
            return std::sqrt(std::max(0.0, 1.0 - c));
        }
    }
    return 0.0;
}

double gleason_product_delta(const PointSequence& s) {
    double delta = 1.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j != i) prod *= gleason_distance(s.domain(), s[i], s[j]);
        }
        delta = std::min(delta, prod);
    }
    return delta;
}

CarlesonWindow carleson_window_constant(const PointSequence& s) {
    require(s.domain().kind() == DomainKind::Disc, ErrorKind::Unsupported,
            "Carleson windows are defined for the disc only");
    double rmax = 0.0;
    for (const Point& a : s.points()) rmax = std::max(rmax, std::abs(a[0]));
    const int levels = static_cast<int>(std::ceil(std::log2(1.0 / (1.0 - rmax)))) + 1;
    CarlesonWindow best;
    for (const Point& center : s.points()) {
        const double theta = std::arg(center[0]);
        for (int j = 0; j <= levels; ++j) {
            const double ell = std::ldexp(1.0, -j);
            double mass = 0.0;
            for (const Point& b : s.points()) {
                const double r = std::abs(b[0]);
                if (r < 1.0 - ell) continue;
                double dt = std::abs(std::remainder(std::arg(b[0]) - theta, 2.0 * std::numbers::pi));
                if (dt <= ell) mass += 1.0 - r * r;
            }
            if (mass / ell > best.value) best = {mass / ell, theta, ell};
        }
    }
    return best;
}

Eigen::MatrixXcd kernel_matrix(const PointSequence& s) {
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXcd k(n, n);
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index c = 0; c < n; ++c) k(b, c) = kernel_eval(s.domain(), s[c], s[b]);
    }
    return k;
}

Eigen::MatrixXcd normalized_kernel_columns(const PointSequence& s, double q,
                                           const QuadratureRule& rule) {
    require(rule.domain == s.domain(), ErrorKind::Shape, "rule and sequence domains differ");
    const auto m = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXcd t(m, static_cast<Eigen::Index>(s.size()));
    for (std::size_t a = 0; a < s.size(); ++a) {
        auto ks = kernel_samples(s[a], rule);
        const double nrm = lp_norm(rule, ks, q);
        for (Eigen::Index j = 0; j < m; ++j) t(j, static_cast<Eigen::Index>(a)) = ks[j] / nrm;
    }
    return t;
}

namespace {

double lq_norm(const Eigen::VectorXcd& x, double q) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]), q);
    return std::pow(s, 1.0 / q);
}

double weighted_lq(const Eigen::VectorXcd& y, const std::vector<double>& w, double q) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j) s += w[j] * std::pow(std::abs(y[j]), q);
    return std::pow(s, 1.0 / q);
}

// |v|^(e-1) sgn(v), entrywise.
Eigen::VectorXcd duality_map(const Eigen::VectorXcd& v, double e) {
    Eigen::VectorXcd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double r = std::abs(v[i]);
        out[i] = r == 0.0 ? cplx(0.0) : v[i] * std::pow(r, e - 2.0);
    }
    return out;
}

struct Ascent {
    double value = 0.0;
    Eigen::VectorXcd x;
    int iterations = 0;
};

// Boyd's iteration for the l^q -> L^q(w) norm of the synthesis matrix t.
Ascent boyd_ascent(const Eigen::MatrixXcd& t, const std::vector<double>& w, double q,
                   Eigen::VectorXcd x, const CarlesonOptions& opts) {
    const double qc = q / (q - 1.0);
    x /= lq_norm(x, q);
    Ascent out;
    out.x = x;
    out.value = weighted_lq(t * x, w, q);
    for (int it = 0; it < opts.max_iter; ++it) {
        Eigen::VectorXcd y = t * x;
        Eigen::VectorXcd u = duality_map(y, q);
        for (Eigen::Index j = 0; j < u.size(); ++j) u[j] *= w[j];
        Eigen::VectorXcd z = t.adjoint() * u;
        if (z.norm() == 0.0) break;
        x = duality_map(z, qc);
        x /= lq_norm(x, q);
        const double v = weighted_lq(t * x, w, q);
        out.iterations = it + 1;
        const bool better = v > out.value;
        if (better) {
            out.x = x;
        }
        const double gain = (v - out.value) / out.value;
        out.value = std::max(out.value, v);
        if (!better || gain < opts.tol) break;
    }
    return out;
}

Eigen::MatrixXcd closed_form_gram(const PointSequence& s) {
    const Eigen::MatrixXcd k = kernel_matrix(s);
    Eigen::MatrixXcd g(k.rows(), k.cols());
    for (Eigen::Index a = 0; a < k.rows(); ++a) {
        for (Eigen::Index b = 0; b < k.cols(); ++b) {
            g(a, b) = k(a, b) / std::sqrt(k(a, a).real() * k(b, b).real());
        }
    }
    return g;
}

std::vector<cplx> to_vector(const Eigen::VectorXcd& x) { return {x.data(), x.data() + x.size()}; }

Eigen::VectorXcd random_start(std::mt19937_64& rng, Eigen::Index n, bool positive) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd x(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x[i] = positive ? cplx(std::abs(g(rng)) + 1e-3, 0.0) : cplx(g(rng), g(rng));
    }
    return x;
}

}  // namespace

CarlesonReport carleson_power_iteration(const PointSequence& s, double q, const RulePtr& rule,
                                        const CarlesonOptions& opts) {
    require(q > 1.0 && std::isfinite(q), ErrorKind::Parameter,
            "power iteration needs 1 < q < inf");
    const Eigen::MatrixXcd t = normalized_kernel_columns(s, q, *rule);
    const auto n = t.cols();
    std::vector<Eigen::VectorXcd> starts;
    starts.push_back(Eigen::VectorXcd::Ones(n));
    for (Eigen::Index a = 0; a < n; ++a) starts.push_back(Eigen::VectorXcd::Unit(n, a));
    if (q != 2.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(closed_form_gram(s));
        starts.push_back(eig.eigenvectors().col(n - 1));
    }
    for (int r = 0; r < opts.restarts; ++r) {
        auto rng = sub_generator(opts.seed, static_cast<std::uint64_t>(r));
        starts.push_back(random_start(rng, n, false));
    }
    CarlesonReport rep;
    rep.q = q;
    rep.method = "power-iteration";
    rep.restarts = opts.restarts;
    rep.seed = opts.seed;
    rep.rule = rule->description;
    for (auto& x0 : starts) {
        const Ascent a = boyd_ascent(t, rule->weights, q, x0, opts);
        rep.iterations += a.iterations;
        if (a.value > rep.value) {
            rep.value = a.value;
            rep.certificate = to_vector(a.x);
        }
    }
    return rep;
}

CarlesonReport carleson_constant(const PointSequence& s, double q, const RulePtr& rule,
                                 const CarlesonOptions& opts) {
    require(q >= 1.0 && std::isfinite(q), ErrorKind::Parameter, "Carleson exponent must be in [1, inf)");
    if (q == 1.0) {
        // the l^1 unit ball is the convex hull of its vertices c e_a, |c| = 1
        const Eigen::MatrixXcd t = normalized_kernel_columns(s, 1.0, *rule);
        CarlesonReport rep;
        rep.q = 1.0;
        rep.method = "vertex-enumeration";
        rep.rule = rule->description;
        for (Eigen::Index a = 0; a < t.cols(); ++a) {
            const Eigen::VectorXcd col = t.col(a);
            const double v = weighted_lq(col, rule->weights, 1.0);
            if (v > rep.value) {
                rep.value = v;
                rep.certificate = to_vector(Eigen::VectorXcd::Unit(t.cols(), a));
            }
        }
        return rep;
    }
    if (q == 2.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(closed_form_gram(s));
        require(eig.info() == Eigen::Success, ErrorKind::Numeric, "Gram eigensolve failed");
        CarlesonReport rep;
        rep.q = 2.0;
        rep.method = "gram-spectral";
        rep.rule = "closed-form Gram matrix";
        const auto n = eig.eigenvalues().size();
        rep.value = std::sqrt(std::max(0.0, eig.eigenvalues()[n - 1]));
        rep.certificate = to_vector(eig.eigenvectors().col(n - 1));
        return rep;
    }
    return carleson_power_iteration(s, q, rule, opts);
}

CarlesonReport weak_carleson_constant(const PointSequence& s, double q, const RulePtr& rule,
                                      const CarlesonOptions& opts) {
    require(q >= 2.0 && std::isfinite(q), ErrorKind::Parameter,
            "weak Carleson exponent must be in [2, inf)");
    const Eigen::MatrixXcd t = normalized_kernel_columns(s, q, *rule);
    const Eigen::MatrixXd a = t.cwiseAbs2();
    const auto n = a.cols();
    const double r = q / 2.0;
    const auto& w = rule->weights;
    auto value = [&](const Eigen::VectorXd& nu) {
        const Eigen::VectorXd y = a * nu;
        double acc = 0.0;
        for (Eigen::Index j = 0; j < y.size(); ++j) acc += w[j] * std::pow(y[j], r);
        double nn = 0.0;
        for (Eigen::Index i = 0; i < nu.size(); ++i) nn += std::pow(nu[i], r);
        return std::pow(acc / nn, 1.0 / r);
    };
    CarlesonReport rep;
    rep.q = q;
    rep.rule = rule->description;
    rep.seed = opts.seed;
    auto keep = [&](const Eigen::VectorXd& nu, double v) {
        if (v > rep.value) {
            rep.value = v;
            rep.certificate.assign(nu.size(), 0.0);
            for (Eigen::Index i = 0; i < nu.size(); ++i) rep.certificate[i] = std::sqrt(nu[i]);
        }
    };
    if (r == 1.0) {
        // linear on the simplex: the best vertex is a largest column integral
        rep.method = "column-sum";
        for (Eigen::Index i = 0; i < n; ++i) {
            const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
            keep(e, value(e));
        }
        return rep;
    }
    rep.method = "power-iteration";
    rep.restarts = opts.restarts;
    const double rc = r / (r - 1.0);
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(Eigen::VectorXd::Ones(n));
    for (Eigen::Index i = 0; i < n; ++i) starts.push_back(Eigen::VectorXd::Unit(n, i));
    for (int k = 0; k < opts.restarts; ++k) {
        auto rng = sub_generator(opts.seed, static_cast<std::uint64_t>(k));
        starts.push_back(random_start(rng, n, true).real());
    }
    for (Eigen::VectorXd nu : starts) {
        double best = value(nu);
        keep(nu, best);
        for (int it = 0; it < opts.max_iter; ++it) {
            const Eigen::VectorXd y = a * nu;
            Eigen::VectorXd u(y.size());
            for (Eigen::Index j = 0; j < y.size(); ++j) u[j] = w[j] * std::pow(y[j], r - 1.0);
            Eigen::VectorXd z = a.transpose() * u;
            for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = std::pow(z[i], rc - 1.0);
            if (z.sum() == 0.0) break;
            nu = z / z.maxCoeff();
            const double v = value(nu);
            ++rep.iterations;
            keep(nu, v);
            if (v <= best * (1.0 + opts.tol)) break;
            best = v;
        }
    }
    // report mu on the l^q unit sphere
    double nn = 0.0;
    for (cplx c : rep.certificate) nn += std::pow(std::abs(c), q);
    for (cplx& c : rep.certificate) c /= std::pow(nn, 1.0 / q);
    return rep;
}

const char* to_string(DualMethod m) {
    switch (m) {
        case DualMethod::Gram: return "gram";
        case DualMethod::Collocation: return "collocation";
        case DualMethod::Blaschke: return "blaschke";
    }
    return "?";
}

DualMethod parse_dual_method(const std::string& name) {
    if (name == "gram") return DualMethod::Gram;
    if (name == "collocation") return DualMethod::Collocation;
    if (name == "blaschke") return DualMethod::Blaschke;
    fail(ErrorKind::Config, "unknown dual method: " + name);
}

namespace {

double dual_target(NormEngine& engine, const Point& a, double p) {
    if (std::isinf(p)) return 1.0;
    return engine.value(a, conjugate_exponent(p));
}

cplx blaschke_factor(cplx b, cplx z) {
    if (b == 0.0) return -z;
    return (std::abs(b) / b) * (b - z) / (1.0 - std::conj(b) * z);
}

}  // namespace

cplx DualSystem::eval(std::size_t a, const Point& z) const {
    require(a < points.size(), ErrorKind::Parameter, "dual index out of range");
    if (method == DualMethod::Blaschke) {
        cplx v = coefficients(static_cast<Eigen::Index>(a), 0);
        for (std::size_t b = 0; b < points.size(); ++b) {
            if (b != a) v *= blaschke_factor(points[b][0], z[0]);
        }
        return v;
    }
    cplx v = 0.0;
    for (std::size_t c = 0; c < points.size(); ++c) {
        v += coefficients(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) *
             kernel_eval(domain, points[c], z);
    }
    return v;
}

HoloExpr DualSystem::expr(std::size_t a) const {
    require(a < points.size(), ErrorKind::Parameter, "dual index out of range");
    const auto ia = static_cast<Eigen::Index>(a);
    if (method == DualMethod::Blaschke) {
        HoloExpr e(domain);
        Term t{coefficients(ia, 0), {}};
        for (std::size_t b = 0; b < points.size(); ++b) {
            if (b != a) t.factors.push_back(BlaschkeFactor{points[b][0]});
        }
        e.add_term(std::move(t));
        return e;
    }
    HoloExpr e(domain);
    for (std::size_t c = 0; c < points.size(); ++c) {
        e += HoloExpr::kernel(domain, points[c], coefficients(ia, static_cast<Eigen::Index>(c)));
    }
    return e;
}

std::vector<cplx> DualSystem::samples(std::size_t a, const QuadratureRule& rule) const {
    return expr(a).samples(rule);
}

double delta_residual(const DualSystem& d) {
    double worst = 0.0;
    for (std::size_t a = 0; a < d.size(); ++a) {
        for (std::size_t b = 0; b < d.size(); ++b) {
            const double want = a == b ? d.targets[b] : 0.0;
            worst = std::max(worst, std::abs(d.eval(a, d.points[b]) - want) / d.targets[b]);
        }
    }
    return worst;
}

DualSystem dual_system_collocation(const PointSequence& s, double p, NormEngine& engine,
                                   const DualOptions& opts) {
    require(p >= 1.0, ErrorKind::Parameter, "dual exponent must be >= 1");
    require(engine.domain() == s.domain(), ErrorKind::Shape, "norm engine domain differs");
    DualSystem d;
    d.domain = s.domain();
    d.method = DualMethod::Collocation;
    d.p = p;
    d.points = s.points();
    for (const Point& a : s.points()) d.targets.push_back(dual_target(engine, a, p));

    Eigen::MatrixXcd k = kernel_matrix(s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k, Eigen::EigenvaluesOnly);
    require(eig.info() == Eigen::Success, ErrorKind::Numeric, "kernel matrix eigensolve failed");
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    d.condition = lo > 0.0 ? hi / lo : kInf;
    if (d.condition > opts.max_condition) {
        if (!opts.tikhonov) {
            fail(ErrorKind::IllConditioned,
                 "kernel matrix condition number " + std::to_string(d.condition) +
                     " exceeds " + std::to_string(opts.max_condition) +
                     "; points are too close (enable tikhonov regularization)");
        }
        const double eps = 1e-12 * k.trace().real();
        k += eps * Eigen::MatrixXcd::Identity(k.rows(), k.cols());
        d.regularized = true;
        d.warnings.push_back("tikhonov regularization applied, eps = " + std::to_string(eps));
    }
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(k.rows(), k.cols());
    for (Eigen::Index a = 0; a < k.rows(); ++a) rhs(a, a) = d.targets[a];
    d.coefficients = k.partialPivLu().solve(rhs).transpose();
    d.delta_residual = delta_residual(d);
    return d;
}

DualSystem dual_system_gram(const PointSequence& s, NormEngine& engine, const DualOptions& opts) {
    DualSystem d = dual_system_collocation(s, 2.0, engine, opts);
    d.method = DualMethod::Gram;
    return d;
}

DualSystem dual_system_blaschke(const PointSequence& s, double p, NormEngine& engine) {
    require(s.domain().kind() == DomainKind::Disc, ErrorKind::Unsupported,
            "Blaschke dual systems exist on the disc only");
    require(p >= 1.0, ErrorKind::Parameter, "dual exponent must be >= 1");
    DualSystem d;
    d.domain = s.domain();
    d.method = DualMethod::Blaschke;
    d.p = p;
    d.points = s.points();
    const auto n = static_cast<Eigen::Index>(s.size());
    d.coefficients = Eigen::MatrixXcd::Zero(n, 1);
    for (std::size_t a = 0; a < s.size(); ++a) {
        const double t = dual_target(engine, s[a], p);
        cplx ba = 1.0;
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (b != a) ba *= blaschke_factor(s[b][0], s[a][0]);
        }
        require(std::abs(ba) > 0.0, ErrorKind::Contract, "Blaschke quotient vanishes at its point");
        d.targets.push_back(t);
        d.blaschke_modulus.push_back(std::abs(ba));
        d.coefficients(static_cast<Eigen::Index>(a), 0) = t / ba;
    }
    d.delta_residual = delta_residual(d);
    return d;
}

DualSystem make_dual_system(DualMethod method, const PointSequence& s, double p,
                            NormEngine& engine, const DualOptions& opts) {
    switch (method) {
        case DualMethod::Gram:
            require(p == 2.0, ErrorKind::Contract, "the gram dual system is defined for p = 2");
            return dual_system_gram(s, engine, opts);
        case DualMethod::Collocation: return dual_system_collocation(s, p, engine, opts);
        case DualMethod::Blaschke: return dual_system_blaschke(s, p, engine);
    }
    fail(ErrorKind::Parameter, "unknown dual method");
}

double dual_bound(const DualSystem& d, double p, const QuadratureRule& rule) {
    double worst = 0.0;
    for (std::size_t a = 0; a < d.size(); ++a) {
        worst = std::max(worst, lp_norm(rule, d.samples(a, rule), p));
    }
    return worst;
}

double blaschke_sup_norm(const DualSystem& d, std::size_t a) {
    require(d.method == DualMethod::Blaschke, ErrorKind::Contract,
            "closed-form sup norm needs a Blaschke system");
    return d.targets.at(a) / d.blaschke_modulus.at(a);
}

}  // namespace hardy
