#include "hardy/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "hardy/simd.hpp"

namespace hardy {

double conjugate_exponent(double p) {
    require(p >= 1.0, ErrorKind::Parameter, "exponent must be >= 1");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

std::string exponent_label(double p) {
    if (std::isinf(p)) return "inf";
    std::ostringstream os;
    os.precision(17);
    os << p;
    return os.str();
}

Domain Domain::ball(int n) {
    require(n >= 1, ErrorKind::Parameter, "ball dimension must be >= 1");
    if (n == 1) return Domain(DomainKind::Disc, 1);
    return Domain(DomainKind::Ball, n);
}

Domain Domain::parse(const std::string& name) {
    if (name == "disc") return disc();
    if (name == "bidisc") return bidisc();
    if (name.rfind("ball", 0) == 0) {
        const std::string rest = name.substr(4);
        if (rest.empty()) return ball(2);
        try {
            std::size_t used = 0;
            const int n = std::stoi(rest, &used);
            if (used == rest.size() && n >= 2 && n <= 8) return ball(n);
        } catch (const std::exception&) {
        }
    }
    fail(ErrorKind::Config, "unknown domain: " + name);
}

std::string Domain::name() const {
    switch (kind_) {
        case DomainKind::Disc: return "disc";
        case DomainKind::Bidisc: return "bidisc";
        case DomainKind::Ball: return "ball" + std::to_string(dim_);
    }
    return "?";
}

bool Domain::is_interior(const Point& z) const {
    if (static_cast<int>(z.size()) != dim_) return false;
    if (kind_ == DomainKind::Bidisc) {
        return std::all_of(z.begin(), z.end(), [](cplx c) { return std::norm(c) < 1.0; });
    }
    double r2 = 0.0;
    for (cplx c : z) r2 += std::norm(c);
    return r2 < 1.0;
}

bool Domain::is_boundary(const Point& z, double tol) const {
    if (static_cast<int>(z.size()) != dim_) return false;
    if (kind_ == DomainKind::Bidisc) {
        return std::all_of(z.begin(), z.end(),
                           [tol](cplx c) { return std::abs(std::abs(c) - 1.0) <= tol; });
    }
    double r2 = 0.0;
    for (cplx c : z) r2 += std::norm(c);
    return std::abs(std::sqrt(r2) - 1.0) <= tol;
}

void Domain::check_interior(const Point& z) const {
    require(static_cast<int>(z.size()) == dim_, ErrorKind::Domain,
            "point has " + std::to_string(z.size()) + " coordinates, domain " + name() +
                " needs " + std::to_string(dim_));
    require(is_interior(z), ErrorKind::Domain, "point is not interior to " + name());
}

Point QuadratureRule::node(std::size_t j) const {
    Point z(coords.size());
    for (std::size_t d = 0; d < coords.size(); ++d) z[d] = coords[d][j];
    return z;
}

std::vector<const cplx*> QuadratureRule::coord_ptrs() const {
    std::vector<const cplx*> out;
    out.reserve(coords.size());
    for (const auto& c : coords) out.push_back(c.data());
    return out;
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    require(n >= 1, ErrorKind::Parameter, "Gauss-Legendre order must be >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // P_n(x) and P_n'(x) by the three-term recurrence
    auto legendre = [n](double x, double& dp) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        return p1;
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            const double dx = legendre(x, dp) / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = weights[n - 1 - i] = 0.5 * w;
    }
}

namespace {

std::vector<cplx> roots_of_unity(int m) {
    std::vector<cplx> out(m);
    for (int k = 0; k < m; ++k) {
        out[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / m);
    }
    return out;
}

// Nodes/weights of the nested rule on the boundary of the ball of C^dim.
void sphere_nodes(int dim, const SphereShape& shape, std::vector<std::vector<cplx>>& coords,
                  std::vector<double>& weights) {
    if (dim == 1) {
        const int m = std::max(1, shape.angular);
        coords.assign(1, roots_of_unity(m));
        weights.assign(m, 1.0 / m);
        return;
    }
    std::vector<std::vector<cplx>> tail;
    std::vector<double> tail_w;
    SphereShape tail_shape{shape.tail_radial, shape.tail_angular, shape.tail_radial,
                           shape.tail_angular};
    if (dim == 2) tail_shape.angular = shape.tail_angular;
    sphere_nodes(dim - 1, tail_shape, tail, tail_w);

    std::vector<double> t, wt;
    gauss_legendre_unit(std::max(1, shape.radial), t, wt);
    if (shape.sqrt_radial) {
        // t = v^2, dt = 2v dv
        for (std::size_t i = 0; i < t.size(); ++i) {
            wt[i] *= 2.0 * t[i];
            t[i] *= t[i];
        }
    }
    // marginal density of |z_1|^2 is (dim-1)(1-t)^(dim-2)
    double wsum = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        wt[i] *= (dim - 1) * std::pow(1.0 - t[i], dim - 2);
        wsum += wt[i];
    }
    for (double& w : wt) w /= wsum;

    const int m = std::max(1, shape.angular);
    const auto circle = roots_of_unity(m);
    const std::size_t total = t.size() * m * tail_w.size();
    coords.assign(dim, std::vector<cplx>());
    for (auto& c : coords) c.reserve(total);
    weights.clear();
    weights.reserve(total);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r1 = std::sqrt(t[i]);
        const double r2 = std::sqrt(1.0 - t[i]);
        for (int k = 0; k < m; ++k) {
            const cplx lead = r1 * circle[k];
            for (std::size_t j = 0; j < tail_w.size(); ++j) {
                coords[0].push_back(lead);
                for (int d = 1; d < dim; ++d) coords[d].push_back(r2 * tail[d - 1][j]);
                weights.push_back(wt[i] * tail_w[j] / m);
            }
        }
    }
}

std::string shape_string(int dim, const SphereShape& s) {
    std::ostringstream os;
    os << "sphere S^" << (2 * dim - 1) << " GL(t)=" << s.radial << " x trap=" << s.angular
       << " x tail(" << s.tail_radial << "," << s.tail_angular << ")";
    if (s.sqrt_radial) os << " sqrt";
    return os.str();
}

}  // namespace

RulePtr build_sphere_rule(int dim, const SphereShape& shape) {
    require(dim >= 1, ErrorKind::Parameter, "sphere dimension must be >= 1");
    auto rule = std::make_shared<QuadratureRule>();
    rule->domain = Domain::ball(dim);
    rule->resolution = shape.radial;
    rule->description = shape_string(dim, shape);
    rule->shape = shape;
    sphere_nodes(dim, shape, rule->coords, rule->weights);
    return rule;
}

RulePtr build_quadrature(const Domain& domain, int resolution) {
    require(resolution >= 4, ErrorKind::Parameter,
            "quadrature resolution must be >= 4, got " + std::to_string(resolution));
    switch (domain.kind()) {
        case DomainKind::Disc: {
            auto rule = std::make_shared<QuadratureRule>();
            rule->domain = domain;
            rule->resolution = resolution;
            rule->description = "circle trapezoid M=" + std::to_string(resolution);
            rule->coords.assign(1, roots_of_unity(resolution));
            rule->weights.assign(resolution, 1.0 / resolution);
            return rule;
        }
        case DomainKind::Bidisc: {
            auto rule = std::make_shared<QuadratureRule>();
            rule->domain = domain;
            rule->resolution = resolution;
            rule->description = "torus trapezoid " + std::to_string(resolution) + "x" +
                                std::to_string(resolution);
            const auto circle = roots_of_unity(resolution);
            const std::size_t total = static_cast<std::size_t>(resolution) * resolution;
            rule->coords.assign(2, std::vector<cplx>(total));
            rule->weights.assign(total, 1.0 / static_cast<double>(total));
            for (int i = 0; i < resolution; ++i) {
                for (int k = 0; k < resolution; ++k) {
                    rule->coords[0][i * resolution + k] = circle[i];
                    rule->coords[1][i * resolution + k] = circle[k];
                }
            }
            return rule;
        }
        case DomainKind::Ball: {
            SphereShape shape{resolution, 2 * resolution, resolution, 2 * resolution};
            auto rule = build_sphere_rule(domain.dim(), shape);
            auto out = std::make_shared<QuadratureRule>(*rule);
            out->resolution = resolution;
            return out;
        }
    }
    fail(ErrorKind::Unsupported, "unknown domain");
}

RulePtr refined_rule(const QuadratureRule& rule) {
    require(!rule.volume, ErrorKind::Unsupported, "refined_rule: volume rules are not supported");
    if (rule.domain.kind() != DomainKind::Ball) return build_quadrature(rule.domain, 2 * rule.resolution);
    require(rule.shape.has_value(), ErrorKind::Unsupported, "refined_rule: rotated sphere rule");
    auto twice = [](int v) { return v > 1 ? 2 * v : v; };
    const SphereShape& s = *rule.shape;
    auto out = std::make_shared<QuadratureRule>(*build_sphere_rule(
        rule.domain.dim(),
        {twice(s.radial), twice(s.angular), twice(s.tail_radial), twice(s.tail_angular), s.sqrt_radial}));
    out->resolution = 2 * rule.resolution;
    return out;
}

RulePtr rotate_to_point(const RulePtr& rule, const Point& a) {
    const int n = static_cast<int>(a.size());
    require(rule->domain.kind() == DomainKind::Ball && rule->domain.dim() == n,
            ErrorKind::Parameter, "rotate_to_point needs a ball rule of matching dimension");
    double norm_a = 0.0;
    for (cplx c : a) norm_a += std::norm(c);
    norm_a = std::sqrt(norm_a);
    if (norm_a == 0.0) return rule;

    // Orthonormal basis u_0 = a/|a|, completed by Gram-Schmidt on e_k.
    std::vector<Point> basis;
    Point u0(n);
    for (int d = 0; d < n; ++d) u0[d] = a[d] / norm_a;
    basis.push_back(u0);
    for (int k = 0; k < n && static_cast<int>(basis.size()) < n; ++k) {
        Point v(n, 0.0);
        v[k] = 1.0;
        for (const auto& b : basis) {
            cplx proj = 0.0;
            for (int d = 0; d < n; ++d) proj += std::conj(b[d]) * v[d];
            for (int d = 0; d < n; ++d) v[d] -= proj * b[d];
        }
        double nv = 0.0;
        for (cplx c : v) nv += std::norm(c);
        nv = std::sqrt(nv);
        if (nv < 1e-8) continue;
        for (cplx& c : v) c /= nv;
        basis.push_back(v);
    }

    auto out = std::make_shared<QuadratureRule>(*rule);
    out->description = rule->description + " rotated";
    out->shape.reset();
    const std::size_t m = rule->size();
    for (std::size_t j = 0; j < m; ++j) {
        for (int d = 0; d < n; ++d) {
            cplx acc = 0.0;
            for (int i = 0; i < n; ++i) acc += basis[i][d] * rule->coords[i][j];
            out->coords[d][j] = acc;
        }
    }
    return out;
}

BoundarySamples sample(const RulePtr& rule, const std::function<cplx(const Point&)>& f) {
    BoundarySamples out{std::vector<cplx>(rule->size()), rule};
    Point z(rule->coords.size());
    for (std::size_t j = 0; j < rule->size(); ++j) {
        for (std::size_t d = 0; d < z.size(); ++d) z[d] = rule->coords[d][j];
        out.values[j] = f(z);
    }
    return out;
}

namespace {
void check_samples(const BoundarySamples& f) {
    require(f.rule != nullptr, ErrorKind::Shape, "samples carry no quadrature rule");
    require(f.values.size() == f.rule->size(), ErrorKind::Shape,
            "sample count does not match quadrature rule");
}
}  // namespace

cplx integrate(const BoundarySamples& f) {
    check_samples(f);
    return simd::weighted_sum(f.rule->weights, f.values);
}

double abs_pow_integral(const QuadratureRule& rule, std::span<const cplx> v, double p) {
    require(v.size() == rule.size(), ErrorKind::Shape, "sample count does not match rule");
    require(p >= 1.0 || std::isinf(p), ErrorKind::Parameter, "L^p exponent must be >= 1");
    if (std::isinf(p)) return simd::max_abs(v);
    return simd::weighted_abs_pow_sum(rule.weights, v, p);
}

double lp_norm(const QuadratureRule& rule, std::span<const cplx> v, double p) {
    const double integral = abs_pow_integral(rule, v, p);
    if (std::isinf(p)) return integral;
    if (p == 1.0) return integral;
    if (p == 2.0) return std::sqrt(integral);
    return std::pow(integral, 1.0 / p);
}

double lp_norm(const BoundarySamples& f, double p) {
    check_samples(f);
    return lp_norm(*f.rule, f.values, p);
}

cplx inner_product(const BoundarySamples& f, const BoundarySamples& g) {
    check_samples(f);
    check_samples(g);
    require(f.rule == g.rule || (f.rule->size() == g.rule->size() &&
                                 f.rule->weights == g.rule->weights &&
                                 f.rule->coords == g.rule->coords),
            ErrorKind::Shape, "inner product of samples on different rules");
    return simd::weighted_dot(f.rule->weights, f.values, g.values);
}

}  // namespace hardy
