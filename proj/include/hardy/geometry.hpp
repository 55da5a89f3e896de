#pragma once

// Concrete domains and boundary quadrature for the normalized surface measure.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/error.hpp"

namespace hardy {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// p' = p/(p-1), with 1' = inf and inf' = 1.
double conjugate_exponent(double p);

/// Formats an exponent for reports ("inf" for infinity).
std::string exponent_label(double p);

enum class DomainKind { Disc, Ball, Bidisc };

class Domain {
public:
    static Domain disc() { return Domain(DomainKind::Disc, 1); }
    /// Unit ball of C^n; n = 2 is the primary case, larger n appears only
    /// as the target of Bergman lifts.
    static Domain ball(int n = 2);
    static Domain bidisc() { return Domain(DomainKind::Bidisc, 2); }

    /// Accepts "disc", "ball2", "bidisc" and "ballN".
    static Domain parse(const std::string& name);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    std::string name() const;

    bool is_interior(const Point& z) const;
    bool is_boundary(const Point& z, double tol = 1e-12) const;

    /// Throws Domain error unless z has the right dimension and lies inside.
    void check_interior(const Point& z) const;

    bool operator==(const Domain&) const = default;

private:
    Domain(DomainKind kind, int dim) : kind_(kind), dim_(dim) {}

    DomainKind kind_;
    int dim_;
};

/// Resolution of a nested sphere rule on the boundary of the unit ball of
/// C^m: z = (sqrt(t) e^{i theta}, sqrt(1-t) zeta), t by Gauss-Legendre,
/// theta by the trapezoid rule and zeta on the boundary of the ball of
/// C^{m-1} (a circle when m = 2).
struct SphereShape {
    int radial = 8;
    int angular = 16;
    int tail_radial = 8;
    int tail_angular = 16;
    /// Gauss-Legendre in |z_1| instead of |z_1|^2 (leading level only):
    /// exact for |z_1|^j with odd j, used for functions of z_1 alone.
    bool sqrt_radial = false;
};

class QuadratureRule {
public:
    Domain domain = Domain::disc();
    int resolution = 0;
    /// Volume rules (Bergman) sample the interior instead of the boundary.
    bool volume = false;
    std::string description;
    /// Set for unrotated sphere rules.
    std::optional<SphereShape> shape;
    /// coords[d][j] is coordinate d of node j.
    std::vector<std::vector<cplx>> coords;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    Point node(std::size_t j) const;
    std::vector<const cplx*> coord_ptrs() const;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

/// Default rule for a domain. Disc: M = resolution equispaced nodes.
/// Bidisc: M x M tensor. Ball: radial = resolution, angular = 2*resolution.
RulePtr build_quadrature(const Domain& domain, int resolution);

/// Ball rule with independent radial/angular counts.
RulePtr build_sphere_rule(int dim, const SphereShape& shape);

/// Same rule with every node mapped through a unitary U with U e_1 = a/|a|.
/// Integrals against sigma are unchanged; functions peaked around a are
/// resolved by the angular counts of the leading coordinate.
RulePtr rotate_to_point(const RulePtr& rule, const Point& a);

/// Same family with every resolution doubled, for convergence residuals.
/// Rotated and volume rules are not supported.
RulePtr refined_rule(const QuadratureRule& rule);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct BoundarySamples {
    std::vector<cplx> values;
    RulePtr rule;
};

BoundarySamples sample(const RulePtr& rule, const std::function<cplx(const Point&)>& f);

cplx integrate(const BoundarySamples& f);
double lp_norm(const BoundarySamples& f, double p);
cplx inner_product(const BoundarySamples& f, const BoundarySamples& g);

/// Weighted integral of |v|^p against the rule, or max |v| for p = inf.
/// Lower-level entry used by the pipelines.
double abs_pow_integral(const QuadratureRule& rule, std::span<const cplx> v, double p);
double lp_norm(const QuadratureRule& rule, std::span<const cplx> v, double p);

/// Result of a doubling refinement.
struct Refinement {
    double value = 0.0;
    int resolution = 0;
    double residual = kInf;
    bool converged = false;
};

struct RefineOptions {
    int start = 16;
    int max = 1024;
    double tol = 1e-10;
};

/// Doubles the resolution from opts.start until two successive values agree
/// to relative opts.tol or opts.max is reached.
template <class Eval>
Refinement refine(const RefineOptions& opts, Eval&& eval) {
    Refinement out;
    int res = opts.start;
    double prev = eval(res);
    out.value = prev;
    out.resolution = res;
    while (2 * res <= opts.max) {
        res *= 2;
        const double cur = eval(res);
        const double scale = std::max(std::abs(cur), std::numeric_limits<double>::min());
        out.residual = std::abs(cur - prev) / scale;
        out.value = cur;
        out.resolution = res;
        if (out.residual <= opts.tol) {
            out.converged = true;
            break;
        }
        prev = cur;
    }
    return out;
}

}  // namespace hardy
