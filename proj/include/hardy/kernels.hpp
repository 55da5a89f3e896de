#pragma once

// Szego kernels on the disc, the ball and the bidisc, their L^p norms, the
// Poisson kernel, and scans of the two reverse-Holder kernel hypotheses.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

/// k_a(z). Disc/ball of C^n: (1 - <z,a>)^(-n); bidisc: prod_j (1 - conj(a_j) z_j)^(-1).
/// z may be interior or on the boundary.
cplx kernel_eval(const Domain& domain, const Point& a, const Point& z);

/// k_a(a) = ||k_a||_2^2, in closed form.
double kernel_diagonal(const Domain& domain, const Point& a);

/// Kernel samples at every node of `rule`.
std::vector<cplx> kernel_samples(const Point& a, const QuadratureRule& rule);
BoundarySamples kernel_samples(const Point& a, const RulePtr& rule);

/// ||k_a||_p measured with a fixed rule (no refinement).
double kernel_norm(const Point& a, double p, const QuadratureRule& rule);

/// Boundary rule resolving kernels at `points` to about `tol`: the truncated
/// Fourier tail of k_a decays like |a|^k. Ball sequences on the first axis
/// get a rule that only resolves z_1.
RulePtr adapted_rule(const Domain& domain, std::span<const Point> points, double tol = 1e-13);

/// Rule for pairing k_a with polynomials of degree <= `degree`. Ball rules
/// are rotated so that a lies on the first axis; the transverse directions
/// then only carry the polynomial.
RulePtr pairing_rule(const Domain& domain, const Point& a, int degree, double tol = 1e-13);

/// Point with the same kernel norms, rotated to nonnegative real coordinates
/// (disc, bidisc) or onto the first axis (ball).
Point canonical_point(const Domain& domain, const Point& a);

struct NormEntry {
    double value = 0.0;
    int resolution = 0;
    double residual = kInf;
    bool converged = false;
};

struct NormTable {
    Point a;
    /// k_a(a), closed form.
    double diagonal = 0.0;
    std::map<double, NormEntry> norms;

    /// Throws Dependency error when p was not computed. Exponents match to
    /// relative 1e-12.
    double norm(double p) const;
    bool has(double p) const;
    /// omega_q(a) = ||k_a||_{2q}^{-2q}.
    double omega(double q) const;
};

/// Refinement limits for kernel norms, per domain.
RefineOptions default_norm_refinement(const Domain& domain);

/// Adaptive, cached kernel norms. Integrals are evaluated in the canonical
/// frame of each point (norms are rotation invariant) and refined by
/// doubling until successive values of the integral agree to opts.tol.
/// Sup norms are exact: |k_a| peaks at the boundary point nearest to a.
class NormEngine {
public:
    explicit NormEngine(Domain domain);
    NormEngine(Domain domain, RefineOptions opts);

    const Domain& domain() const { return domain_; }
    const RefineOptions& options() const { return opts_; }

    const NormEntry& norm(const Point& a, double p);
    double value(const Point& a, double p) { return norm(a, p).value; }
    NormTable table(const Point& a, std::span<const double> exponents);

    /// Rule used at a given refinement level for the canonical frame.
    RulePtr canonical_rule(int resolution) const;

private:
    Domain domain_;
    RefineOptions opts_;
    std::map<std::pair<std::vector<double>, double>, NormEntry> cache_;
    std::map<int, RulePtr> rules_;
};

/// |<f, k_a> - f(a)|.
double reproducing_check(const std::function<cplx(const Point&)>& f, const Point& a,
                         const RulePtr& rule);

/// P_a = |k_a|^2 / k_a(a).
BoundarySamples poisson_kernel(const Point& a, const RulePtr& rule);

/// f*(a) = <f, k_a>.
cplx analytic_projection_eval(const BoundarySamples& f, const Point& a);

struct ShPoint {
    Point a;
    double ratio = 0.0;
    double residual = 0.0;
    bool excluded = false;
    std::string note;
};

struct ShConstants {
    std::string hypothesis;  // "SH(q)" or "SH(p,s)"
    double q = 0.0;
    double p = 0.0;
    double s = 0.0;
    /// SH(q): min of ||k_a||_2^2 / (||k_a||_q ||k_a||_q').
    std::optional<double> alpha;
    /// SH(p,s): max of ||k_a||_s' / (||k_a||_p' ||k_a||_q').
    std::optional<double> beta;
    double max_residual = 0.0;
    std::vector<ShPoint> points;
    std::vector<std::string> warnings;
};

/// Exponents with 1/s = 1/p + 1/q; p may be infinite, then q = s.
double dual_exponent_for_split(double s, double p);

ShConstants sh_q_scan(NormEngine& engine, double q, std::span<const Point> grid);
ShConstants sh_ps_scan(NormEngine& engine, double p, double s, std::span<const Point> grid);

/// Points r e^{i phi} (disc), (r e^{i phi}, 0) (ball) or (r, r e^{i phi}) (bidisc).
std::vector<Point> radial_grid(const Domain& domain, std::span<const double> radii,
                               int angles = 1);

struct InequalityPair {
    double lhs = 0.0;
    double rhs = 0.0;
    double theta = 0.0;
    bool holds = false;
};

/// ||k_a||_{2p} <= ||k_a||_2^{1-theta} ||k_a||_{2q}^theta with 1/p = (1-theta) + theta/q.
InequalityPair holder_interp_check(NormEngine& engine, const Point& a, double p, double q);

/// lhs = omega'_p(a) = ||k_a||_2^{-2p(1-theta)} ||k_a||_{2q}^{-2p theta},
/// rhs = omega_p(a) = ||k_a||_{2p}^{-2p}; holds iff lhs <= rhs (1 + 1e-10),
/// the interpolation inequality above raised to the power -2p.
InequalityPair stein_weiss_weight_check(NormEngine& engine, const Point& a, double p, double q);

}  // namespace hardy
