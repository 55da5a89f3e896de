#pragma once

// Finite point sequences: Gleason distances, Carleson constants and dual
// systems.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hardy/holo.hpp"
#include "hardy/kernels.hpp"

namespace hardy {

class PointSequence {
public:
    /// Throws Domain error for non-interior points, Contract error for
    /// repeated points or an empty list.
    PointSequence(Domain domain, std::vector<Point> points);

    const Domain& domain() const { return domain_; }
    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }

private:
    Domain domain_;
    std::vector<Point> points_;
};

/// Pseudo-hyperbolic distance; bidisc: max over coordinates.
double gleason_distance(const Domain& domain, const Point& a, const Point& b);

/// min_a prod_{b != a} d(a, b); 1 for a single point.
double gleason_product_delta(const PointSequence& s);

struct CarlesonWindow {
    double value = 0.0;
    double theta = 0.0;
    double ell = 0.0;
};

/// sup over windows {r e^{it} : 1 - ell <= r < 1, |t - theta| <= ell} of
/// sum_{a in window} (1 - |a|^2) / ell, with theta at each point's argument and
/// dyadic ell. Disc only.
CarlesonWindow carleson_window_constant(const PointSequence& s);

/// K(b, c) = k_c(b).
Eigen::MatrixXcd kernel_matrix(const PointSequence& s);

/// Normalized kernel samples k_a / ||k_a||_q, one column per point; the
/// norm is taken on the same rule.
Eigen::MatrixXcd normalized_kernel_columns(const PointSequence& s, double q,
                                           const QuadratureRule& rule);

struct CarlesonOptions {
    int restarts = 32;
    std::uint64_t seed = 0;
    int max_iter = 2000;
    double tol = 1e-15;
};

struct CarlesonReport {
    double q = 0.0;
    /// Best constant found (exact for q = 1 and q = 2, a lower bound otherwise).
    double value = 0.0;
    std::string method;
    std::vector<cplx> certificate;
    int restarts = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    std::string rule;
};

/// Smallest D with ||sum mu_a k_{q,a}||_q <= D ||mu||_q.
/// q = 1: vertex enumeration; q = 2: top eigenvalue of the closed-form Gram
/// matrix; otherwise nonlinear power iteration with restarts.
CarlesonReport carleson_constant(const PointSequence& s, double q, const RulePtr& rule,
                                 const CarlesonOptions& opts = {});

/// Nonlinear power iteration for any q >= 1, without the closed forms.
CarlesonReport carleson_power_iteration(const PointSequence& s, double q, const RulePtr& rule,
                                        const CarlesonOptions& opts = {});

/// Smallest D with ||sum |mu_a|^2 |k_{q,a}|^2||_{q/2} <= D ||mu||_q^2, q >= 2.
CarlesonReport weak_carleson_constant(const PointSequence& s, double q, const RulePtr& rule,
                                      const CarlesonOptions& opts = {});

enum class DualMethod { Gram, Collocation, Blaschke };
const char* to_string(DualMethod m);
DualMethod parse_dual_method(const std::string& name);

struct DualOptions {
    bool tikhonov = false;
    double max_condition = 1e12;
};

/// rho_a with rho_a(b) = delta_ab t_b, t_b = ||k_b||_{p'} for finite p and
/// t_b = 1 for p = inf. Collocation systems are rho_a = sum_c X(a, c) k_c;
/// Blaschke systems are disc Blaschke quotients.
struct DualSystem {
    Domain domain = Domain::disc();
    DualMethod method = DualMethod::Gram;
    double p = 2.0;
    std::vector<Point> points;
    std::vector<double> targets;
    Eigen::MatrixXcd coefficients;
    /// Blaschke: |B_a(a)| with B_a = prod_{b != a} of the Blaschke factors.
    std::vector<double> blaschke_modulus;
    double condition = 1.0;
    bool regularized = false;
    double delta_residual = 0.0;
    std::vector<std::string> warnings;

    std::size_t size() const { return points.size(); }
    cplx eval(std::size_t a, const Point& z) const;
    HoloExpr expr(std::size_t a) const;
    std::vector<cplx> samples(std::size_t a, const QuadratureRule& rule) const;
};

DualSystem dual_system_gram(const PointSequence& s, NormEngine& engine,
                            const DualOptions& opts = {});
DualSystem dual_system_collocation(const PointSequence& s, double p, NormEngine& engine,
                                   const DualOptions& opts = {});
DualSystem dual_system_blaschke(const PointSequence& s, double p, NormEngine& engine);
DualSystem make_dual_system(DualMethod method, const PointSequence& s, double p,
                            NormEngine& engine, const DualOptions& opts = {});

/// max_{a,b} |rho_a(b) - delta_ab t_b| / t_b.
double delta_residual(const DualSystem& d);

/// max_a ||rho_a||_p on the rule.
double dual_bound(const DualSystem& d, double p, const QuadratureRule& rule);

/// Closed form of sup |rho_a| for Blaschke systems: t_a / |B_a(a)|.
double blaschke_sup_norm(const DualSystem& d, std::size_t a);

}  // namespace hardy
