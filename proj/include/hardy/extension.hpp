#pragma once

// The linear extension h = sum_a nu_a c_a rho_a k_{q,a} built from a dual
// system, its randomized factorization and the expectation bounds behind it.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/random_signs.hpp"
#include "hardy/sequences.hpp"

namespace hardy {

/// nu = lambda * mu entrywise with ||nu||_s = ||lambda||_p ||mu||_q, 1/s = 1/p + 1/q.
struct SplitData {
    std::vector<cplx> nu;
    std::vector<cplx> lambda;
    std::vector<double> mu;
    double s = 1.0;
    double p = 2.0;
    double q = 2.0;
};

/// q from 1/s = 1/p + 1/q (q = s when p = inf).
double split_exponent(double s, double p);

/// mu_a = |nu_a|^(s/q), lambda_a = sgn(nu_a) |nu_a|^(s/p); for p = inf
/// lambda_a = sgn(nu_a), mu_a = |nu_a|. Zero entries give zero parts.
SplitData split_target(std::span<const cplx> nu, double s, double p);

/// l^p norm of a vector, p = inf allowed.
double vector_norm(std::span<const cplx> v, double p);
double vector_norm(std::span<const double> v, double p);

struct ExtensionCoeffs {
    std::vector<double> c;
    double max_c = 0.0;
    /// alpha^-1 beta from the kernel scans, when available.
    std::optional<double> budget;
    bool within_budget = true;
};

/// c_a = ||k_a||_{s'} ||k_a||_q / (t_a k_a(a)) with t_a the dual target
/// (||k_a||_{p'}, or 1 for p = inf). Tables need s', q and, for finite p, p'.
ExtensionCoeffs coeff_c(const PointSequence& s, double s_exp, double p,
                        std::span<const NormTable> tables, std::optional<double> budget = {});

struct BudgetReport {
    std::optional<double> alpha;
    std::optional<double> beta;
    /// Bound for max_a c_a: alpha^-1 beta, or alpha^-1 for p = inf.
    std::optional<double> value;
    ShConstants alpha_scan;
    ShConstants beta_scan;
    std::vector<std::string> warnings;
};

/// Kernel-hypothesis constants over S and the origin.
BudgetReport extension_budget(NormEngine& engine, const PointSequence& s, double s_exp, double p);

/// Everything that does not depend on the target: norms, coefficients and
/// the samples of P_a = c_a rho_a k_{q,a}, so that h = sum nu_a P_a.
struct ExtensionContext {
    ExtensionContext(PointSequence s, DualSystem d) : seq(std::move(s)), dual(std::move(d)) {}

    PointSequence seq;
    DualSystem dual;
    double s = 1.0;
    double p = 2.0;
    double q = 2.0;
    RulePtr rule;
    std::vector<NormTable> tables;
    ExtensionCoeffs coeffs;
    BudgetReport budget;
    std::vector<double> norm_q;        // ||k_a||_q
    std::vector<double> norm_s_dual;   // ||k_a||_{s'}
    std::vector<std::vector<cplx>> rho;  // rho_a on the rule
    std::vector<std::vector<cplx>> kq;   // k_a / ||k_a||_q on the rule
    std::vector<std::vector<cplx>> P;
};

/// Throws Contract error when the dual system does not match S or p.
ExtensionContext make_extension_context(const PointSequence& s, const DualSystem& dual,
                                        double s_exp, double p, NormEngine& engine,
                                        RulePtr rule);

cplx extension_eval(const ExtensionContext& ctx, std::span<const cplx> nu, const Point& z);
HoloExpr extension_expr(const ExtensionContext& ctx, std::span<const cplx> nu);
std::vector<cplx> extension_samples(const ExtensionContext& ctx, std::span<const cplx> nu);

struct ExtensionResult {
    HoloExpr h{Domain::disc()};
    /// |h(a) - nu_a ||k_a||_{s'}|
    std::vector<double> residuals;
    /// max residual / max_a |nu_a| ||k_a||_{s'}
    double relative_residual = 0.0;
    double norm_s = 0.0;
    double norm_ratio = 0.0;
};

ExtensionResult build_extension(const ExtensionContext& ctx, std::span<const cplx> nu);

struct LinearityReport {
    double additivity = 0.0;
    double homogeneity = 0.0;
};

/// Pointwise max of |E(nu1+nu2) - E(nu1) - E(nu2)| and |E(c nu1) - c E(nu1)|,
/// each relative to 1 + |E(.)|.
LinearityReport linearity_check(const ExtensionContext& ctx, std::span<const cplx> nu1,
                                std::span<const cplx> nu2, cplx c, std::span<const Point> points);

/// Seeded panel of interior points (|z| <= 0.9) and boundary points.
std::vector<Point> test_panel(const Domain& domain, int interior, int boundary, std::uint64_t seed);

struct HolderCheck {
    double norm_h = 0.0;
    double norm_nu = 0.0;
    /// (E||f||_p^p)^(1/p) (E||g||_q^q)^(1/q); sup|f| (E||g||_s^s)^(1/s) for p = inf
    double budget = 0.0;
    double budget_upper = 0.0;  // with 4 stderr added to each expectation
    bool holds = false;
};

struct NormBoundReport {
    std::vector<double> ratios;
    /// Batch max of ||h||_s / ||nu||_s, a lower bound for the interpolation constant.
    double c_i_estimate = 0.0;
    std::size_t c_i_argmax = 0;
    /// Ratio for the unit vector at the point farthest from the origin.
    double farthest_unit_ratio = 0.0;
    double min_unit_ratio = 0.0;
    std::vector<HolderCheck> holder;
    bool holder_holds = true;
    double worst_holder_ratio = 0.0;  // max ||h||_s / budget
    /// Upper bound assembled from measured pieces: coefficient bound,
    /// sup_a ||rho_a||_p, the measured sign factor for f and D_q.
    double constant_budget = 0.0;
    double coefficient_bound = 0.0;
    double rho_bound = 0.0;
    double f_factor = 0.0;
    double d_q = 0.0;
    double d_q_effective = 0.0;
    std::string d_q_method;
    bool budget_holds = true;
    /// |‖h‖_s(rule) - ‖h‖_s(refined rule)| / ‖h‖_s at the worst target; NaN if unavailable.
    double quadrature_residual = 0.0;
    std::string sweep_method;
    std::uint64_t patterns = 0;
    std::uint64_t batch = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
};

/// Random l^s-sphere targets plus every unit vector.
NormBoundReport verify_norm_bound(const ExtensionContext& ctx, int batch, std::uint64_t seed,
                                  const ExpectOptions& opts = {});

struct FactorizationReport {
    double max_error = 0.0;  // max |h - E[f g]| / (1 + |h|)
    std::size_t points = 0;
    std::uint64_t patterns = 0;
};

/// f = sum lambda_a c_a eps_a rho_a, g = sum mu_a eps_a k_{q,a}; checks h = E[f g]
/// at the given points with exact enumeration.
FactorizationReport randomized_factorization(const ExtensionContext& ctx, const SplitData& split,
                                             std::span<const Point> points);

struct ExpectationBoundReport {
    double p = 0.0;
    /// E||sum lambda_a eps_a rho_{p,a}||_p^p / ||lambda||_p^p
    double ratio = 0.0;
    double expectation = 0.0;
    /// E / int (sum |lambda_a rho_{p,a}|^2)^(p/2), the measured sign factor
    double khintchine_factor = 0.0;
    /// sup_a ||rho_{p,a}||_p (p <= 2) or sup_a ||rho_a||_inf (p = inf route)
    double rho_bound = 0.0;
    double bound = 0.0;
    bool holds = false;
    std::size_t nodes = 0;
    std::size_t pointwise_violations = 0;
    /// p = 2: |E - sum |lambda_a|^2 ||rho_a||_2^2| / E
    std::optional<double> orthogonality_residual;
    /// p = inf route: max_a ||rho_a k_{p,a}||_p and the weak p-Carleson pieces.
    double max_rho_p_norm = 0.0;
    bool rho_p_norm_holds = true;
    double weak_constant = 0.0;
    double weak_constant_effective = 0.0;
    std::string sweep_method;
};

/// p <= 2 route with rho_{p,a} = rho_a.
ExpectationBoundReport dual_expectation_bound_p_le_2(const DualSystem& dual, std::span<const cplx> lambda,
                                                     const QuadratureRule& rule,
                                                     const ExpectOptions& opts = {});

/// p = inf route: rho_{p,a} = rho_a k_{p,a} with a Blaschke system, p >= 2.
ExpectationBoundReport dual_expectation_bound_infty(const PointSequence& s, const DualSystem& dual,
                                                    double p, std::span<const cplx> lambda,
                                                    const RulePtr& rule,
                                                    const ExpectOptions& opts = {});

struct TypeReport {
    double ratio = 0.0;
    double expectation = 0.0;
    double denominator = 0.0;
};

/// E||sum lambda_a eps_a rho_a||_p^p / sum |lambda_a|^p ||rho_a||_p^p, p <= 2.
TypeReport type_p_bound_check(const DualSystem& dual, std::span<const cplx> lambda,
                              const QuadratureRule& rule, const ExpectOptions& opts = {});

}  // namespace hardy
