#pragma once

// Bergman spaces of B_n (weight (1-|z|^2)^k) realized inside the Hardy space
// of B_{n+k+1} by lifting f(z) to f~(z, w) = f(z).

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardy/extension.hpp"

namespace hardy {

using Evaluator = std::function<cplx(const Point&)>;

struct BergmanSpec {
    int n = 1;
    int k = 0;
    /// Starting Gauss-Legendre count in |z|; the angular count is twice that.
    int radial = 16;
    int max_radial = 512;
    double tol = 1e-10;
    /// Volume rule at the starting resolution.
    RulePtr rule;

    int lift_dim() const { return n + k + 1; }
    Domain base() const;
    Domain lifted() const;
};

/// Throws Parameter error unless n >= 1, k >= 0 and n + k + 1 <= 8.
BergmanSpec make_bergman_spec(int n = 1, int k = 0, int radial = 16);

/// Mass-one rule for (1-|z|^2)^k dV on B_n: Gauss-Legendre in |z| times a
/// boundary rule for the direction.
RulePtr build_volume_rule(int n, int k, int radial);

/// f~(z, w) = f(z), z the first n coordinates.
Evaluator lift(Evaluator f, int n);
/// F(z, 0) for F on B_dim.
Evaluator restrict_to_base(Evaluator f, int n, int dim);

struct NormResult {
    double value = 0.0;
    int resolution = 0;
    double residual = 0.0;
    bool converged = false;
};

/// (int_{B_n} |f|^p dA_k)^(1/p), refined by doubling; p = inf is a node max.
NormResult bergman_norm(const Evaluator& f, double p, const BergmanSpec& spec);

/// ||f~||_{H^p(B_{n+k+1})} for a lifted f, refined by doubling.
NormResult lifted_hardy_norm(const Evaluator& f, double p, const BergmanSpec& spec);

/// ||F||_{H^p(B_dim)} for a general F, on full sphere rules.
NormResult hardy_norm(const Evaluator& f, int dim, double p, int start = 8, int max = 32,
                      double tol = 1e-10);

struct SubordinationReport {
    NormResult bergman;
    NormResult hardy;
    double residual = 0.0;  // relative
};

SubordinationReport subordination_check(const Evaluator& f, double p, const BergmanSpec& spec);

/// (1-|a|^2)^(m/p') / (1 - <z,a>)^m with m = n + k + 1.
cplx bergman_kernel_eval(const Point& a, const Point& z, double p, const BergmanSpec& spec);

struct NormLink {
    double hardy = 0.0;    // ||k_(a,0)||_{H^p(B_{n+k+1})}
    double bergman = 0.0;  // ||(1 - <z,a>)^-(n+k+1)||_{A^p}
    double residual = 0.0;
    bool converged = false;
};

NormLink norm_link_check(const Point& a, double p, const BergmanSpec& spec);

struct BergmanExtension {
    std::shared_ptr<const ExtensionContext> ctx;
    std::vector<Point> embedded;
    /// U nu (z) = (T nu)(z, 0)
    Evaluator U;
    ExtensionResult hardy;
    std::vector<double> residuals;
    double relative_residual = 0.0;
    /// ||U nu||_{A^s}, refined, with its last refinement residual
    double norm_bergman = 0.0;
    double bergman_residual = 0.0;
    /// Both norms at one resolution: the sphere rule's leading level pushes
    /// forward to the volume rule, so the gap isolates any w dependence of T.
    int matched_resolution = 0;
    double norm_bergman_matched = 0.0;
    double norm_hardy = 0.0;
    bool contraction_holds = false;
    int lift_dim = 0;
};

/// Runs the Hardy extension on S~ = {(a, 0)} in B_{n+k+1} and restricts to
/// w = 0. Residuals are |U(a) - nu_a ||K_a||_{A^{s'}}| relative to the largest target.
BergmanExtension bergman_extension(const std::vector<Point>& s, std::span<const cplx> nu, double s_exp,
                                   double p, const BergmanSpec& spec,
                                   DualMethod method = DualMethod::Gram);

}  // namespace hardy
