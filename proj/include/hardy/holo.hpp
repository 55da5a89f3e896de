#pragma once

// Finite sums of products of kernel powers and disc Blaschke factors.

#include <variant>
#include <vector>

#include "hardy/geometry.hpp"

namespace hardy {

/// (1 - <z, base>)^(-power). Bidisc kernels use one factor per coordinate,
/// with the other coordinate of `base` set to zero.
struct KernelFactor {
    Point base;
    int power = 1;
};

/// (|b|/b) (b - z_1) / (1 - conj(b) z_1), or -z_1 when b = 0.
struct BlaschkeFactor {
    cplx b;
};

using Factor = std::variant<KernelFactor, BlaschkeFactor>;

struct Term {
    cplx coeff = 1.0;
    std::vector<Factor> factors;
};

cplx eval_factor(const Factor& f, const Point& z);

class HoloExpr {
public:
    explicit HoloExpr(Domain domain) : domain_(domain) {}

    static HoloExpr constant(const Domain& domain, cplx c);
    /// c * k_a.
    static HoloExpr kernel(const Domain& domain, const Point& a, cplx c = 1.0);

    const Domain& domain() const { return domain_; }
    const std::vector<Term>& terms() const { return terms_; }
    void add_term(Term t) { terms_.push_back(std::move(t)); }

    cplx operator()(const Point& z) const;
    /// Values at every node; factor samples are shared between terms.
    std::vector<cplx> samples(const QuadratureRule& rule) const;
    BoundarySamples samples(const RulePtr& rule) const;

    HoloExpr& operator+=(const HoloExpr& other);
    HoloExpr& operator*=(cplx c);
    friend HoloExpr operator+(HoloExpr a, const HoloExpr& b) { return a += b; }
    friend HoloExpr operator*(cplx c, HoloExpr a) { return a *= c; }
    /// Product, distributed over terms.
    friend HoloExpr operator*(const HoloExpr& a, const HoloExpr& b);

private:
    Domain domain_;
    std::vector<Term> terms_;
};

}  // namespace hardy
