#include "hardy/holo.hpp"

#include <map>

#include "hardy/simd.hpp"

namespace hardy {

namespace {

cplx blaschke(cplx b, cplx z) {
    if (b == 0.0) return -z;
    return (std::abs(b) / b) * (b - z) / (1.0 - std::conj(b) * z);
}

// Cache key of a factor: tag, power and base coordinates.
std::vector<double> factor_key(const Factor& f) {
    std::vector<double> key;
    if (const auto* k = std::get_if<KernelFactor>(&f)) {
        key.push_back(0.0);
        key.push_back(k->power);
        for (cplx c : k->base) {
            key.push_back(c.real());
            key.push_back(c.imag());
        }
    } else {
        const cplx b = std::get<BlaschkeFactor>(f).b;
        key = {1.0, 0.0, b.real(), b.imag()};
    }
    return key;
}

std::vector<cplx> factor_samples(const Factor& f, const QuadratureRule& rule) {
    std::vector<cplx> out(rule.size());
    if (const auto* k = std::get_if<KernelFactor>(&f)) {
        const auto ptrs = rule.coord_ptrs();
        const double min_re = simd::kernel_power(ptrs, k->base, k->power, out);
        require(out.empty() || min_re > 0.0, ErrorKind::Invariant,
                "kernel base has nonpositive real part on the rule");
    } else {
        const cplx b = std::get<BlaschkeFactor>(f).b;
        const auto& z = rule.coords.at(0);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] = blaschke(b, z[j]);
    }
    return out;
}

}  // namespace

cplx eval_factor(const Factor& f, const Point& z) {
    if (const auto* k = std::get_if<KernelFactor>(&f)) {
        require(k->base.size() == z.size(), ErrorKind::Shape, "kernel factor dimension mismatch");
        cplx w = 1.0;
        for (std::size_t d = 0; d < z.size(); ++d) w -= std::conj(k->base[d]) * z[d];
        require(w.real() > 0.0, ErrorKind::Invariant, "kernel base has nonpositive real part");
        cplx u = w;
        for (int i = 1; i < k->power; ++i) u *= w;
        return 1.0 / u;
    }
    return blaschke(std::get<BlaschkeFactor>(f).b, z.at(0));
}

HoloExpr HoloExpr::constant(const Domain& domain, cplx c) {
    HoloExpr e(domain);
    e.terms_.push_back(Term{c, {}});
    return e;
}

HoloExpr HoloExpr::kernel(const Domain& domain, const Point& a, cplx c) {
    domain.check_interior(a);
    HoloExpr e(domain);
    Term t{c, {}};
    if (domain.kind() == DomainKind::Bidisc) {
        t.factors.push_back(KernelFactor{{a[0], 0.0}, 1});
        t.factors.push_back(KernelFactor{{0.0, a[1]}, 1});
    } else {
        t.factors.push_back(KernelFactor{a, domain.dim()});
    }
    e.terms_.push_back(std::move(t));
    return e;
}

cplx HoloExpr::operator()(const Point& z) const {
    require(static_cast<int>(z.size()) == domain_.dim(), ErrorKind::Shape,
            "evaluation point has the wrong dimension");
    cplx sum = 0.0;
    for (const Term& t : terms_) {
        cplx v = t.coeff;
        for (const Factor& f : t.factors) v *= eval_factor(f, z);
        sum += v;
    }
    return sum;
}

std::vector<cplx> HoloExpr::samples(const QuadratureRule& rule) const {
    require(static_cast<int>(rule.coords.size()) == domain_.dim(), ErrorKind::Shape,
            "rule dimension does not match the expression");
    const std::size_t m = rule.size();
    std::vector<cplx> out(m, 0.0);
    std::map<std::vector<double>, std::vector<cplx>> cache;
    std::vector<cplx> prod(m);
    for (const Term& t : terms_) {
        if (t.factors.empty()) {
            for (cplx& v : out) v += t.coeff;
            continue;
        }
        std::fill(prod.begin(), prod.end(), t.coeff);
        for (const Factor& f : t.factors) {
            auto key = factor_key(f);
            auto it = cache.find(key);
            if (it == cache.end()) it = cache.emplace(std::move(key), factor_samples(f, rule)).first;
            const auto& fs = it->second;
            for (std::size_t j = 0; j < m; ++j) prod[j] *= fs[j];
        }
        for (std::size_t j = 0; j < m; ++j) out[j] += prod[j];
    }
    return out;
}

BoundarySamples HoloExpr::samples(const RulePtr& rule) const {
    return BoundarySamples{samples(*rule), rule};
}

HoloExpr& HoloExpr::operator+=(const HoloExpr& other) {
    require(domain_ == other.domain_, ErrorKind::Shape, "sum of expressions on different domains");
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

HoloExpr& HoloExpr::operator*=(cplx c) {
    for (Term& t : terms_) t.coeff *= c;
    return *this;
}

HoloExpr operator*(const HoloExpr& a, const HoloExpr& b) {
    require(a.domain_ == b.domain_, ErrorKind::Shape, "product of expressions on different domains");
    HoloExpr out(a.domain_);
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const Term& s : a.terms_) {
        for (const Term& t : b.terms_) {
            Term u{s.coeff * t.coeff, s.factors};
            u.factors.insert(u.factors.end(), t.factors.begin(), t.factors.end());
            out.terms_.push_back(std::move(u));
        }
    }
    return out;
}

}  // namespace hardy
