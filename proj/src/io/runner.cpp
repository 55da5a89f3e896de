#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "hardy/bergman.hpp"
#include "hardy/extension.hpp"
#include "hardy/random_signs.hpp"
#include "hardy/rng.hpp"
#include "hardy/runner.hpp"
#include "hardy/simd.hpp"

namespace hardy::io {

namespace {

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json jnum(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

json jc(cplx c) { return json::array({jnum(c.real()), jnum(c.imag())}); }

json jpoint(const Point& z) {
    if (z.size() == 1) return jc(z[0]);
    json a = json::array();
    for (cplx c : z) a.push_back(jc(c));
    return a;
}

std::vector<std::string> point_cells(const Point& z) {
    std::vector<std::string> out;
    for (cplx c : z) {
        out.push_back(num(c.real()));
        out.push_back(num(c.imag()));
    }
    return out;
}

std::vector<std::string> point_header(int dim) {
    std::vector<std::string> out;
    for (int d = 1; d <= dim; ++d) {
        out.push_back("re" + std::to_string(d));
        out.push_back("im" + std::to_string(d));
    }
    return out;
}

json jrule(const QuadratureRule& r) {
    return {{"description", r.description}, {"nodes", r.size()}, {"resolution", r.resolution}};
}

json jentry(const NormEntry& e) {
    return {{"value", jnum(e.value)}, {"resolution", e.resolution}, {"residual", jnum(e.residual)},
            {"converged", e.converged}};
}

struct Context {
    const RunConfig& cfg;
    RunResult& out;

    void check(bool ok, const std::string& what) {
        if (!ok) out.violations.push_back(what);
    }
    std::uint64_t seed(const std::string& step) const {
        if (!cfg.seed) fail(ErrorKind::Config, step + " is stochastic and needs a seed (--seed or \"seed\")");
        return *cfg.seed;
    }
    const std::vector<Point>& points(const std::string& step) const {
        if (cfg.points.empty()) fail(ErrorKind::Config, step + " needs points");
        return cfg.points;
    }
    RulePtr rule(const std::vector<Point>& pts) const {
        return cfg.resolution ? build_quadrature(cfg.domain, *cfg.resolution) : adapted_rule(cfg.domain, pts);
    }
};

json run_norms(Context& c) {
    const auto& pts = c.points("norms");
    NormEngine engine(c.cfg.domain);
    if (c.cfg.resolution) {
        RefineOptions o = engine.options();
        o.max = std::max(o.start, *c.cfg.resolution);
        engine = NormEngine(c.cfg.domain, o);
    }
    json rows = json::array();
    Table t{"norms", point_header(c.cfg.domain.dim()), {}};
    t.header.insert(t.header.begin(), "index");
    for (const char* h : {"p", "value", "resolution", "residual", "converged"}) t.header.push_back(h);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const NormTable tab = engine.table(pts[i], c.cfg.exponents);
        json norms = json::array();
        double l2 = 0.0;
        for (const auto& [p, e] : tab.norms) {
            json n = jentry(e);
            n["p"] = std::isinf(p) ? json("inf") : json(p);
            norms.push_back(n);
            if (p == 2.0) l2 = e.value;
            std::vector<std::string> row{std::to_string(i)};
            for (auto& s : point_cells(pts[i])) row.push_back(s);
            for (auto s : {exponent_label(p), num(e.value), std::to_string(e.resolution), num(e.residual),
                           std::string(e.converged ? "true" : "false")})
                row.push_back(s);
            t.rows.push_back(row);
        }
        json r{{"point", jpoint(pts[i])}, {"diagonal", tab.diagonal}, {"norms", norms}};
        if (l2 > 0.0) {
            const double rel = std::abs(l2 * l2 - tab.diagonal) / tab.diagonal;
            r["l2_diagonal_residual"] = rel;
            c.check(rel < 1e-10, "||k_a||_2^2 differs from k_a(a) at point " + std::to_string(i));
        }
        rows.push_back(r);
    }
    c.out.tables.push_back(t);
    return {{"refinement", {{"start", engine.options().start}, {"max", engine.options().max},
                            {"tol", engine.options().tol}}},
            {"points", rows}};
}

json sh_json(const ShConstants& sc, Table& t) {
    json pts = json::array();
    for (const ShPoint& p : sc.points) {
        pts.push_back({{"point", jpoint(p.a)}, {"ratio", jnum(p.ratio)}, {"residual", jnum(p.residual)},
                       {"excluded", p.excluded}});
        std::vector<std::string> row{sc.hypothesis, exponent_label(sc.q), exponent_label(sc.p), exponent_label(sc.s)};
        for (auto& s : point_cells(p.a)) row.push_back(s);
        row.push_back(num(p.ratio));
        row.push_back(num(p.residual));
        row.push_back(p.excluded ? "true" : "false");
        t.rows.push_back(row);
    }
    json j{{"hypothesis", sc.hypothesis}, {"q", jnum(sc.q)}, {"max_residual", jnum(sc.max_residual)},
           {"warnings", sc.warnings}, {"points", pts}};
    if (sc.alpha) j["alpha"] = *sc.alpha;
    if (sc.beta) j["beta"] = *sc.beta;
    if (sc.hypothesis == "SH(p,s)") {
        j["p"] = jnum(sc.p);
        j["s"] = jnum(sc.s);
    }
    return j;
}

json run_sh(Context& c) {
    NormEngine engine(c.cfg.domain);
    const auto grid = radial_grid(c.cfg.domain, c.cfg.radii, c.cfg.angles);
    Table t{"sh", {"hypothesis", "q", "p", "s"}, {}};
    for (auto& h : point_header(c.cfg.domain.dim())) t.header.push_back(h);
    for (const char* h : {"ratio", "residual", "excluded"}) t.header.push_back(h);
    json scans = json::array();
    for (double q : c.cfg.sh_q) {
        const ShConstants sc = sh_q_scan(engine, q, grid);
        double worst = 0.0;
        for (const auto& p : sc.points)
            if (!p.excluded) worst = std::max(worst, p.ratio);
        c.check(worst <= 1.0 + 1e-10, "SH(q) ratio above 1 for q=" + exponent_label(q));
        if (q == 2.0) {
            for (const auto& p : sc.points)
                if (!p.excluded) c.check(std::abs(p.ratio - 1.0) <= 1e-10, "SH(2) ratio differs from 1");
        }
        scans.push_back(sh_json(sc, t));
    }
    for (const ShPair& pr : c.cfg.sh_ps) scans.push_back(sh_json(sh_ps_scan(engine, pr.p, pr.s, grid), t));
    c.out.tables.push_back(t);
    return {{"grid_size", grid.size()}, {"scans", scans}};
}

json carleson_json(const CarlesonReport& r) {
    json cert = json::array();
    for (cplx v : r.certificate) cert.push_back(jc(v));
    return {{"q", r.q}, {"value", jnum(r.value)}, {"method", r.method}, {"restarts", r.restarts},
            {"seed", r.seed}, {"iterations", r.iterations}, {"rule", r.rule}, {"certificate", cert}};
}

json run_carleson(Context& c) {
    const auto& pts = c.points("carleson");
    PointSequence seq(c.cfg.domain, pts);
    const RulePtr rule = c.rule(pts);
    Table t{"carleson", {"kind", "q", "value", "method", "restarts", "seed"}, {}};
    json strong = json::array(), weak = json::array();
    for (double q : c.cfg.carleson_q) {
        CarlesonOptions o;
        o.restarts = c.cfg.restarts;
        if (q != 1.0 && q != 2.0) o.seed = c.seed("carleson power iteration");
        const CarlesonReport r = carleson_constant(seq, q, rule, o);
        strong.push_back(carleson_json(r));
        t.rows.push_back({"strong", num(q), num(r.value), r.method, std::to_string(r.restarts), std::to_string(r.seed)});
        if (pts.size() == 1) c.check(std::abs(r.value - 1.0) <= 1e-12, "single-point D_q differs from 1");
        if (q >= 2.0) {
            CarlesonOptions wo = o;
            if (q != 2.0) wo.seed = c.seed("weak Carleson power iteration");
            const CarlesonReport w = weak_carleson_constant(seq, q, rule, wo);
            weak.push_back(carleson_json(w));
            t.rows.push_back({"weak", num(q), num(w.value), w.method, std::to_string(w.restarts), std::to_string(w.seed)});
            if (q == 2.0) c.check(w.value <= 1.0 + 1e-10, "weak 2-Carleson constant above 1");
        }
    }
    // q-Carleson against weakly 2q-Carleson: reported, not asserted.
    json pairs = json::array();
    for (std::size_t i = 0; i < c.cfg.carleson_q.size(); ++i) {
        const double q = c.cfg.carleson_q[i];
        if (q != 1.0 && !c.cfg.seed) continue;
        CarlesonOptions wo;
        wo.restarts = c.cfg.restarts;
        if (q != 1.0) wo.seed = *c.cfg.seed;
        const CarlesonReport w = weak_carleson_constant(seq, 2.0 * q, rule, wo);
        const double d = strong[i].at("value").get<double>();
        pairs.push_back({{"q", q}, {"strong", d}, {"weak_2q", w.value}, {"ratio", w.value / d}, {"method", w.method}});
    }
    c.out.tables.push_back(t);
    json res{{"rule", jrule(*rule)}, {"strong", strong}, {"weak", weak}, {"strong_vs_weak_2q", pairs},
             {"gleason_delta", gleason_product_delta(seq)}};
    if (c.cfg.domain.kind() == DomainKind::Disc) {
        const CarlesonWindow w = carleson_window_constant(seq);
        res["window"] = {{"value", w.value}, {"theta", w.theta}, {"ell", w.ell}};
    }
    return res;
}

json run_dual(Context& c) {
    const auto& pts = c.points("dual");
    PointSequence seq(c.cfg.domain, pts);
    NormEngine engine(c.cfg.domain);
    const RulePtr rule = c.rule(pts);
    DualOptions o;
    o.tikhonov = c.cfg.tikhonov;
    const DualSystem d = make_dual_system(c.cfg.dual_method, seq, c.cfg.p, engine, o);
    Table t{"dual", {"index"}, {}};
    for (auto& h : point_header(c.cfg.domain.dim())) t.header.push_back(h);
    for (const char* h : {"target", "rho_norm_p", "blaschke_sup"}) t.header.push_back(h);
    json rows = json::array();
    for (std::size_t a = 0; a < d.size(); ++a) {
        const double np = lp_norm(*rule, d.samples(a, *rule), c.cfg.p);
        json r{{"point", jpoint(pts[a])}, {"target", d.targets[a]}, {"rho_norm_p", jnum(np)}};
        std::vector<std::string> row{std::to_string(a)};
        for (auto& s : point_cells(pts[a])) row.push_back(s);
        row.push_back(num(d.targets[a]));
        row.push_back(num(np));
        if (d.method == DualMethod::Blaschke) {
            const double sup = blaschke_sup_norm(d, a);
            r["blaschke_modulus"] = d.blaschke_modulus[a];
            r["sup_norm"] = sup;
            row.push_back(num(sup));
        } else {
            row.push_back("");
        }
        rows.push_back(r);
        t.rows.push_back(row);
    }
    c.out.tables.push_back(t);
    const double tol = d.method == DualMethod::Blaschke ? 1e-12 : 1e-9;
    c.check(d.regularized || d.delta_residual < tol, "dual delta residual above " + num(tol));
    return {{"method", to_string(d.method)}, {"p", jnum(d.p)}, {"condition", jnum(d.condition)},
            {"regularized", d.regularized}, {"delta_residual", d.delta_residual},
            {"dual_bound", jnum(dual_bound(d, c.cfg.p, *rule))}, {"rule", jrule(*rule)},
            {"warnings", d.warnings}, {"points", rows}};
}

json run_gleason(Context& c) {
    const auto& pts = c.points("gleason");
    PointSequence seq(c.cfg.domain, pts);
    Table t{"gleason", {"i", "j", "distance"}, {}};
    json m = json::array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const double d = gleason_distance(c.cfg.domain, pts[i], pts[j]);
            row.push_back(d);
            if (j > i) t.rows.push_back({std::to_string(i), std::to_string(j), num(d)});
        }
        m.push_back(row);
    }
    c.out.tables.push_back(t);
    json res{{"distances", m}, {"delta", gleason_product_delta(seq)}};
    if (c.cfg.domain.kind() == DomainKind::Disc) {
        const CarlesonWindow w = carleson_window_constant(seq);
        res["window"] = {{"value", w.value}, {"theta", w.theta}, {"ell", w.ell}};
    }
    return res;
}

std::vector<cplx> random_target(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
    auto rng = sub_generator(seed, stream);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

json run_extend(Context& c) {
    const auto& pts = c.points("extend");
    const std::uint64_t seed = c.seed("extend");
    const RunConfig& cfg = c.cfg;
    PointSequence seq(cfg.domain, pts);
    NormEngine engine(cfg.domain);
    const RulePtr rule = c.rule(pts);
    DualOptions o;
    o.tikhonov = cfg.tikhonov;
    const DualSystem dual = make_dual_system(cfg.dual_method, seq, cfg.p, engine, o);
    const ExtensionContext ctx = make_extension_context(seq, dual, cfg.s, cfg.p, engine, rule);
    const ExtensionResult ext = build_extension(ctx, cfg.nu);
    json res;
    res["rule"] = jrule(*rule);
    res["exponents"] = {{"s", jnum(cfg.s)}, {"p", jnum(cfg.p)}, {"q", jnum(ctx.q)}};
    res["dual"] = {{"method", to_string(dual.method)}, {"delta_residual", dual.delta_residual},
                   {"condition", jnum(dual.condition)}, {"regularized", dual.regularized}};
    json budget{{"warnings", ctx.budget.warnings}};
    if (ctx.budget.alpha) budget["alpha"] = *ctx.budget.alpha;
    if (ctx.budget.beta) budget["beta"] = *ctx.budget.beta;
    if (ctx.budget.value) budget["value"] = *ctx.budget.value;
    res["coefficients"] = {{"c", ctx.coeffs.c}, {"max_c", ctx.coeffs.max_c},
                           {"within_budget", ctx.coeffs.within_budget}, {"budget", budget}};
    json tables = json::array();
    for (const NormTable& tab : ctx.tables) {
        json n = json::array();
        for (const auto& [p, e] : tab.norms) {
            json x = jentry(e);
            x["p"] = std::isinf(p) ? json("inf") : json(p);
            n.push_back(x);
        }
        tables.push_back({{"diagonal", tab.diagonal}, {"norms", n}});
    }
    res["norm_tables"] = tables;
    res["interpolation"] = {{"residuals", ext.residuals}, {"relative_residual", ext.relative_residual},
                            {"norm_s", ext.norm_s}, {"norm_ratio", ext.norm_ratio}};
    c.check(ext.relative_residual < 1e-8, "interpolation residual above 1e-8");

    Table t{"residuals", {"index"}, {}};
    for (auto& h : point_header(cfg.domain.dim())) t.header.push_back(h);
    for (const char* h : {"nu_re", "nu_im", "target_abs", "residual", "c"}) t.header.push_back(h);
    for (std::size_t a = 0; a < pts.size(); ++a) {
        std::vector<std::string> row{std::to_string(a)};
        for (auto& s : point_cells(pts[a])) row.push_back(s);
        for (auto s : {num(cfg.nu[a].real()), num(cfg.nu[a].imag()), num(std::abs(cfg.nu[a]) * ctx.norm_s_dual[a]),
                       num(ext.residuals[a]), num(ctx.coeffs.c[a])})
            row.push_back(s);
        t.rows.push_back(row);
    }
    c.out.tables.push_back(t);

    const auto panel = test_panel(cfg.domain, 20, 0, seed);
    const LinearityReport lin = linearity_check(ctx, cfg.nu, random_target(seed, 7, pts.size()), cplx(1.3, -0.7), panel);
    res["linearity"] = {{"additivity", lin.additivity}, {"homogeneity", lin.homogeneity}, {"points", panel.size()}};
    c.check(lin.additivity < 1e-10 && lin.homogeneity < 1e-10, "linearity residual above 1e-10");

    ExpectOptions eo;
    eo.seed = seed;
    eo.samples = cfg.samples;
    eo.method = cfg.sign_method;
    const NormBoundReport nb = verify_norm_bound(ctx, cfg.batch, seed, eo);
    res["norm_bound"] = {{"c_i_estimate", nb.c_i_estimate}, {"c_i_argmax", nb.c_i_argmax},
                         {"farthest_unit_ratio", nb.farthest_unit_ratio}, {"min_unit_ratio", nb.min_unit_ratio},
                         {"holder_holds", nb.holder_holds}, {"worst_holder_ratio", nb.worst_holder_ratio},
                         {"constant_budget", jnum(nb.constant_budget)}, {"coefficient_bound", nb.coefficient_bound},
                         {"rho_bound", nb.rho_bound}, {"f_factor", nb.f_factor}, {"d_q", nb.d_q},
                         {"d_q_effective", nb.d_q_effective}, {"d_q_method", nb.d_q_method},
                         {"budget_holds", nb.budget_holds}, {"quadrature_residual", jnum(nb.quadrature_residual)},
                         {"sweep", nb.sweep_method}, {"patterns", nb.patterns}, {"batch", nb.batch},
                         {"seed", nb.seed}, {"warnings", nb.warnings}};
    c.check(nb.holder_holds, "Hoelder chain budget exceeded");
    c.check(nb.min_unit_ratio >= 1.0 - 1e-8, "unit-vector extension norm below 1");

    const SplitData split = split_target(cfg.nu, cfg.s, cfg.p);
    if (pts.size() <= static_cast<std::size_t>(kExactSignCap)) {
        const FactorizationReport fr = randomized_factorization(ctx, split, test_panel(cfg.domain, 20, 20, seed));
        res["factorization"] = {{"max_error", fr.max_error}, {"points", fr.points}, {"patterns", fr.patterns}};
        c.check(fr.max_error < 1e-10, "factorization identity error above 1e-10");
    } else {
        res["factorization"] = {{"skipped", "exact enumeration is capped at " + std::to_string(kExactSignCap) + " points"}};
    }

    if (cfg.p <= 2.0) {
        const ExpectationBoundReport e = dual_expectation_bound_p_le_2(dual, split.lambda, *rule, eo);
        json j{{"ratio", e.ratio}, {"khintchine_factor", e.khintchine_factor}, {"rho_bound", e.rho_bound},
               {"bound", e.bound}, {"holds", e.holds}, {"nodes", e.nodes},
               {"pointwise_violations", e.pointwise_violations}, {"sweep", e.sweep_method}};
        if (e.orthogonality_residual) j["orthogonality_residual"] = *e.orthogonality_residual;
        res["expectation_p_le_2"] = j;
        c.check(e.holds, "p <= 2 expectation bound failed");
        const TypeReport tp = type_p_bound_check(dual, split.lambda, *rule, eo);
        res["type_p"] = {{"ratio", tp.ratio}, {"expectation", tp.expectation}, {"denominator", tp.denominator}};
    }
    if (std::isinf(cfg.p) && dual.method == DualMethod::Blaschke) {
        const ExpectationBoundReport e =
            dual_expectation_bound_infty(seq, dual, cfg.infty_route_p, split.lambda, rule, eo);
        res["expectation_infty"] = {{"route_p", cfg.infty_route_p}, {"ratio", e.ratio},
                                    {"khintchine_factor", e.khintchine_factor}, {"rho_bound", e.rho_bound},
                                    {"max_rho_p_norm", e.max_rho_p_norm}, {"rho_p_norm_holds", e.rho_p_norm_holds},
                                    {"weak_constant", e.weak_constant},
                                    {"weak_constant_effective", e.weak_constant_effective}, {"bound", e.bound},
                                    {"holds", e.holds}, {"pointwise_violations", e.pointwise_violations},
                                    {"sweep", e.sweep_method}};
        c.check(e.holds, "p = inf expectation chain failed");
    }
    return res;
}

json run_khintchine(Context& c) {
    const std::uint64_t seed = c.seed("khintchine");
    const KhintchineSweep& k = c.cfg.khintchine;
    Table t{"khintchine", {"q", "N", "ratio", "method", "stderr"}, {}};
    json per_q = json::array();
    std::uint64_t stream = 0;
    ExpectOptions eo;
    eo.seed = seed;
    eo.samples = c.cfg.samples;
    eo.method = c.cfg.sign_method;
    for (double q : k.q) {
        double lo = kInf, hi = 0.0;
        for (int n = 1; n <= k.max_length; ++n) {
            for (int v = 0; v < k.vectors; ++v) {
                const auto x = random_target(seed, 1000 + stream++, static_cast<std::size_t>(n));
                const KhintchineResult r = khintchine_ratio(x, q, eo);
                lo = std::min(lo, r.ratio);
                hi = std::max(hi, r.ratio);
                t.rows.push_back({num(q), std::to_string(n), num(r.ratio), r.expectation.method,
                                  num(r.expectation.stderr_value)});
                if (q == 2.0 && r.expectation.method == "exact")
                    c.check(std::abs(r.ratio - 1.0) <= 1e-12, "q = 2 Khintchine ratio differs from 1");
            }
        }
        per_q.push_back({{"q", q}, {"min_ratio", lo}, {"max_ratio", hi}});
    }
    c.out.tables.push_back(t);
    return {{"seed", seed}, {"vectors_per_length", k.vectors}, {"max_length", k.max_length}, {"summary", per_q}};
}

json run_bergman(Context& c) {
    const RunConfig& cfg = c.cfg;
    const BergmanSpec spec = make_bergman_spec(cfg.bergman_n, cfg.bergman_k);
    if (!(cfg.domain == spec.base()))
        fail(ErrorKind::Config, "bergman points live in " + spec.base().name() + "; set domain accordingly");
    const auto& pts = c.points("bergman");
    json res;
    res["spec"] = {{"n", spec.n}, {"k", spec.k}, {"lift_dim", spec.lift_dim()}, {"radial_start", spec.radial},
                   {"radial_max", spec.max_radial}, {"tol", spec.tol}};
    json sub = json::array();
    double worst = 0.0;
    for (int m = 0; m <= 6; ++m) {
        for (double p : {1.0, 2.0, 4.0}) {
            const Evaluator f = [m](const Point& z) { return std::pow(z[0], m); };
            const SubordinationReport r = subordination_check(f, p, spec);
            worst = std::max(worst, r.residual);
            sub.push_back({{"m", m}, {"p", p}, {"bergman", r.bergman.value}, {"hardy", r.hardy.value},
                           {"residual", r.residual}, {"resolution", r.bergman.resolution},
                           {"refinement_residual", jnum(r.bergman.residual)}});
        }
    }
    res["subordination"] = {{"monomials", sub}, {"max_residual", worst}};
    c.check(worst < 1e-8, "subordination residual above 1e-8");

    json links = json::array();
    const double sc = conjugate_exponent(cfg.s);
    for (const Point& a : pts) {
        const NormLink l = norm_link_check(a, sc, spec);
        links.push_back({{"point", jpoint(a)}, {"hardy", l.hardy}, {"bergman", l.bergman},
                         {"residual", l.residual}, {"converged", l.converged}});
    }
    res["norm_link"] = links;

    const BergmanExtension ext = bergman_extension(pts, cfg.nu, cfg.s, cfg.p, spec, cfg.dual_method);
    res["extension"] = {{"residuals", ext.residuals}, {"relative_residual", ext.relative_residual},
                        {"norm_bergman", ext.norm_bergman}, {"bergman_residual", jnum(ext.bergman_residual)},
                        {"matched_resolution", ext.matched_resolution},
                        {"norm_bergman_matched", ext.norm_bergman_matched}, {"norm_hardy", ext.norm_hardy},
                        {"contraction_holds", ext.contraction_holds}, {"lift_dim", ext.lift_dim}};
    c.check(ext.relative_residual < 1e-8, "Bergman interpolation residual above 1e-8");
    c.check(ext.contraction_holds, "restriction norm exceeds the lifted Hardy norm");

    Table t{"bergman", {"index"}, {}};
    for (auto& h : point_header(spec.n)) t.header.push_back(h);
    t.header.push_back("residual");
    for (std::size_t a = 0; a < pts.size(); ++a) {
        std::vector<std::string> row{std::to_string(a)};
        for (auto& s : point_cells(pts[a])) row.push_back(s);
        row.push_back(num(ext.residuals[a]));
        t.rows.push_back(row);
    }
    c.out.tables.push_back(t);
    return res;
}

using Runner = json (*)(Context&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> m{
        {"norms", run_norms},       {"sh", run_sh},         {"carleson", run_carleson},
        {"dual", run_dual},         {"gleason", run_gleason}, {"extend", run_extend},
        {"khintchine", run_khintchine}, {"bergman", run_bergman}};
    return m;
}

}  // namespace

json rule_to_json(const QuadratureRule& rule) {
    json coords = json::array();
    for (const auto& c : rule.coords) {
        std::vector<double> re(c.size()), im(c.size());
        for (std::size_t j = 0; j < c.size(); ++j) {
            re[j] = c[j].real();
            im[j] = c[j].imag();
        }
        coords.push_back({{"re", re}, {"im", im}});
    }
    return {{"domain", rule.domain.name()}, {"description", rule.description}, {"resolution", rule.resolution},
            {"volume", rule.volume}, {"weights", rule.weights}, {"coords", coords}};
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> v{"norms", "sh",     "carleson",   "dual",   "gleason",
                                            "extend", "khintchine", "bergman", "report"};
    return v;
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return os.str();
}

RunResult run(const std::string& command, const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    RunResult out;
    Context ctx{cfg, out};
    json results;
    if (command == "report") {
        // Everything the config supports, in a fixed order.
        std::vector<std::string> parts{"sh"};
        if (!cfg.points.empty()) {
            for (const char* s : {"norms", "gleason", "carleson", "dual"}) parts.push_back(s);
            if (cfg.seed) parts.push_back("extend");
            if (cfg.domain == Domain::disc() && cfg.bergman_n == 1) parts.push_back("bergman");
        }
        if (cfg.seed) parts.push_back("khintchine");
        for (const auto& p : parts) {
            if (p == "carleson" && !cfg.seed) {
                bool needs_seed = false;
                for (double q : cfg.carleson_q) needs_seed = needs_seed || (q != 1.0 && q != 2.0);
                if (needs_seed) continue;
            }
            results[p] = runners().at(p)(ctx);
        }
    } else {
        auto it = runners().find(command);
        if (it == runners().end()) fail(ErrorKind::Config, "unknown subcommand '" + command + "'");
        results = it->second(ctx);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report = {{"command", command},
                  {"config", cfg.echo},
                  {"simd", simd::to_string(simd::active())},
                  {"results", results},
                  {"violations", out.violations},
                  {"wall_clock_seconds", secs}};
    return out;
}

}  // namespace hardy::io
