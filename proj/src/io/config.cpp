#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hardy/runner.hpp"

namespace hardy::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::Config, what); }

double exponent(const json& v, const std::string& key) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        bad(key + ": unknown exponent '" + s + "'");
    }
    if (!v.is_number()) bad(key + ": exponent must be a number or \"inf\"");
    const double p = v.get<double>();
    if (!(p >= 1.0)) bad(key + ": exponents must be >= 1");
    return p;
}

json exponent_json(double p) { return std::isinf(p) ? json("inf") : json(p); }

cplx complex_value(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    bad(key + ": complex values are numbers or [re, im]");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

Point point_value(const json& v, int dim, const std::string& key) {
    if (dim == 1) return {complex_value(v, key)};
    if (!v.is_array() || static_cast<int>(v.size()) != dim)
        bad(key + ": points need " + std::to_string(dim) + " coordinates");
    Point z;
    for (const auto& c : v) z.push_back(complex_value(c, key));
    return z;
}

std::vector<Point> points_from_csv(const std::filesystem::path& path, int dim) {
    std::ifstream in(path);
    if (!in) bad("cannot open points CSV " + path.string());
    std::vector<Point> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> vals;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (out.empty()) continue;  // header
            bad(path.string() + ":" + std::to_string(lineno) + ": non-numeric cell");
        }
        if (static_cast<int>(vals.size()) != 2 * dim)
            bad(path.string() + ":" + std::to_string(lineno) + ": expected re,im per coordinate");
        Point z;
        for (int d = 0; d < dim; ++d) z.emplace_back(vals[2 * d], vals[2 * d + 1]);
        out.push_back(z);
    }
    return out;
}

std::vector<double> exponent_list(const json& j, const std::string& key) {
    if (!j.is_array()) bad(key + " must be an array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(exponent(v, key));
    return out;
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        bad(key + ": " + e.what());
    }
}

const std::set<std::string> kKeys{
    "domain", "points", "points_csv", "s", "p", "q", "nu", "exponents", "carleson_q", "sh_q",
    "sh_ps", "radii", "angles", "dual_method", "tikhonov", "resolution", "seed", "batch",
    "restarts", "samples", "sign_method", "infty_route_p", "khintchine", "bergman"};

void refresh_echo(RunConfig& c) {
    json e;
    e["domain"] = c.domain.name();
    json pts = json::array();
    for (const Point& z : c.points) {
        if (z.size() == 1) {
            pts.push_back(complex_json(z[0]));
        } else {
            json row = json::array();
            for (cplx v : z) row.push_back(complex_json(v));
            pts.push_back(row);
        }
    }
    e["points"] = pts;
    e["s"] = exponent_json(c.s);
    e["p"] = exponent_json(c.p);
    e["q"] = exponent_json(c.q);
    json nu = json::array();
    for (cplx v : c.nu) nu.push_back(complex_json(v));
    e["nu"] = nu;
    auto list = [](const std::vector<double>& v) {
        json a = json::array();
        for (double x : v) a.push_back(exponent_json(x));
        return a;
    };
    e["exponents"] = list(c.exponents);
    e["carleson_q"] = list(c.carleson_q);
    e["sh_q"] = list(c.sh_q);
    json ps = json::array();
    for (const auto& pr : c.sh_ps) ps.push_back({{"p", exponent_json(pr.p)}, {"s", exponent_json(pr.s)}});
    e["sh_ps"] = ps;
    e["radii"] = c.radii;
    e["angles"] = c.angles;
    e["dual_method"] = to_string(c.dual_method);
    e["tikhonov"] = c.tikhonov;
    e["resolution"] = c.resolution ? json(*c.resolution) : json(nullptr);
    e["seed"] = c.seed ? json(*c.seed) : json(nullptr);
    e["batch"] = c.batch;
    e["restarts"] = c.restarts;
    e["samples"] = c.samples;
    e["sign_method"] = c.sign_method == ExpectMethod::Exact        ? "exact"
                       : c.sign_method == ExpectMethod::MonteCarlo ? "monte-carlo"
                                                                   : "auto";
    e["infty_route_p"] = exponent_json(c.infty_route_p);
    e["khintchine"] = {{"q", list(c.khintchine.q)},
                       {"max_length", c.khintchine.max_length},
                       {"vectors", c.khintchine.vectors}};
    e["bergman"] = {{"n", c.bergman_n}, {"k", c.bergman_k}};
    c.echo = e;
}

}  // namespace

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) bad("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!kKeys.count(key)) bad("unknown config key '" + key + "'");
    }
    RunConfig c;
    try {
        c.domain = Domain::parse(get_or<std::string>(j, "domain", "disc"));
    } catch (const Error& e) {
        bad(e.what());
    }
    const int dim = c.domain.dim();
    if (j.contains("points") && j.contains("points_csv")) bad("give either points or points_csv");
    if (j.contains("points")) {
        if (!j["points"].is_array()) bad("points must be an array");
        for (const auto& v : j["points"]) c.points.push_back(point_value(v, dim, "points"));
    }
    if (j.contains("points_csv")) {
        std::filesystem::path path = get_or<std::string>(j, "points_csv", "");
        if (path.is_relative()) path = base_dir / path;
        c.points = points_from_csv(path, dim);
    }
    for (const Point& z : c.points) {
        if (!c.domain.is_interior(z)) bad("every point must lie inside the " + c.domain.name());
    }

    if (j.contains("s")) c.s = exponent(j["s"], "s");
    if (j.contains("p")) c.p = exponent(j["p"], "p");
    if (!(c.s < c.p)) bad("exponents need 1 <= s < p");
    c.q = std::isinf(c.p) ? c.s : 1.0 / (1.0 / c.s - 1.0 / c.p);
    if (j.contains("q")) {
        const double q = exponent(j["q"], "q");
        if (std::abs(q - c.q) > 1e-12 * c.q)
            bad("q must satisfy 1/s = 1/p + 1/q (expected " + exponent_label(c.q) + ")");
    }

    if (j.contains("nu")) {
        if (!j["nu"].is_array()) bad("nu must be an array");
        for (const auto& v : j["nu"]) c.nu.push_back(complex_value(v, "nu"));
        if (c.nu.size() != c.points.size()) bad("nu needs one entry per point");
    } else {
        c.nu.assign(c.points.size(), 1.0);
    }

    c.exponents = j.contains("exponents") ? exponent_list(j["exponents"], "exponents")
                                          : std::vector<double>{1.0, 4.0 / 3.0, 2.0, 4.0, kInf};
    if (j.contains("carleson_q")) c.carleson_q = exponent_list(j["carleson_q"], "carleson_q");
    for (double q : c.carleson_q)
        if (std::isinf(q)) bad("carleson_q must be finite");
    c.sh_q = j.contains("sh_q") ? exponent_list(j["sh_q"], "sh_q") : std::vector<double>{4.0 / 3.0, 2.0, 4.0};
    for (double q : c.sh_q)
        if (!(q > 1.0) || std::isinf(q)) bad("sh_q entries must lie in (1, inf)");
    if (j.contains("sh_ps")) {
        if (!j["sh_ps"].is_array()) bad("sh_ps must be an array of {p, s}");
        c.sh_ps.clear();
        for (const auto& v : j["sh_ps"]) {
            if (!v.is_object() || !v.contains("p") || !v.contains("s")) bad("sh_ps entries need p and s");
            ShPair pr{exponent(v["p"], "sh_ps.p"), exponent(v["s"], "sh_ps.s")};
            if (!(pr.s < pr.p)) bad("sh_ps entries need s < p");
            c.sh_ps.push_back(pr);
        }
    }
    c.radii = get_or<std::vector<double>>(j, "radii", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95});
    for (double r : c.radii)
        if (!(r >= 0.0 && r < 1.0)) bad("radii must lie in [0, 1)");
    c.angles = get_or<int>(j, "angles", 1);
    if (c.angles < 1) bad("angles must be >= 1");

    try {
        c.dual_method = parse_dual_method(get_or<std::string>(j, "dual_method", c.p == 2.0 ? "gram" : "collocation"));
    } catch (const Error& e) {
        bad(e.what());
    }
    if (c.dual_method == DualMethod::Gram && c.p != 2.0) bad("the gram dual needs p = 2");
    if (c.dual_method == DualMethod::Blaschke && c.domain.kind() != DomainKind::Disc)
        bad("the blaschke dual exists on the disc only");
    c.tikhonov = get_or<bool>(j, "tikhonov", false);
    if (j.contains("resolution")) {
        c.resolution = get_or<int>(j, "resolution", 0);
        if (*c.resolution < 4) bad("resolution must be >= 4");
    }
    if (j.contains("seed")) c.seed = get_or<std::uint64_t>(j, "seed", 0);
    c.batch = get_or<int>(j, "batch", 64);
    if (c.batch < 1) bad("batch must be >= 1");
    c.restarts = get_or<int>(j, "restarts", 32);
    if (c.restarts < 0) bad("restarts must be >= 0");
    c.samples = get_or<std::uint64_t>(j, "samples", 1 << 16);
    if (c.samples < 1) bad("samples must be >= 1");
    const std::string sm = get_or<std::string>(j, "sign_method", "auto");
    if (sm == "exact") {
        c.sign_method = ExpectMethod::Exact;
    } else if (sm == "monte-carlo") {
        c.sign_method = ExpectMethod::MonteCarlo;
    } else if (sm != "auto") {
        bad("sign_method must be auto, exact or monte-carlo");
    }
    if (j.contains("infty_route_p")) c.infty_route_p = exponent(j["infty_route_p"], "infty_route_p");
    if (j.contains("khintchine")) {
        const json& k = j["khintchine"];
        if (!k.is_object()) bad("khintchine must be an object");
        if (k.contains("q")) c.khintchine.q = exponent_list(k["q"], "khintchine.q");
        for (double q : c.khintchine.q)
            if (std::isinf(q)) bad("khintchine.q must be finite");
        c.khintchine.max_length = get_or<int>(k, "max_length", 12);
        c.khintchine.vectors = get_or<int>(k, "vectors", 10);
        if (c.khintchine.max_length < 1 || c.khintchine.vectors < 1)
            bad("khintchine.max_length and khintchine.vectors must be >= 1");
    }
    if (j.contains("bergman")) {
        const json& b = j["bergman"];
        if (!b.is_object()) bad("bergman must be an object");
        c.bergman_n = get_or<int>(b, "n", 1);
        c.bergman_k = get_or<int>(b, "k", 0);
        if (c.bergman_n < 1 || c.bergman_k < 0 || c.bergman_n + c.bergman_k + 1 > 8)
            bad("bergman needs n >= 1, k >= 0 and n + k + 1 <= 8");
    }
    refresh_echo(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        bad(path.string() + ": " + e.what());
    }
    return parse_config(j, path.parent_path());
}

void apply_overrides(RunConfig& cfg, std::optional<std::uint64_t> seed, std::optional<int> resolution) {
    if (seed) cfg.seed = seed;
    if (resolution) {
        if (*resolution < 4) bad("resolution must be >= 4");
        cfg.resolution = resolution;
    }
    refresh_echo(cfg);
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::Parameter:
        case ErrorKind::Shape:
        case ErrorKind::Domain:
        case ErrorKind::Contract:
        case ErrorKind::Unsupported: return 2;
        case ErrorKind::Capacity: return 3;
        case ErrorKind::Numeric:
        case ErrorKind::IllConditioned: return 4;
        case ErrorKind::Invariant: return 5;
        case ErrorKind::Dependency: return 1;
    }
    return 1;
}

}  // namespace hardy::io
