#include <doctest.h>

#include <cmath>
#include <fstream>

#include "hardy/runner.hpp"

using namespace hardy;
using namespace hardy::io;

namespace {

json strip_clock(json r) {
    r.erase("wall_clock_seconds");
    return r;
}

ErrorKind parse_error_kind(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Dependency;  // sentinel: no error
}

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(json::parse(R"({"domain": "ball2", "points": [[0.5, [0, 0.2]]],
                                                     "s": 1, "p": "inf", "seed": 3})"));
    CHECK(c.domain.dim() == 2);
    REQUIRE(c.points.size() == 1);
    CHECK(c.points[0][1] == cplx(0, 0.2));
    CHECK(std::isinf(c.p));
    CHECK(c.q == 1.0);
    REQUIRE(c.nu.size() == 1);
    CHECK(c.nu[0] == 1.0);
    CHECK(c.seed == 3u);
    CHECK(c.echo.at("p") == "inf");

    const RunConfig d = parse_config(json::parse(R"({"s": 1, "p": 4})"));
    CHECK(d.q == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("config errors") {
    CHECK(parse_error_kind(json::parse(R"({"bogus": 1})")) == ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"s": 2, "p": 2})")) == ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"s": 1, "p": 2, "q": 3})")) == ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"points": [0, 0.5], "nu": [1]})")) == ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"points": [0], "p": 4, "dual_method": "gram"})")) == ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"domain": "bidisc", "points": [0], "dual_method": "blaschke", "p": "inf"})")) ==
          ErrorKind::Config);
    CHECK(parse_error_kind(json::parse(R"({"domain": "annulus"})")) != ErrorKind::Dependency);
}

TEST_CASE("csv points file") {
    const auto path = std::filesystem::temp_directory_path() / "hardy_cli_points.csv";
    {
        std::ofstream f(path);
        f << "re,im\n# comment\n0.5,0\n0,-0.25\n";
    }
    const RunConfig c = parse_config(json{{"points_csv", path.filename().string()}}, path.parent_path());
    REQUIRE(c.points.size() == 2);
    CHECK(c.points[1][0] == cplx(0, -0.25));
    std::filesystem::remove(path);
}

TEST_CASE("overrides and exit codes") {
    RunConfig c = parse_config(json::object());
    apply_overrides(c, 42, 64);
    CHECK(c.seed == 42u);
    CHECK(c.resolution == 64);
    CHECK(c.echo.at("seed") == 42);

    CHECK(exit_code(ErrorKind::Config) == 2);
    CHECK(exit_code(ErrorKind::Capacity) == 3);
    CHECK(exit_code(ErrorKind::Numeric) == 4);
    CHECK(exit_code(ErrorKind::Invariant) == 5);
    CHECK(exit_code(ErrorKind::Dependency) == 1);
}

TEST_CASE("stochastic steps need a seed") {
    RunConfig c = parse_config(json::parse(R"({"points": [0, 0.5]})"));
    CHECK_THROWS_AS(run("extend", c), Error);
    CHECK_THROWS_AS(run("khintchine", c), Error);
    c.carleson_q = {1.0, 2.0};
    CHECK_NOTHROW(run("carleson", c));
    c.carleson_q = {4.0};
    CHECK_THROWS_AS(run("carleson", c), Error);
    CHECK_THROWS_AS(run("nonsense", c), Error);
}

TEST_CASE("extend on the origin is trivial") {
    const RunConfig c = parse_config(json::parse(R"({"points": [0], "nu": [1], "seed": 7})"));
    const RunResult r = run("extend", c);
    CHECK(r.violations.empty());
    const json& x = r.report.at("results");
    CHECK(x.at("norm_bound").at("c_i_estimate").get<double>() == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : x.at("interpolation").at("residuals").get<std::vector<double>>()) CHECK(v == 0.0);
    CHECK(x.at("coefficients").at("c").at(0).get<double>() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("khintchine sweep at q = 2") {
    const RunConfig c = parse_config(
        json::parse(R"({"seed": 11, "khintchine": {"q": [2], "max_length": 12, "vectors": 10}})"));
    const RunResult r = run("khintchine", c);
    CHECK(r.violations.empty());
    REQUIRE(r.tables.size() == 1);
    CHECK(r.tables[0].rows.size() == 120);
    for (const auto& row : r.tables[0].rows) CHECK(std::abs(std::stod(row[2]) - 1.0) <= 1e-12);
}

TEST_CASE("reports are reproducible") {
    const RunConfig c = parse_config(json::parse(R"({"points": [0.3, [0, -0.6], [-0.7, 0.1]],
                                                     "nu": [1, [0, 2], -1], "seed": 99, "batch": 16})"));
    for (const char* cmd : {"extend", "carleson", "norms"}) {
        const RunResult a = run(cmd, c);
        const RunResult b = run(cmd, c);
        CHECK(strip_clock(a.report).dump() == strip_clock(b.report).dump());
        REQUIRE(a.tables.size() == b.tables.size());
        for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(to_csv(a.tables[i]) == to_csv(b.tables[i]));
    }
}

TEST_CASE("csv output") {
    Table t{"x", {"a", "b"}, {{"1", "0.10000000000000001"}}};
    CHECK(to_csv(t) == "a,b\n1,0.10000000000000001\n");
}

TEST_CASE("rule snapshots") {
    const auto rule = build_quadrature(Domain::bidisc(), 4);
    const json j = rule_to_json(*rule);
    CHECK(j.at("domain") == "bidisc");
    CHECK(j.at("weights").size() == rule->size());
    REQUIRE(j.at("coords").size() == 2);
    CHECK(j.at("coords")[1].at("im")[5].get<double>() == rule->coords[1][5].imag());
}

TEST_CASE("carleson report pairs q with weak 2q") {
    const RunConfig c = parse_config(json::parse(R"({"points": [0.2, -0.5, [0, 0.7]], "carleson_q": [1, 2], "seed": 4})"));
    const RunResult r = run("carleson", c);
    const json& pairs = r.report.at("results").at("strong_vs_weak_2q");
    REQUIRE(pairs.size() == 2);
    // weak 2-Carleson constants never exceed 1
    CHECK(pairs[0].at("weak_2q").get<double>() <= 1.0 + 1e-10);
    CHECK(pairs[1].at("ratio").get<double>() > 0.0);
}
