// hardylab: command-line front end for the experiment runner.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hardy/runner.hpp"

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) hardy::fail(hardy::ErrorKind::Config, "cannot write " + path.string());
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for interpolating sequences in Hardy spaces"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, out_dir, format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<int> resolution;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "seed for every stochastic step");
    app.add_option("--resolution", resolution, "fixed quadrature resolution")->check(CLI::PositiveNumber);
    app.add_option("--out", out_dir, "directory for <command>.json and CSV tables");
    app.add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "csv"}));

    for (const auto& name : hardy::io::subcommands()) app.add_subcommand(name, "run " + name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        hardy::io::RunConfig cfg = config_path.empty() ? hardy::io::parse_config(hardy::io::json::object())
                                                       : hardy::io::load_config(config_path);
        hardy::io::apply_overrides(cfg, seed, resolution);
        const hardy::io::RunResult r = hardy::io::run(command, cfg);

        if (!out_dir.empty()) {
            const std::filesystem::path dir(out_dir);
            std::filesystem::create_directories(dir);
            write_file(dir / (command + ".json"), r.report.dump(2) + "\n");
            for (const auto& t : r.tables) write_file(dir / (command + "_" + t.name + ".csv"), hardy::io::to_csv(t));
        }
        if (format == "json") {
            std::cout << r.report.dump(2) << "\n";
        } else {
            for (std::size_t i = 0; i < r.tables.size(); ++i) {
                if (r.tables.size() > 1) std::cout << (i ? "\n" : "") << "# " << r.tables[i].name << "\n";
                std::cout << hardy::io::to_csv(r.tables[i]);
            }
        }
        for (const auto& v : r.violations) std::cerr << "violation: " << v << "\n";
        return r.violations.empty() ? 0 : hardy::io::exit_code(hardy::ErrorKind::Invariant);
    } catch (const hardy::Error& e) {
        std::cerr << "error (" << hardy::to_string(e.kind()) << "): " << e.what() << "\n";
        return hardy::io::exit_code(e.kind());
    } catch (const hardy::io::json::exception& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
