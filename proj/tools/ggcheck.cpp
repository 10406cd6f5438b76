#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gg/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Check generalized contact and complex structures on local charts"};
    app.require_subcommand(1);
    app.fallthrough();

    gg::PlanOverrides ov;
    std::uint64_t seed = 42;
    int points = 20;
    double tol = 1e-9;
    std::string bracket = "courant";
    std::string report_path;
    bool json_stdout = false;

    auto* seed_opt = app.add_option("--seed", seed, "sample point seed (default 42)");
    auto* points_opt = app.add_option("--points", points, "number of sample points (default 20)")->check(CLI::PositiveNumber);
    auto* tol_opt = app.add_option("--tol", tol, "residual tolerance (default 1e-9)")->check(CLI::PositiveNumber);
    auto* bracket_opt = app.add_option("--bracket", bracket, "courant or derived:<one-form name>");
    app.add_option("--report", report_path, "write the JSON report to this path");
    app.add_flag("--json", json_stdout, "print the JSON report instead of the text summary");

    std::string target;
    std::string command;
    for (const auto& name : gg::command_names()) {
        auto* sub = app.add_subcommand(name, name == "catalog" ? "run a built-in entry or an [entry] file"
                                                               : "run '" + name + "' on a structure file");
        sub->add_option(name == "catalog" ? "entry" : "file", target)->required();
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (*seed_opt) ov.seed = seed;
    if (*points_opt) ov.points = points;
    if (*tol_opt) ov.tolerance = tol;
    if (*bracket_opt) ov.bracket = bracket;

    gg::RunResult res;
    try {
        res = gg::run_command(command, target, ov);
    } catch (const gg::FileParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const gg::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    std::string js = gg::report_json(res.report);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << report_path << "\n";
            return 2;
        }
        out << js;
    }
    std::cout << (json_stdout ? js : gg::report_text(res.report));
    return res.exit_code;
}
