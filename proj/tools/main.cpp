#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eulerps/commands.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw eulerps::ParseError("config: cannot open " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Riemann solver for the 1D Euler equations with a point source at the origin"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    std::string format = "";
    unsigned long seed = 0;  // reserved for randomized test tooling
    app.add_option("--seed", seed, "Seed for randomized tooling (unused by the commands)");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Path to the JSON problem config")->required();
        cmd->add_option("--output", output_path, "Output path (default: standard output)");
        cmd->add_option("--format", format, "Output format: csv or structured");
    };

    CLI::App* c_solve = app.add_subcommand("solve", "Solve and print solution metadata");
    CLI::App* c_profile = app.add_subcommand("profile", "Sample the self-similar solution on a grid");
    CLI::App* c_curve = app.add_subcommand("curve", "Sweep the stationary wave curve");
    CLI::App* c_critical = app.add_subcommand("critical", "Report critical Mach numbers and admissible sets");
    CLI::App* c_sweep = app.add_subcommand("sweep", "Classify structures over a Mach/gain grid");
    for (CLI::App* c : {c_solve, c_profile, c_curve, c_critical, c_sweep}) add_common(c);

    CLI11_PARSE(app, argc, argv);

    auto pick_format = [&](eulerps::OutputFormat fallback) {
        if (format == "csv") return eulerps::OutputFormat::Csv;
        if (format == "structured") return eulerps::OutputFormat::Structured;
        if (!format.empty()) {
            std::cerr << "unknown format: " << format << "\n";
            std::exit(static_cast<int>(eulerps::ExitCode::Validation));
        }
        return fallback;
    };

    int code = 0;
    std::ostringstream buffer;
    try {
        const eulerps::ProblemConfig config = eulerps::parse_config(read_file(config_path));
        if (app.got_subcommand(c_solve)) {
            code = eulerps::cmd_solve(config, buffer, pick_format(eulerps::OutputFormat::Structured));
        } else if (app.got_subcommand(c_profile)) {
            code = eulerps::cmd_profile(config, buffer);
        } else if (app.got_subcommand(c_curve)) {
            code = eulerps::cmd_curve(config, buffer);
        } else if (app.got_subcommand(c_critical)) {
            code = eulerps::cmd_critical(config, buffer, pick_format(eulerps::OutputFormat::Structured));
        } else if (app.got_subcommand(c_sweep)) {
            code = eulerps::cmd_sweep(config, buffer);
        }
    } catch (const eulerps::Error& e) {
        buffer << "{\"status\":\"error\",\"error\":{\"kind\":\"" << e.kind() << "\",\"message\":\""
               << e.what() << "\"}}\n";
        code = static_cast<int>(e.exit_code());
    }

    if (output_path.empty()) {
        std::cout << buffer.str();
    } else {
        std::ofstream out(output_path);
        if (!out) {
            std::cerr << "cannot open output path " << output_path << "\n";
            return static_cast<int>(eulerps::ExitCode::Validation);
        }
        out << buffer.str();
    }
    return code;
}
