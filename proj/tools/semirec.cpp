#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "semirec/analysis.hpp"

namespace {

semirec::Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw semirec::ConfigError("cannot open '" + path + "'");
    semirec::Json j;
    try {
        in >> j;
    } catch (const semirec::Json::exception& e) {
        throw semirec::ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw semirec::ConfigError("cannot write '" + path + "'");
    out << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semirec: recurrence analysis for finitely generated systems of self-maps"};
    app.require_subcommand(1);

    std::string config_path, report_path, analysis_id, out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int max_cells = 100000;

    auto* analyze = app.add_subcommand("analyze", "run the analyses of a JSON config");
    analyze->add_option("config", config_path, "config JSON file")->required();
    analyze->add_option("--out", out_path, "report output path (default: stdout)");
    analyze->add_option("--seed", seed, "override the config's sampling seed")
        ->each([&](const std::string&) { seed_given = true; });
    analyze->add_option("--max-cells", max_cells, "safety cap on grid cells");

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "config JSON file")->required();
    validate->add_option("--max-cells", max_cells, "safety cap on grid cells");

    auto* plot = app.add_subcommand("plot", "emit plot-ready CSV for one analysis of a report");
    plot->add_option("report", report_path, "report JSON file")->required();
    plot->add_option("analysis", analysis_id, "analysis id inside the report")->required();
    plot->add_option("--out", out_path, "CSV output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            semirec::RunOptions opts;
            opts.max_cells = max_cells;
            if (seed_given) opts.seed_override = seed;
            const semirec::Json report = semirec::analyze_config(load_json(config_path), opts);
            write_text(out_path, report.dump(2) + "\n");
            return 0;
        }
        if (validate->parsed()) {
            semirec::RunOptions opts;
            opts.max_cells = max_cells;
            semirec::validate_config(load_json(config_path), opts);
            std::cout << "config ok\n";
            return 0;
        }
        if (plot->parsed()) {
            const semirec::Json report = load_json(report_path);
            write_text(out_path, semirec::plot_csv(report, analysis_id));
            return 0;
        }
    } catch (const semirec::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const semirec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
