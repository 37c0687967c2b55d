#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "app/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ineqforge: numerical verification of weak-type functional inequalities"};
    app.require_subcommand(1);

    std::string config_path;
    ineq::app::RunOptions options;
    CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--out", options.out_dir, "output directory for CSV and report");
    run->add_option("--workers", options.workers, "worker threads (0 = all cores)");
    run->add_option("--distance-matrix", options.distance_matrix,
                    "metric suite input: square distance matrix file");

    bool json_mode = false;
    CLI::App* constants = app.add_subcommand("constants", "print the oracle constants");
    constants->add_flag("--json", json_mode, "machine-readable output");

    std::vector<std::string> report_paths;
    CLI::App* report = app.add_subcommand("report", "consolidate experiment reports");
    report->add_option("paths", report_paths, "report JSON files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ineq::app::kExitPass : ineq::app::kExitUsage;
    }

    if (run->parsed())
        return ineq::app::run_experiment(config_path, options, std::cout, std::cerr);
    if (constants->parsed())
        return ineq::app::print_constants(json_mode, std::cout);
    return ineq::app::consolidate_reports(report_paths, std::cout, std::cerr);
}
