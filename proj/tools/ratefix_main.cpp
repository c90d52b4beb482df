// Command-line front end: ingest a dataset, run the requested solver and
// print or write the report. Exit codes: 0 success, 1 input error,
// 2 not converged / not certified.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ratefix/errors.hpp"
#include "ratefix/report.hpp"

namespace {

struct CliOptions {
    ratefix::RunConfig config;
    std::string format = "text";
    double tolerance = -1.0;    // sentinel: keep per-command default
    long long max_iters = -1;   // sentinel: keep per-command default
    std::vector<std::size_t> base_cell;
};

void add_common_options(CLI::App* cmd, CliOptions& opt, bool with_rating_flags) {
    cmd->add_option("--input", opt.config.input_path, "Input data file")->required();
    cmd->add_option("--tol", opt.tolerance, "Convergence tolerance on successive iterates");
    cmd->add_option("--max-iters", opt.max_iters, "Iteration budget");
    cmd->add_option("--seed", opt.config.seed, "Seed for sampled checks");
    cmd->add_option("--format", opt.format, "Report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--out", opt.config.out_path, "Write the report to this path");
    if (with_rating_flags) {
        cmd->add_flag("--strict,!--no-strict", opt.config.strict,
                      "Reject zero exposure cells and zero-loss slices (default on)");
        cmd->add_option("--base-cell", opt.base_cell,
                        "Comma-separated cell indices to move to the base position")
            ->delimiter(',');
    }
}

int dispatch(CliOptions& opt, ratefix::Command command) {
    opt.config.command = command;
    opt.config.format =
        opt.format == "json" ? ratefix::OutputFormat::Json : ratefix::OutputFormat::Text;
    if (opt.tolerance >= 0.0) opt.config.tolerance = opt.tolerance;
    if (opt.max_iters >= 0) opt.config.max_iters = static_cast<std::size_t>(opt.max_iters);
    if (!opt.base_cell.empty()) opt.config.base_cell = opt.base_cell;

    ratefix::RunResult result = ratefix::run(opt.config);
    if (opt.config.out_path.empty()) std::cout << result.report;
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point solvers for multiplicative re-rating and multi-species "
                 "Leslie-Gower competition models"};
    app.require_subcommand(1);

    CliOptions rate_opt, certify_opt, lg_opt, bailey_opt;

    CLI::App* rate = app.add_subcommand(
        "rate", "Iterate the loss-ratio re-rating system and report factors, base rate, "
                "rates and the convergence certificate");
    add_common_options(rate, rate_opt, true);
    rate->add_option("--plr", rate_opt.config.plr, "Permissible loss ratio")
        ->required()
        ->check(CLI::PositiveNumber);

    CLI::App* certify = app.add_subcommand(
        "certify", "Compute the a-priori convergence certificate only");
    add_common_options(certify, certify_opt, true);

    CLI::App* lg = app.add_subcommand(
        "lg", "Solve a Leslie-Gower competition model: diagnostics, linear equilibrium "
              "and iteration cross-check");
    add_common_options(lg, lg_opt, false);
    lg->add_option("--shrink", lg_opt.config.shrink, "Lower-bound shrink factor in (0,1)")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9));

    CLI::App* bailey = app.add_subcommand(
        "bailey", "Two-factor minimum-bias fit, reported next to the loss-ratio factors");
    add_common_options(bailey, bailey_opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage problems count as input errors; --help stays 0
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (rate->parsed()) return dispatch(rate_opt, ratefix::Command::Rate);
        if (certify->parsed()) return dispatch(certify_opt, ratefix::Command::Certify);
        if (lg->parsed()) return dispatch(lg_opt, ratefix::Command::Lg);
        if (bailey->parsed()) return dispatch(bailey_opt, ratefix::Command::Bailey);
    } catch (const ratefix::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
