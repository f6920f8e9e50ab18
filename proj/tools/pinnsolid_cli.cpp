#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pinn/harness.hpp"
#include "pinn/verify.hpp"

namespace {

std::vector<int> parse_hidden(const std::string& spec) {
    std::vector<int> sizes;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        sizes.push_back(std::stoi(cell));
    }
    return sizes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Physics-informed neural-network solver for linear elastostatics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value config file");

    pinn::RunConfig cfg;
    std::string hidden_spec;

    CLI::App* solve = app.add_subcommand("solve", "Train a PINN on a benchmark problem");
    solve->add_option("--problem", cfg.problem,
                      "Problem name: rod1d, plate2d, plate2d-patch, cube3d, cube3d-patch")
        ->required();
    solve->add_option("--loss", cfg.loss, "Loss type: collocation or energy")->required();
    solve->add_option("--seed", cfg.seed, "Initialization seed");
    solve->add_option("--max-iter", cfg.max_iterations, "Maximum optimizer iterations");
    solve->add_option("--out", cfg.out_dir, "Output directory (fields.csv, report.json)");
    solve->add_option("--hidden", hidden_spec, "Hidden layer sizes, e.g. 20,20,20");
    solve->add_option("--threads", cfg.threads, "Worker threads for loss evaluation");
    solve->add_flag("--shared-net", cfg.shared_net,
                    "Use one network for all displacement components");
    solve->add_flag("--quiet", cfg.quiet, "Suppress progress output");

    CLI::App* check =
        app.add_subcommand("check", "Run the gradient-verification and oracle suites");
    int check_draws = 20;
    std::uint64_t check_seed = 0xB10C5EEDULL;
    check->add_option("--draws", check_draws, "Random draws per gradient check");
    check->add_option("--seed", check_seed, "Seed for the verification draws");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            cfg.hidden = parse_hidden(hidden_spec);
            pinn::RunOutput out = pinn::run(cfg);
            std::printf("%s/%s: converged_by=%s iterations=%d final_loss=%.6e (%.2fs)\n",
                        cfg.problem.c_str(), cfg.loss.c_str(), out.report.converged_by.c_str(),
                        out.report.iterations, out.report.final_loss, out.report.train_seconds);
            for (const auto& [field, value] : out.report.rms)
                std::printf("  rms[%s] = %.6e\n", field.c_str(), value);
            std::printf("wrote %s/fields.csv and %s/report.json\n", cfg.out_dir.c_str(),
                        cfg.out_dir.c_str());
            return 0;
        }
        if (check->parsed()) {
            const auto checks = pinn::run_verification_suite(check_seed, check_draws);
            const bool ok = pinn::report_checks(checks, std::cout);
            return ok ? 0 : 1;
        }
    } catch (const pinn::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
