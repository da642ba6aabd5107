#include <omp.h>

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shlab/errors.hpp"
#include "shlab/scenario.hpp"

namespace {

enum Exit { kOk = 0, kViolated = 1, kSolverFailure = 2, kConfigError = 3 };

bool is_config_error(const shlab::Error& e) {
    return dynamic_cast<const shlab::ConfigError*>(&e) || dynamic_cast<const shlab::InvalidSpec*>(&e) ||
           dynamic_cast<const shlab::InvalidGrid*>(&e) || dynamic_cast<const shlab::UnknownComponent*>(&e) ||
           dynamic_cast<const shlab::GridTooCoarse*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spacetime harmonic function laboratory"};
    app.require_subcommand(1);
    std::string config, out;
    int threads = 0;
    double tolerance_scale = 1.0;
    app.add_option("--out", out, "output directory (overrides the config)");
    app.add_option("--threads", threads, "OpenMP thread count; 1 gives bitwise reproducible reports")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--tolerance-scale", tolerance_scale, "multiplies every tolerance")->check(CLI::PositiveNumber);

    const char* names[] = {"solve",    "tune",     "verify-identity", "energy", "penrose",
                           "barriers", "rigidity", "ppwave-audit",    "refine"};
    const char* help[] = {"Dirichlet solve with constant boundary values",
                          "fixed-point tuning of the box constants",
                          "both sides of the integral inequality",
                          "energy from the mass aspect and from boundary fluxes",
                          "Penrose-type bound",
                          "upper and lower barriers with residual signs and bracketing",
                          "rigidity diagnostics on sampled level sets",
                          "closed-form checks of the pp-wave slice",
                          "convergence study on dyadically refined grids"};
    for (int i = 0; i < 9; ++i) {
        auto* sub = app.add_subcommand(names[i], help[i]);
        sub->fallthrough();
        sub->add_option("--config", config, "scenario file (JSON)")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (threads > 0) omp_set_num_threads(threads);
    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        auto cfg = shlab::load_config(config, shlab::pipeline_from_name(chosen));
        shlab::RunOptions opt;
        opt.tolerance_scale = tolerance_scale;
        opt.threads = threads > 0 ? threads : omp_get_max_threads();
        if (!out.empty()) opt.output_dir = out;
        const auto result = shlab::run_scenario(cfg, opt);
        for (const auto& c : result.checks)
            std::printf("%s  %s: value %s, tolerance %s, margin %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                        shlab::format_number(c.value).c_str(), shlab::format_number(c.tolerance).c_str(),
                        shlab::format_number(c.margin).c_str());
        std::printf("report: %s\n", (result.output_dir / "report.json").string().c_str());
        return result.all_pass ? kOk : kViolated;
    } catch (const shlab::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_config_error(e) ? kConfigError : kSolverFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSolverFailure;
    }
}
