#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ssv/errors.hpp"
#include "ssv/runner.hpp"

// ssv <subcommand> [--config PATH] [overrides]
//
// Subcommands: check-conditions, sample, spectrum, constants, tail-sweep,
// small-ball, net, verify. Flags override the config; environment variables
// with the SSV_ prefix override defaults the same way (SSV_SEED, SSV_TRIALS,
// SSV_OUT, SSV_FORMAT, SSV_ALPHA, SSV_THREADS, SSV_C_SBP, SSV_C_BE, SSV_C_ABS).

int main(int argc, char** argv) {
    CLI::App app{"smallest-singular-value experiments for sparse random ensembles"};
    app.set_version_flag("--version", std::string("ssv ") + ssv::cli::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    bool have_seed = false, have_trials = false, have_out = false, have_format = false;
    bool have_alpha = false, have_threads = false;
    bool have_csbp = false, have_cbe = false, have_cabs = false;
    std::uint64_t seed = 0, trials = 0;
    std::string out_dir, format;
    double alpha = 0.05, c_sbp = 1.0, c_be = 1.0, c_abs = 1.0;
    int threads = 0;

    const char* names[] = {"check-conditions", "sample", "spectrum", "constants",
                           "verify-bounds", "tail-sweep", "small-ball", "net", "verify"};
    for (const char* name : names) app.add_subcommand(name)->fallthrough();

    app.add_option("--config", config_path, "experiment config file");
    app.add_option("--seed", seed, "base seed")->envname("SSV_SEED")->each([&](const std::string&) { have_seed = true; });
    app.add_option("--trials", trials, "Monte Carlo trials")->envname("SSV_TRIALS")->each([&](const std::string&) { have_trials = true; });
    app.add_option("--out", out_dir, "artifact directory")->envname("SSV_OUT")->each([&](const std::string&) { have_out = true; });
    app.add_option("--format", format, "csv|json|bin")->envname("SSV_FORMAT")->each([&](const std::string&) { have_format = true; });
    app.add_option("--alpha", alpha, "confidence parameter")->envname("SSV_ALPHA")->each([&](const std::string&) { have_alpha = true; });
    app.add_option("--threads", threads, "OpenMP thread count (0 = default)")->envname("SSV_THREADS")->each([&](const std::string&) { have_threads = true; });
    app.add_option("--c-sbp", c_sbp, "small-ball universal constant")->envname("SSV_C_SBP")->each([&](const std::string&) { have_csbp = true; });
    app.add_option("--c-be", c_be, "Berry-Esseen universal constant")->envname("SSV_C_BE")->each([&](const std::string&) { have_cbe = true; });
    app.add_option("--c-abs", c_abs, "absolute constant in the c3 assembly")->envname("SSV_C_ABS")->each([&](const std::string&) { have_cabs = true; });

    CLI11_PARSE(app, argc, argv);

    ssv::cli::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = ssv::cli::load_config_file(config_path);
    } catch (const ssv::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return ssv::cli::kExitConfig;
    }

    if (have_seed) cfg.seed = seed;
    if (have_trials) cfg.trials = trials;
    if (have_out) cfg.out_dir = out_dir;
    if (have_format) cfg.format = format;
    if (have_alpha) cfg.alpha = alpha;
    if (have_threads) cfg.threads = threads;
    if (have_csbp) cfg.uconst.c_sbp = c_sbp;
    if (have_cbe) cfg.uconst.c_be = c_be;
    if (have_cabs) cfg.uconst.c_abs = c_abs;

    std::string sub = app.get_subcommands().front()->get_name();
    if (sub.empty() && !cfg.subcommand.empty()) sub = cfg.subcommand;
    return ssv::cli::run(sub, cfg, std::cout, std::cerr);
}
