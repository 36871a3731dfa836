#pragma once

#include <iosfwd>
#include <string>

#include "ssv/config.hpp"

namespace ssv::cli {

inline constexpr const char* kVersion = "1.2.0";

// Exit codes: 0 success (verify: zero failures), 2 config error, 3 numerical
// or runtime failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// Dispatches one subcommand. Reports go to `out`, diagnostics to `err`;
/// artifact files land under cfg.out_dir.
int run(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& out,
        std::ostream& err);

// Individual subcommands (used by run and exercised directly in tests).
std::string render_check_conditions(const ExperimentConfig& cfg);
std::string render_constants(const ExperimentConfig& cfg, bool json);
std::string render_tail_sweep_csv(const ExperimentConfig& cfg);
std::string render_small_ball_csv(const ExperimentConfig& cfg);
std::string render_spectrum_csv(const ExperimentConfig& cfg);

struct VerifySummary {
    int pass = 0;
    int vacuous_pass = 0;
    int fail = 0;
    int undecided = 0;
};

VerifySummary run_verify(const ExperimentConfig& cfg, std::ostream& out);

} // namespace ssv::cli
