#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssv/bounds.hpp"
#include "ssv/ensemble.hpp"

namespace ssv::cli {

struct ProfileSpec {
    enum class Kind { Ones, Dense, Sparse };
    Kind kind = Kind::Ones;
    double row_fill = 1.0;       // sparse generator
    double column_target = 0.9;  // sparse generator
    std::uint64_t gen_seed = 0;  // sparse generator
    std::vector<std::vector<double>> rows; // dense payload

    bool operator==(const ProfileSpec&) const = default;
};

/// Everything a run needs; round-trips losslessly through the text format.
struct ExperimentConfig {
    // [shape]
    std::size_t N = 20, n = 10;
    // [params]
    ensemble::ModelParams params;
    // [family]
    ensemble::FamilyKind family = ensemble::FamilyKind::Gaussian;
    double two_point_p = 0.5;
    // [profile]
    ProfileSpec profile;
    // [experiment]
    std::string subcommand;
    double c1 = 0.1;
    double epsilon = 0.05;
    std::string sweep_param = "delta"; // delta | a4 | c1
    std::vector<double> sweep_values;
    std::size_t net_dim = 2;
    double net_epsilon = 0.5;
    std::string net_domain = "sphere";
    std::size_t net_probes = 1000000;
    std::size_t small_ball_configs = 200;
    std::size_t small_ball_max_n = 14;
    // [run]
    std::uint64_t seed = 1;
    std::uint64_t trials = 1000;
    double alpha = 0.05;
    int threads = 0; // 0 = leave as-is
    double time_cap_seconds = 60.0;
    std::size_t sweep_cap = 4096;
    // [output]
    std::string out_dir = "out";
    std::string format = "csv"; // csv | json | bin (sample)
    // [constants]
    bounds::UniversalConstants uconst;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parses the sectioned key-value text. Unknown sections/keys and malformed
/// values are rejected with their line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// Inverse of parse_config: parse(serialize(c)) == c.
std::string serialize_config(const ExperimentConfig& cfg);

/// Materializes the ensemble from [shape], [params], [family], [profile].
ensemble::EnsembleSpec build_ensemble_spec(const ExperimentConfig& cfg);

} // namespace ssv::cli
