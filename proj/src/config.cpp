#include "ssv/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ssv/errors.hpp"

namespace ssv::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw config_error("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const config_error&) {
        throw;
    } catch (...) {
        fail(line, "not a number: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(line, "not a nonnegative integer: '" + v + "'");
    return out;
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, line));
    if (out.empty()) fail(line, "empty list");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.profile.rows.clear();
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    bool saw_profile_kind_dense = false;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = s.substr(1, s.size() - 2);
            if (section != "shape" && section != "params" && section != "family" &&
                section != "profile" && section != "experiment" && section != "run" &&
                section != "output" && section != "constants")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (section.empty()) fail(line, "key '" + key + "' before any section");

        if (section == "shape") {
            if (key == "N") cfg.N = parse_u64(val, line);
            else if (key == "n") cfg.n = parse_u64(val, line);
            else fail(line, "unknown key '" + key + "' in [shape]");
        } else if (section == "params") {
            if (key == "r") cfg.params.r = parse_double(val, line);
            else if (key == "mu") cfg.params.mu = parse_double(val, line);
            else if (key == "a1") cfg.params.a1 = parse_double(val, line);
            else if (key == "a2") cfg.params.a2 = parse_double(val, line);
            else if (key == "a3") cfg.params.a3 = parse_double(val, line);
            else if (key == "a4") cfg.params.a4 = parse_double(val, line);
            else fail(line, "unknown key '" + key + "' in [params]");
        } else if (section == "family") {
            if (key == "kind") {
                try {
                    cfg.family = ensemble::family_kind_from_name(val);
                } catch (const std::exception& e) {
                    fail(line, e.what());
                }
            } else if (key == "two_point_p") cfg.two_point_p = parse_double(val, line);
            else fail(line, "unknown key '" + key + "' in [family]");
        } else if (section == "profile") {
            if (key == "kind") {
                if (val == "ones") cfg.profile.kind = ProfileSpec::Kind::Ones;
                else if (val == "dense") { cfg.profile.kind = ProfileSpec::Kind::Dense; saw_profile_kind_dense = true; }
                else if (val == "sparse") cfg.profile.kind = ProfileSpec::Kind::Sparse;
                else fail(line, "profile kind must be ones|dense|sparse");
            } else if (key == "row_fill") cfg.profile.row_fill = parse_double(val, line);
            else if (key == "column_target") cfg.profile.column_target = parse_double(val, line);
            else if (key == "gen_seed") cfg.profile.gen_seed = parse_u64(val, line);
            else if (key == "row") {
                if (!saw_profile_kind_dense)
                    fail(line, "inline rows require 'kind = dense' first");
                cfg.profile.rows.push_back(parse_list(val, line));
            } else fail(line, "unknown key '" + key + "' in [profile]");
        } else if (section == "experiment") {
            if (key == "subcommand") cfg.subcommand = val;
            else if (key == "c1") cfg.c1 = parse_double(val, line);
            else if (key == "epsilon") cfg.epsilon = parse_double(val, line);
            else if (key == "sweep_param") {
                if (val != "delta" && val != "a4" && val != "c1")
                    fail(line, "sweep_param must be delta|a4|c1");
                cfg.sweep_param = val;
            } else if (key == "sweep_values") cfg.sweep_values = parse_list(val, line);
            else if (key == "net_dim") cfg.net_dim = parse_u64(val, line);
            else if (key == "net_epsilon") cfg.net_epsilon = parse_double(val, line);
            else if (key == "net_domain") {
                if (val != "sphere" && val != "ball") fail(line, "net_domain must be sphere|ball");
                cfg.net_domain = val;
            } else if (key == "net_probes") cfg.net_probes = parse_u64(val, line);
            else if (key == "small_ball_configs") cfg.small_ball_configs = parse_u64(val, line);
            else if (key == "small_ball_max_n") cfg.small_ball_max_n = parse_u64(val, line);
            else fail(line, "unknown key '" + key + "' in [experiment]");
        } else if (section == "run") {
            if (key == "seed") cfg.seed = parse_u64(val, line);
            else if (key == "trials") cfg.trials = parse_u64(val, line);
            else if (key == "alpha") cfg.alpha = parse_double(val, line);
            else if (key == "threads") cfg.threads = static_cast<int>(parse_u64(val, line));
            else if (key == "time_cap_seconds") cfg.time_cap_seconds = parse_double(val, line);
            else if (key == "sweep_cap") cfg.sweep_cap = parse_u64(val, line);
            else fail(line, "unknown key '" + key + "' in [run]");
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else if (key == "format") {
                if (val != "csv" && val != "json" && val != "bin")
                    fail(line, "format must be csv|json|bin");
                cfg.format = val;
            } else fail(line, "unknown key '" + key + "' in [output]");
        } else if (section == "constants") {
            if (key == "c_sbp") cfg.uconst.c_sbp = parse_double(val, line);
            else if (key == "c_be") cfg.uconst.c_be = parse_double(val, line);
            else if (key == "c_abs") cfg.uconst.c_abs = parse_double(val, line);
            else fail(line, "unknown key '" + key + "' in [constants]");
        }
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw config_error("cannot open config: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "[shape]\nN = " << cfg.N << "\nn = " << cfg.n << "\n\n";
    o << "[params]\nr = " << fmt(cfg.params.r) << "\nmu = " << fmt(cfg.params.mu)
      << "\na1 = " << fmt(cfg.params.a1) << "\na2 = " << fmt(cfg.params.a2)
      << "\na3 = " << fmt(cfg.params.a3) << "\na4 = " << fmt(cfg.params.a4) << "\n\n";
    o << "[family]\nkind = " << ensemble::family_name(cfg.family)
      << "\ntwo_point_p = " << fmt(cfg.two_point_p) << "\n\n";
    o << "[profile]\nkind = ";
    switch (cfg.profile.kind) {
        case ProfileSpec::Kind::Ones: o << "ones"; break;
        case ProfileSpec::Kind::Dense: o << "dense"; break;
        case ProfileSpec::Kind::Sparse: o << "sparse"; break;
    }
    o << "\nrow_fill = " << fmt(cfg.profile.row_fill)
      << "\ncolumn_target = " << fmt(cfg.profile.column_target)
      << "\ngen_seed = " << cfg.profile.gen_seed << "\n";
    for (const auto& row : cfg.profile.rows) {
        o << "row =";
        for (double v : row) o << ' ' << fmt(v);
        o << "\n";
    }
    o << "\n[experiment]\n";
    if (!cfg.subcommand.empty()) o << "subcommand = " << cfg.subcommand << "\n";
    o << "c1 = " << fmt(cfg.c1) << "\nepsilon = " << fmt(cfg.epsilon)
      << "\nsweep_param = " << cfg.sweep_param << "\n";
    if (!cfg.sweep_values.empty()) {
        o << "sweep_values =";
        for (double v : cfg.sweep_values) o << ' ' << fmt(v);
        o << "\n";
    }
    o << "net_dim = " << cfg.net_dim << "\nnet_epsilon = " << fmt(cfg.net_epsilon)
      << "\nnet_domain = " << cfg.net_domain << "\nnet_probes = " << cfg.net_probes
      << "\nsmall_ball_configs = " << cfg.small_ball_configs
      << "\nsmall_ball_max_n = " << cfg.small_ball_max_n << "\n\n";
    o << "[run]\nseed = " << cfg.seed << "\ntrials = " << cfg.trials
      << "\nalpha = " << fmt(cfg.alpha) << "\nthreads = " << cfg.threads
      << "\ntime_cap_seconds = " << fmt(cfg.time_cap_seconds)
      << "\nsweep_cap = " << cfg.sweep_cap << "\n\n";
    o << "[output]\ndir = " << cfg.out_dir << "\nformat = " << cfg.format << "\n\n";
    o << "[constants]\nc_sbp = " << fmt(cfg.uconst.c_sbp) << "\nc_be = " << fmt(cfg.uconst.c_be)
      << "\nc_abs = " << fmt(cfg.uconst.c_abs) << "\n";
    return o.str();
}

ensemble::EnsembleSpec build_ensemble_spec(const ExperimentConfig& cfg) {
    ensemble::EnsembleSpec spec;
    spec.N = cfg.N;
    spec.n = cfg.n;
    spec.params = cfg.params;
    spec.base_family = cfg.family;
    spec.two_point_p = cfg.two_point_p;
    switch (cfg.profile.kind) {
        case ProfileSpec::Kind::Ones:
            spec.profile = ensemble::VarianceProfile(cfg.N, cfg.n, 1.0);
            break;
        case ProfileSpec::Kind::Sparse:
            spec.profile = ensemble::make_sparse_profile(cfg.N, cfg.n, cfg.profile.row_fill,
                                                         cfg.profile.column_target,
                                                         cfg.profile.gen_seed);
            break;
        case ProfileSpec::Kind::Dense: {
            if (cfg.profile.rows.size() != cfg.N)
                throw config_error("dense profile: expected " + std::to_string(cfg.N) + " rows");
            ensemble::VarianceProfile p(cfg.N, cfg.n, 0.0);
            for (std::size_t j = 0; j < cfg.N; ++j) {
                if (cfg.profile.rows[j].size() != cfg.n)
                    throw config_error("dense profile: row " + std::to_string(j) + " has " +
                                       std::to_string(cfg.profile.rows[j].size()) +
                                       " entries, expected " + std::to_string(cfg.n));
                for (std::size_t i = 0; i < cfg.n; ++i) p.set(j, i, cfg.profile.rows[j][i]);
            }
            spec.profile = std::move(p);
            break;
        }
    }
    spec.validate();
    return spec;
}

} // namespace ssv::cli
