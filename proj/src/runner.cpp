#include "ssv/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ssv/errors.hpp"
#include "ssv/geometry.hpp"
#include "ssv/probe.hpp"
#include "ssv/rng.hpp"
#include "ssv/spectra.hpp"

namespace ssv::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct TimeCap {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double cap_seconds;

    explicit TimeCap(double cap) : cap_seconds(cap) {}
    void check(const char* where) const {
        if (cap_seconds <= 0) return;
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > cap_seconds)
            throw numerical_failure(std::string("time cap exceeded during ") + where +
                                        " (" + fmt(elapsed) + "s > " + fmt(cap_seconds) + "s)",
                                    elapsed);
    }
};

std::string constants_header_json(const bounds::UniversalConstants& u) {
    std::ostringstream o;
    o << "\"universal_constants\":{\"c_sbp\":" << fmt(u.c_sbp) << ",\"c_be\":" << fmt(u.c_be)
      << ",\"c_abs\":" << fmt(u.c_abs)
      << ",\"note\":\"defaults are conventions, not derived values\"}";
    return o.str();
}

// Echoed at the top of every CSV so a run is reproducible from its artifact.
// Thread count and artifact directory do not influence any value, so they are
// normalized away: reruns at different thread counts emit identical bytes.
void csv_header(std::ostream& o, const char* what, const ExperimentConfig& cfg) {
    o << "# ssv " << what << " v" << kVersion << "\n";
    o << "# seed=" << cfg.seed << " trials=" << cfg.trials << " alpha=" << fmt(cfg.alpha)
      << " c_sbp=" << fmt(cfg.uconst.c_sbp) << " c_be=" << fmt(cfg.uconst.c_be)
      << " c_abs=" << fmt(cfg.uconst.c_abs) << "\n";
    ExperimentConfig echo = cfg;
    echo.threads = 0;
    echo.out_dir = "out";
    std::istringstream cfgtext(serialize_config(echo));
    std::string line;
    while (std::getline(cfgtext, line)) o << "## " << line << "\n";
}

void write_file(const std::string& dir, const std::string& name, const std::string& payload) {
    fs::create_directories(dir);
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw config_error("cannot write " + (fs::path(dir) / name).string());
    f << payload;
}

} // namespace

std::string render_check_conditions(const ExperimentConfig& cfg) {
    auto spec = build_ensemble_spec(cfg);
    auto rep = ensemble::check_conditions(spec);
    std::ostringstream o;
    o << "{\"cond_i\":{\"pass\":" << (rep.cond_i_pass ? "true" : "false")
      << ",\"worst_entry_moment\":" << fmt(rep.worst_entry_moment)
      << ",\"worst_entry\":[" << rep.worst_entry_row << "," << rep.worst_entry_col << "]"
      << ",\"mu_to_r\":" << fmt(rep.mu_to_r) << "},";
    o << "\"cond_ii\":\"" << rep.cond_ii << "\",";
    o << "\"cond_iii\":{\"pass\":" << (rep.cond_iii_pass ? "true" : "false")
      << ",\"min_column_sum\":" << fmt(rep.min_column_sum)
      << ",\"a3_sq_N\":" << fmt(rep.a3_sq_N) << ",\"column_sums\":[";
    for (std::size_t i = 0; i < rep.column_sums.size(); ++i)
        o << (i ? "," : "") << fmt(rep.column_sums[i]);
    o << "]},";
    o << "\"cond_iv\":{\"pass\":" << (rep.cond_iv_pass ? "true" : "false")
      << ",\"min_row_count\":" << rep.min_row_count << ",\"a4_n\":" << fmt(rep.a4_n) << "},";
    o << constants_header_json(cfg.uconst) << "}";
    return o.str();
}

std::string render_constants(const ExperimentConfig& cfg, bool json) {
    const auto& p = cfg.params;
    auto tall = bounds::prop_tall_constants(p.r, p.mu, p.a3);
    double delta0 = bounds::teo_tall_delta0(tall.b1, tall.b2, p.a1);
    double delta = (static_cast<double>(cfg.N) - static_cast<double>(cfg.n)) /
                   static_cast<double>(cfg.n);
    auto gates = bounds::evaluate_gates(p.r, p.mu, p.a1, p.a3, p.a4, cfg.uconst, &delta);

    bool almost_ok = true;
    std::string almost_msg;
    bounds::TheoremConstants tc{};
    try {
        tc = bounds::almost_square_constants(p.r, p.mu, p.a1, p.a2, p.a3, p.a4, cfg.uconst);
    } catch (const hypothesis_violation& e) {
        almost_ok = false;
        almost_msg = e.what();
    }

    std::ostringstream o;
    if (json) {
        o << "{\"r0\":" << fmt(tall.r0) << ",\"b1\":" << fmt(tall.b1) << ",\"b2\":" << fmt(tall.b2)
          << ",\"delta0\":" << fmt(delta0) << ",\"delta\":" << fmt(delta);
        if (almost_ok) {
            o << ",\"rho\":" << fmt(tc.rho) << ",\"gamma\":" << fmt(tc.gamma)
              << ",\"c3\":" << fmt(tc.c3) << ",\"t_at_delta\":"
              << (delta > 0 ? fmt(tc.t_for_delta(delta)) : "null")
              << ",\"ct1\":" << fmt(tc.ct1) << ",\"ct2\":" << fmt(tc.ct2)
              << ",\"gamma0\":" << fmt(tc.gamma0)
              << ",\"gamma0_identified_with_gamma\":true";
        } else {
            o << ",\"almost_square\":\"" << almost_msg << "\"";
        }
        o << ",\"gates\":{\"delta_ge_delta0\":" << (gates.delta_ge_delta0 ? "true" : "false")
          << ",\"a4_gt_1_minus_gamma\":" << (gates.a4_gt_1_minus_gamma ? "true" : "false")
          << ",\"incomp_hypothesis_c0\":" << fmt(gates.c0)
          << ",\"incomp_hypothesis\":" << (gates.incomp_hypothesis ? "true" : "false") << "},"
          << constants_header_json(cfg.uconst) << "}";
        return o.str();
    }

    o << "constant            value\n";
    o << "r0                  " << fmt(tall.r0) << "\n";
    o << "b1                  " << fmt(tall.b1) << "\n";
    o << "b2                  " << fmt(tall.b2) << "\n";
    o << "delta0              " << fmt(delta0) << "\n";
    if (almost_ok) {
        o << "rho                 " << fmt(tc.rho) << "\n";
        o << "gamma               " << fmt(tc.gamma) << "\n";
        o << "c3                  " << fmt(tc.c3) << "\n";
        if (delta > 0) o << "t(delta)            " << fmt(tc.t_for_delta(delta)) << "\n";
        o << "ct1                 " << fmt(tc.ct1) << "\n";
        o << "ct2                 " << fmt(tc.ct2) << "\n";
        o << "gamma0 (= gamma)    " << fmt(tc.gamma0) << "\n";
    } else {
        o << "almost-square       unmet: " << almost_msg << "\n";
    }
    o << "gate delta >= delta0             " << (gates.delta_ge_delta0 ? "met" : "UNMET")
      << "  (delta " << fmt(delta) << " vs delta0 " << fmt(delta0) << ")\n";
    o << "gate a4 > 1 - gamma              " << (gates.a4_gt_1_minus_gamma ? "met" : "UNMET")
      << "\n";
    o << "gate a4 + rho^2 gamma / 2 > 1    " << (gates.incomp_hypothesis ? "met" : "UNMET")
      << "  (c0 " << fmt(gates.c0) << ")\n";
    o << "c_sbp=" << fmt(cfg.uconst.c_sbp) << " c_be=" << fmt(cfg.uconst.c_be)
      << " c_abs=" << fmt(cfg.uconst.c_abs)
      << "  (defaults are conventions, not derived values)\n";
    return o.str();
}

std::string render_spectrum_csv(const ExperimentConfig& cfg) {
    auto spec = build_ensemble_spec(cfg);
    auto ms = ensemble::sample(spec, cfg.seed);
    auto sv = spectra::singular_values(ms.matrix);
    std::ostringstream o;
    csv_header(o, "spectrum", cfg);
    o << "index,singular_value\n";
    for (std::size_t i = 0; i < sv.values.size(); ++i)
        o << (i + 1) << "," << fmt(sv.values[i]) << "\n";
    return o.str();
}

std::string render_tail_sweep_csv(const ExperimentConfig& cfg) {
    if (cfg.sweep_values.empty()) throw config_error("tail-sweep: sweep_values is empty");
    if (cfg.sweep_values.size() > cfg.sweep_cap)
        throw config_error("tail-sweep: grid of " + std::to_string(cfg.sweep_values.size()) +
                           " points exceeds cap " + std::to_string(cfg.sweep_cap));
    TimeCap cap(cfg.time_cap_seconds);

    std::ostringstream o;
    csv_header(o, "tail-sweep", cfg);
    o << "param,value,N,n,trials,successes,estimate,ci_low,ci_high,mean_min_sv_over_sqrtN,"
         "bound,verdict\n";

    for (double v : cfg.sweep_values) {
        cap.check("tail-sweep");
        ExperimentConfig point = cfg;
        double c1 = cfg.c1;
        if (cfg.sweep_param == "delta") {
            double Nreal = (1.0 + v) * static_cast<double>(cfg.n);
            double Nround = std::round(Nreal);
            if (std::abs(Nreal - Nround) > 1e-9)
                throw config_error("tail-sweep: (1+delta)n is not an integer at delta = " + fmt(v));
            point.N = static_cast<std::size_t>(Nround);
        } else if (cfg.sweep_param == "a4") {
            if (point.profile.kind != ProfileSpec::Kind::Sparse)
                throw config_error("tail-sweep over a4 requires a sparse profile");
            point.profile.row_fill = v;
            point.params.a4 = v;
        } else if (cfg.sweep_param == "c1") {
            c1 = v;
        }

        auto spec = build_ensemble_spec(point);
        const double sqrtN = std::sqrt(static_cast<double>(spec.N));
        std::vector<double> min_svs;
        map_trials(point.trials, Exec::Parallel, min_svs, [&](std::uint64_t t) {
            auto ms = ensemble::sample(spec, rng::mix64(point.seed, t));
            return spectra::smallest_singular(ms.matrix);
        });
        std::uint64_t hits = 0;
        for (double s : min_svs)
            if (s <= c1 * sqrtN) ++hits;
        double low, high;
        probe::clopper_pearson(hits, point.trials, point.alpha, low, high);
        double mean_norm = sum_ordered(min_svs) / (static_cast<double>(point.trials) * sqrtN);

        auto tall = bounds::prop_tall_constants(point.params.r, point.params.mu, point.params.a3);
        double bound = std::exp(-tall.b2 * static_cast<double>(spec.N));
        bool vac = false;
        auto verdict = probe::judge(low, high, bound, probe::BoundSide::Upper, &vac);

        o << cfg.sweep_param << "," << fmt(v) << "," << spec.N << "," << spec.n << ","
          << point.trials << "," << hits << ","
          << fmt(static_cast<double>(hits) / static_cast<double>(point.trials)) << ","
          << fmt(low) << "," << fmt(high) << "," << fmt(mean_norm) << "," << fmt(bound) << ","
          << probe::verdict_name(verdict) << "\n";
    }
    return o.str();
}

namespace {

// Deterministic random unit vector for the small-ball sweep.
std::vector<double> sweep_unit_vector(std::uint64_t seed, std::uint64_t index, std::size_t n) {
    std::vector<double> x(n);
    double norm_sq = 0;
    std::uint64_t s = rng::mix64(seed, index);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng::entry_normal(s, 0, static_cast<std::uint32_t>(i));
        norm_sq += x[i] * x[i];
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& v : x) v *= inv;
    return x;
}

} // namespace

std::string render_small_ball_csv(const ExperimentConfig& cfg) {
    TimeCap cap(cfg.time_cap_seconds);
    std::ostringstream o;
    csv_header(o, "small-ball", cfg);
    o << "config,n,lambda,kind,probability,lower_bound,slack,holds,vacuous\n";
    std::size_t max_n = std::min<std::size_t>(cfg.small_ball_max_n, 20);
    if (max_n < 2) throw config_error("small-ball: need small_ball_max_n >= 2");
    for (std::uint64_t k = 0; k < cfg.small_ball_configs; ++k) {
        cap.check("small-ball sweep");
        std::uint64_t s = rng::mix64(cfg.seed ^ 0x5ba11ULL, k);
        std::size_t n = 2 + static_cast<std::size_t>(s % (max_n - 1));
        auto x = sweep_unit_vector(cfg.seed, k, n);
        double lambda = 1.5 * rng::u01(rng::mix64(s, 1));
        std::vector<ensemble::DistributionFamily> fams(
            n, ensemble::DistributionFamily::rademacher(1.0));
        auto rep = probe::lemma31_verify(x, fams, lambda, cfg.params.mu, cfg.params.r,
                                         cfg.trials, s);
        o << k << "," << n << "," << fmt(lambda) << "," << (rep.exact ? "exact" : "mc") << ","
          << fmt(rep.probability) << "," << fmt(rep.lower_bound) << ","
          << fmt(rep.probability - rep.lower_bound) << "," << (rep.holds ? "true" : "false")
          << "," << (rep.vacuous ? "true" : "false") << "\n";
    }
    return o.str();
}

VerifySummary run_verify(const ExperimentConfig& cfg, std::ostream& out) {
    TimeCap cap(cfg.time_cap_seconds);
    VerifySummary vs;
    auto tally = [&](const std::string& name, probe::Verdict v) {
        switch (v) {
            case probe::Verdict::Pass: ++vs.pass; break;
            case probe::Verdict::VacuousPass: ++vs.vacuous_pass; break;
            case probe::Verdict::Fail: ++vs.fail; break;
            case probe::Verdict::Undecided: ++vs.undecided; break;
        }
        out << "  [" << probe::verdict_name(v) << "] " << name << "\n";
    };
    auto tally_bool = [&](const std::string& name, bool ok, bool vacuous = false) {
        tally(name, vacuous ? probe::Verdict::VacuousPass
                            : (ok ? probe::Verdict::Pass : probe::Verdict::Fail));
    };

    out << "verify: inequality suite (seed " << cfg.seed << ", trials " << cfg.trials << ")\n";

    // 1. Small-ball lower bound, exact enumeration.
    {
        std::size_t violations = 0, vacuous = 0, count = 0;
        double min_slack = std::numeric_limits<double>::infinity();
        std::size_t configs = std::min<std::size_t>(cfg.small_ball_configs, 500);
        for (std::uint64_t k = 0; k < configs; ++k) {
            std::uint64_t s = rng::mix64(cfg.seed ^ 0x5ba11ULL, k);
            std::size_t n = 2 + static_cast<std::size_t>(s % 13);
            auto x = sweep_unit_vector(cfg.seed, k, n);
            double lambda = 1.5 * rng::u01(rng::mix64(s, 1));
            std::vector<ensemble::DistributionFamily> fams(
                n, ensemble::DistributionFamily::rademacher(1.0));
            auto rep = probe::lemma31_verify(x, fams, lambda, cfg.params.mu, cfg.params.r);
            ++count;
            if (rep.vacuous) ++vacuous;
            else {
                min_slack = std::min(min_slack, rep.probability - rep.lower_bound);
                if (!rep.holds) ++violations;
            }
        }
        tally_bool("small-ball lower bound, " + std::to_string(count) +
                       " exact configs (min slack " +
                       (std::isfinite(min_slack) ? fmt(min_slack) : "n/a") + ", " +
                       std::to_string(vacuous) + " vacuous)",
                   violations == 0);
        cap.check("verify small-ball");
    }

    // 2. Paley-Zygmund, exact both sides.
    {
        std::size_t violations = 0, count = 0;
        for (std::uint64_t k = 0; k < 100; ++k) {
            std::uint64_t s = rng::mix64(cfg.seed ^ 0x9a1e9ULL, k);
            std::size_t atoms = 1 + static_cast<std::size_t>(s % 6);
            probe::FiniteDistribution d;
            double total = 0;
            for (std::size_t a = 0; a < atoms; ++a) {
                double w = rng::u01_open(rng::mix64(s, 2 * a + 2));
                d.atoms.push_back({3.0 * rng::u01(rng::mix64(s, 2 * a + 1)), w});
                total += w;
            }
            for (auto& at : d.atoms) at.prob /= total;
            double ef2 = d.raw_moment(2.0);
            for (double frac : {0.0, 0.3, 0.7, 0.95}) {
                for (double p : {1.5, 2.0, 3.0}) {
                    auto rep = probe::paley_zygmund_check(d, frac * std::sqrt(ef2), p);
                    ++count;
                    if (!rep.holds) ++violations;
                }
            }
        }
        tally_bool("Paley-Zygmund exact, " + std::to_string(count) + " cases", violations == 0);
        cap.check("verify paley-zygmund");
    }

    // 3. Berry-Esseen shape, exact binomial CDF.
    {
        bool ok = true;
        for (std::size_t n : {25u, 100u, 400u}) {
            std::vector<probe::Summand> zs(n, probe::Summand::rademacher(1.0));
            auto rep = probe::berry_esseen_gap(zs, {});
            double envelope = 0.8 / std::sqrt(static_cast<double>(n));
            double theorem = cfg.uconst.c_be * rep.sum_abs_r / std::pow(rep.sigma, rep.r);
            if (rep.gap > envelope || rep.gap > theorem) ok = false;
        }
        tally_bool("Berry-Esseen exact gap vs 0.8/sqrt(n) and C_BE bound, n in {25,100,400}", ok);
        cap.check("verify berry-esseen");
    }

    // 4. Levy form vs corollary form on flat vectors.
    {
        bool ok = true;
        for (std::size_t card : {1u, 4u, 16u, 64u}) {
            for (double t : {0.0, 0.1, 1.0}) {
                for (double A : {0.1, 0.5, 1.0}) {
                    double A_sigma = std::sqrt(static_cast<double>(card)) * A;
                    double proj_r =
                        std::pow(static_cast<double>(card), 1.0 / 3.0) * A; // r = 3
                    double levy = bounds::sbp_levy_upper(t, A_sigma, proj_r, cfg.params.mu,
                                                         3.0, cfg.uconst);
                    double coro = bounds::coro_upper(t, A, A, card, cfg.params.mu, 3.0,
                                                     cfg.uconst);
                    if (levy > coro * (1 + 1e-12)) ok = false;
                }
            }
        }
        tally_bool("levy-form small ball <= corollary form on flat vectors", ok);
    }

    // 5. Second-moment identity.
    {
        auto spec = build_ensemble_spec(cfg);
        std::vector<double> x(spec.n, 1.0 / std::sqrt(static_cast<double>(spec.n)));
        auto rep = probe::second_moment_check(spec, x, std::max<std::uint64_t>(200, cfg.trials),
                                              cfg.seed);
        tally_bool("second-moment identity z-score within 5 (z = " + fmt(rep.z_score) + ")",
                   std::abs(rep.z_score) <= 5.0 && rep.analytic_meets_cond_iii_floor);
        cap.check("verify second-moment");
    }

    // 6. Smallest-singular-value tail at the printed constants.
    {
        auto spec = build_ensemble_spec(cfg);
        auto tall = bounds::prop_tall_constants(cfg.params.r, cfg.params.mu, cfg.params.a3);
        auto ts = probe::mc_smallest_sv_tail(spec, tall.b1, std::min<std::uint64_t>(cfg.trials, 2000),
                                             cfg.seed, cfg.alpha, tall.b2);
        tally("s_n tail at printed (b1, b2): " + ts.to_json(), *ts.verdict);
        cap.check("verify sv tail");
    }

    // 7. Operator-norm tail, condition (ii) empirically.
    {
        auto spec = build_ensemble_spec(cfg);
        auto ts = probe::mc_operator_norm_tail(spec, cfg.params.a1,
                                               std::min<std::uint64_t>(cfg.trials, 2000),
                                               cfg.seed, cfg.alpha, cfg.params.a2);
        tally("operator norm tail vs e^{-a2 N}: " + ts.to_json(), *ts.verdict);
        cap.check("verify norm tail");
    }

    out << "verify: pass=" << vs.pass << " vacuous-pass=" << vs.vacuous_pass
        << " fail=" << vs.fail << " undecided=" << vs.undecided << "\n";
    return vs;
}

int run(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& out,
        std::ostream& err) {
    try {
        if (cfg.threads > 0) set_threads(cfg.threads);
        if (subcommand == "check-conditions") {
            std::string payload = render_check_conditions(cfg);
            write_file(cfg.out_dir, "conditions.json", payload + "\n");
            out << payload << "\n";
        } else if (subcommand == "sample") {
            auto spec = build_ensemble_spec(cfg);
            auto ms = ensemble::sample(spec, cfg.seed);
            fs::create_directories(cfg.out_dir);
            if (cfg.format == "bin") {
                auto path = (fs::path(cfg.out_dir) / "sample.bin").string();
                write_binary_file(ms.matrix, path);
                out << "wrote " << path << "\n";
            } else {
                auto path = (fs::path(cfg.out_dir) / "sample.csv").string();
                write_csv_file(ms.matrix, path);
                out << "wrote " << path << "\n";
            }
        } else if (subcommand == "spectrum") {
            std::string payload = render_spectrum_csv(cfg);
            write_file(cfg.out_dir, "spectrum.csv", payload);
            out << payload;
        } else if (subcommand == "constants" || subcommand == "verify-bounds") {
            std::string json = render_constants(cfg, true);
            write_file(cfg.out_dir, "constants.json", json + "\n");
            out << render_constants(cfg, cfg.format == "json") << "\n";
        } else if (subcommand == "tail-sweep") {
            std::string payload = render_tail_sweep_csv(cfg);
            write_file(cfg.out_dir, "tail_sweep.csv", payload);
            out << payload;
        } else if (subcommand == "small-ball") {
            std::string payload = render_small_ball_csv(cfg);
            write_file(cfg.out_dir, "small_ball.csv", payload);
            out << payload;
        } else if (subcommand == "net") {
            auto net = geometry::build_net(cfg.net_dim, cfg.net_epsilon, cfg.net_domain,
                                           cfg.net_probes, cfg.time_cap_seconds);
            std::ostringstream o;
            geometry::write_net_csv(net, o);
            write_file(cfg.out_dir, "net.csv", o.str());
            out << "net: " << net.points.size() << " points, certified max distance "
                << fmt(net.certified_max_distance) << " <= eps " << fmt(net.epsilon)
                << " (volumetric bound " << fmt(net.volumetric_bound) << ")\n";
        } else if (subcommand == "verify") {
            auto vs = run_verify(cfg, out);
            return vs.fail == 0 ? kExitOk : kExitVerifyFailed;
        } else {
            err << "unknown subcommand: " << subcommand << "\n";
            return kExitConfig;
        }
        return kExitOk;
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const invalid_input& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const infeasibility_error& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hypothesis_violation& e) {
        err << "hypothesis gate: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const capacity_error& e) {
        err << "capacity: " << e.what() << "\n";
        return kExitConfig;
    } catch (const numerical_failure& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace ssv::cli
