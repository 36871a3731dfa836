// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned in code next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ssv/bounds.hpp"
#include "ssv/ensemble.hpp"
#include "ssv/errors.hpp"
#include "ssv/geometry.hpp"
#include "ssv/matrix.hpp"
#include "ssv/parallel.hpp"
#include "ssv/probe.hpp"
#include "ssv/rng.hpp"
#include "ssv/spectra.hpp"
#include "oracles.hpp"

using namespace ssv;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> random_unit(std::uint64_t seed, std::size_t n) {
    std::vector<double> x(n);
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng::entry_normal(seed, 0, static_cast<std::uint32_t>(i));
        s += x[i] * x[i];
    }
    for (auto& v : x) v /= std::sqrt(s);
    return x;
}

// ---- criterion 1 -----------------------------------------------------------

bool criterion_svd_oracle(std::string& detail) {
    using ensemble::DistributionFamily;
    const DistributionFamily fams[] = {
        DistributionFamily::gaussian(1.0),
        DistributionFamily::rademacher(1.0),
        DistributionFamily::uniform_symmetric(1.7320508075688772),
        DistributionFamily::two_point(2.0, -0.5, 0.2),
    };
    double worst = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        std::uint64_t s = rng::mix64(0xACCE97ULL, k);
        std::size_t n = 1 + static_cast<std::size_t>(s % 8);
        std::size_t N = n + static_cast<std::size_t>((s >> 8) % (13 - n));
        Matrix m(N, n);
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < n; ++c)
                m(r, c) = ensemble::sample_entry(fams[(r + c + k) % 4], s,
                                                 static_cast<std::uint32_t>(r),
                                                 static_cast<std::uint32_t>(c));
        auto fast = spectra::singular_values(m).values;
        auto oracle = oracles::singular_values_via_gram(m);
        double scale = std::max(oracle[0], 1e-30);
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(fast[i] - oracle[i]) / scale);
    }
    detail = "worst relative deviation " + fmt(worst);
    return worst <= 1e-10;
}

// ---- criterion 2 -----------------------------------------------------------

bool criterion_geometry_oracle(std::string& detail) {
    std::size_t compared = 0;
    std::size_t skipped = 0;
    long long disagreements = 0;
    for (std::size_t n : {6u, 10u, 14u}) {
        long long local = 0;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : local)
        for (long long k = 0; k < 10000; ++k) {
            std::uint64_t s = rng::mix64(0x9e0ULL + n, static_cast<std::uint64_t>(k));
            auto x = random_unit(s, n);
            std::size_t m = 1 + static_cast<std::size_t>((s >> 16) % n);
            double rho = 0.05 + 0.9 * rng::u01(rng::mix64(s, 2));
            double d = geometry::distance_to_sparse(x, m);
            if (std::abs(d - rho) <= geometry::kTieBand) continue; // documented tie band
            bool fast = geometry::classify(x, {m, rho}) == geometry::VectorClass::Incompressible;
            bool slow = geometry::incompressible_oracle(x, {m, rho});
            if (fast != slow) ++local;
        }
        disagreements += local;
        compared += 10000;
    }
    detail = std::to_string(compared - skipped) + " comparisons, " +
             std::to_string(disagreements) + " disagreements";
    return disagreements == 0;
}

// ---- criterion 3 -----------------------------------------------------------

bool criterion_lemma31(std::string& detail, std::string* summary = nullptr) {
    std::size_t holds = 0, vacuous = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    const std::size_t configs = 1000;
    for (std::uint64_t k = 0; k < configs; ++k) {
        std::uint64_t s = rng::mix64(0x31AULL, k);
        std::size_t n = 2 + static_cast<std::size_t>(s % 15); // 2..16
        auto x = random_unit(s, n);
        double lambda = 1.2 * rng::u01(rng::mix64(s, 5));
        std::vector<ensemble::DistributionFamily> fams(
            n, ensemble::DistributionFamily::rademacher(1.0));
        auto rep = probe::lemma31_verify(x, fams, lambda, 1.0, 3.0);
        if (rep.holds) ++holds;
        if (rep.vacuous) ++vacuous;
        else min_slack = std::min(min_slack, rep.probability - rep.lower_bound);
    }
    detail = std::to_string(holds) + "/" + std::to_string(configs) + " hold, min slack " +
             fmt(min_slack) + " (" + std::to_string(vacuous) + " vacuous)";
    if (summary)
        *summary = "holds=" + std::to_string(holds) + " min_slack=" + fmt(min_slack);
    return holds == configs;
}

// ---- criterion 4 -----------------------------------------------------------

bool criterion_paley_zygmund(std::string& detail) {
    std::size_t cases = 0, held = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        std::uint64_t s = rng::mix64(0x9a1e9ULL, k);
        std::size_t atoms = 1 + static_cast<std::size_t>(s % 6);
        probe::FiniteDistribution d;
        double total = 0;
        for (std::size_t a = 0; a < atoms; ++a) {
            double w = rng::u01_open(rng::mix64(s, 2 * a + 2));
            d.atoms.push_back({4.0 * rng::u01(rng::mix64(s, 2 * a + 1)), w});
            total += w;
        }
        for (auto& at : d.atoms) at.prob /= total;
        double ef2 = d.raw_moment(2.0);
        for (double frac : {0.0, 0.25, 0.5, 0.75, 0.95, 1.0}) {
            for (double p : {1.5, 2.0, 3.0}) {
                auto rep = probe::paley_zygmund_check(d, frac * std::sqrt(ef2), p);
                ++cases;
                if (rep.holds) ++held;
            }
        }
    }
    detail = std::to_string(held) + "/" + std::to_string(cases) + " exact cases hold";
    return held == cases;
}

// ---- criterion 5 -----------------------------------------------------------

bool criterion_berry_esseen(std::string& detail) {
    double min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0;
    bool gaps_ok = true;
    std::ostringstream d;
    for (std::size_t n : {25u, 100u, 400u, 1600u}) {
        std::vector<probe::Summand> zs(n, probe::Summand::rademacher(1.0));
        auto rep = probe::berry_esseen_gap(zs, {});
        double cap = 0.8 / std::sqrt(static_cast<double>(n));
        if (rep.gap > cap) gaps_ok = false;
        min_ratio = std::min(min_ratio, rep.ratio);
        max_ratio = std::max(max_ratio, rep.ratio);
        d << "n=" << n << " gap=" << fmt(rep.gap) << " ";
    }
    double spread = max_ratio / min_ratio;
    d << "ratio spread " << fmt(spread);
    detail = d.str();
    return gaps_ok && spread <= 2.0;
}

// ---- criterion 6 -----------------------------------------------------------

ensemble::EnsembleSpec gaussian_square_50() {
    ensemble::EnsembleSpec spec;
    spec.N = 50;
    spec.n = 50;
    spec.profile = ensemble::VarianceProfile(50, 50, 1.0);
    spec.base_family = ensemble::FamilyKind::Gaussian;
    spec.params = {3.0, 2.0, 4.0, 0.1, 1.0, 1.0};
    return spec;
}

bool criterion_gaussian_distance(std::string& detail, std::string* summary = nullptr) {
    const double oracle = 0.039877611676744923; // 2 Phi(0.05) - 1, exact distance law
    auto ts = probe::mc_column_distance_tail(gaussian_square_50(), 0.05, 10000, 3, 0.05);
    detail = "estimate " + fmt(ts.estimate) + ", ci [" + fmt(ts.ci_low) + ", " +
             fmt(ts.ci_high) + "], oracle " + fmt(oracle);
    if (summary) *summary = ts.to_json();
    return ts.ci_low <= oracle && oracle <= ts.ci_high;
}

// ---- criterion 7 -----------------------------------------------------------

bool criterion_constants_fixtures(std::string& detail) {
    auto rel_ok = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); };
    bool ok = true;
    std::ostringstream d;

    auto tall = bounds::prop_tall_constants(3.0, 1.0, 1.0);
    ok &= rel_ok(tall.b1, 9.5367431640625e-7) && rel_ok(tall.b2, 3.814697265625e-6);

    ok &= rel_ok(bounds::teo_tall_delta0(tall.b1, tall.b2, 2.0), 8570981.7176323032343);
    ok &= rel_ok(bounds::teo_tall_delta0(9.2159999999999952252e-11,
                                         2.5599999999999988631e-10, 3.0),
                 203108333413.10268637);

    bounds::UniversalConstants u;
    auto tc = bounds::almost_square_constants(3.0, 1.0, 2.0, 0.5, 1.0, 1.0, u);
    ok &= rel_ok(tc.rho, 9.5367431640625e-8);
    ok &= rel_ok(tc.gamma, 3.0339002828620596306e-8);
    ok &= rel_ok(tc.c3, 5.7646075230344207353e+20);
    ok &= rel_ok(tc.ct1, 103.1903968024939951);
    ok &= rel_ok(tc.ct2, 4.180458294704612003e-52);
    ok &= rel_ok(tc.t_for_delta(5.0), 7.7471024696356400611e-27);

    bounds::UniversalConstants u2;
    u2.c_abs = 2.0;
    auto tc2 = bounds::almost_square_constants(2.5, 1.5, 3.0, 0.5, 1.2, 1.0, u2);
    ok &= rel_ok(tc2.rho, 6.1439999999999968168e-12);
    ok &= rel_ok(tc2.gamma, 1.2624980336749003634e-12);
    ok &= rel_ok(tc2.c3, 3.4007092162045763942e+28);
    ok &= rel_ok(tc2.ct1, 279.57436473616186011);
    ok &= rel_ok(tc2.ct2, 3.5184740490284731352e-131);
    ok &= rel_ok(tc2.t_for_delta(3.0), 3.031851184796509983e-40);
    if (!ok) d << "fixture mismatch; ";

    // the three hypothesis gates fire on constructed violations
    bool gate1 = false, gate2 = false, gate3 = false;
    double small_delta = 10.0;
    auto gates = bounds::evaluate_gates(3.0, 1.0, 2.0, 1.0, 1.0, u, &small_delta);
    gate1 = !gates.delta_ge_delta0;
    try {
        bounds::almost_square_constants(3.0, 1.0, 2.0, 0.5, 1.0, 0.9999999, u);
    } catch (const hypothesis_violation&) {
        gate2 = true;
    }
    try {
        bounds::incomp_sbp_upper(0.1, 100, 1.0, 3.0, 0.5, std::sqrt(0.2), 0.9, u);
    } catch (const hypothesis_violation&) {
        gate3 = true;
    }
    d << "fixtures " << (ok ? "match at 1e-12" : "MISMATCH") << "; gates fired: delta0 "
      << gate1 << ", a4>1-gamma " << gate2 << ", incomp " << gate3;
    detail = d.str();
    return ok && gate1 && gate2 && gate3;
}

// ---- criterion 8 -----------------------------------------------------------

ensemble::EnsembleSpec gaussian_tall_200_10() {
    ensemble::EnsembleSpec spec;
    spec.N = 200;
    spec.n = 10;
    spec.profile = ensemble::VarianceProfile(200, 10, 1.0);
    spec.base_family = ensemble::FamilyKind::Gaussian;
    spec.params = {3.0, 2.0, 4.0, 0.1, 1.0, 1.0};
    return spec;
}

bool criterion_tall_theorem(std::string& detail, std::string* summary = nullptr) {
    auto spec = gaussian_tall_200_10();
    auto tall = bounds::prop_tall_constants(spec.params.r, spec.params.mu, spec.params.a3);
    const std::uint64_t trials = 10000, seed = 0x7a11ULL;
    const double sqrtN = std::sqrt(200.0);

    std::vector<double> svs;
    map_trials(trials, Exec::Parallel, svs, [&](std::uint64_t t) {
        return spectra::smallest_singular(ensemble::sample(spec, rng::mix64(seed, t)).matrix);
    });
    std::uint64_t hits = 0;
    for (double s : svs)
        if (s <= tall.b1 * sqrtN) ++hits;

    probe::TrialSummary ts;
    ts.event = "s_n <= b1*sqrt(N)";
    ts.trials = trials;
    ts.successes = hits;
    ts.estimate = static_cast<double>(hits) / trials;
    ts.alpha = 0.05;
    ts.seed = seed;
    probe::clopper_pearson(hits, trials, 0.05, ts.ci_low, ts.ci_high);
    ts.bound = std::exp(-tall.b2 * 200.0);
    ts.side = probe::BoundSide::Upper;
    ts.verdict = probe::judge(ts.ci_low, ts.ci_high, *ts.bound, probe::BoundSide::Upper,
                              &ts.vacuous);

    double mean_sn = sum_ordered(svs) / static_cast<double>(trials);
    double envelope = std::sqrt(200.0) - std::sqrt(10.0);
    double rel_err = std::abs(mean_sn - envelope) / envelope;

    bool part_a = ts.estimate == 0.0 && ts.ci_high <= 5e-4 &&
                  ts.verdict == probe::Verdict::VacuousPass && ts.vacuous;
    bool part_b = rel_err <= 0.15;
    detail = "tail " + probe::verdict_name(*ts.verdict) + " ci_high " + fmt(ts.ci_high) +
             "; mean s_n " + fmt(mean_sn) + " vs envelope " + fmt(envelope) + " (rel " +
             fmt(rel_err) + ")";
    if (summary) *summary = ts.to_json() + " mean_sn=" + fmt(mean_sn);
    return part_a && part_b;
}

// ---- criterion 9 -----------------------------------------------------------

bool criterion_sparsity_regression(std::string& detail, std::string* summary = nullptr) {
    std::ostringstream d, sum;
    bool ok = true;
    for (double fill : {1.0, 0.95, 0.9}) {
        ensemble::EnsembleSpec spec;
        spec.N = 120;
        spec.n = 40;
        spec.profile = ensemble::make_sparse_profile(120, 40, fill, 0.9, 0xF111ULL);
        spec.base_family = ensemble::FamilyKind::Rademacher;
        spec.params = {3.0, 2.0, 4.0, 0.1, 0.9, fill};
        auto rep = ensemble::check_conditions(spec);
        if (!rep.cond_iii_pass || !rep.cond_iv_pass) {
            ok = false;
            d << "fill " << fill << ": conditions failed; ";
            continue;
        }
        const std::uint64_t trials = 2000;
        std::vector<double> svs;
        map_trials(trials, Exec::Parallel, svs, [&](std::uint64_t t) {
            return spectra::smallest_singular(
                ensemble::sample(spec, rng::mix64(0x5BA0ULL + static_cast<std::uint64_t>(fill * 100), t)).matrix);
        });
        std::sort(svs.begin(), svs.end());
        // nearest-rank 1st percentile: the ceil(0.01 T)-th smallest
        double p1 = svs[static_cast<std::size_t>(std::ceil(0.01 * trials)) - 1] /
                    std::sqrt(120.0);
        d << "fill " << fill << " p1 " << fmt(p1) << "; ";
        sum << "fill=" << fill << " p1=" << fmt(p1) << ";";
        if (!(p1 >= 0.05)) ok = false;
    }
    detail = d.str();
    if (summary) *summary = sum.str();
    return ok;
}

// ---- criterion 10 ----------------------------------------------------------

bool criterion_determinism(std::string& detail) {
    struct Recheck {
        const char* name;
        std::function<void(std::string&)> run;
    };
    std::string dummy;
    Recheck rechecks[] = {
        {"lemma31", [&](std::string& s) { criterion_lemma31(dummy, &s); }},
        {"gaussian-distance", [&](std::string& s) { criterion_gaussian_distance(dummy, &s); }},
        {"tall-theorem", [&](std::string& s) { criterion_tall_theorem(dummy, &s); }},
        {"sparsity", [&](std::string& s) { criterion_sparsity_regression(dummy, &s); }},
    };
    bool ok = true;
    std::ostringstream d;
    for (auto& rc : rechecks) {
        std::string s1, s2, s4;
        set_threads(1);
        rc.run(s1);
        set_threads(2);
        rc.run(s2);
        set_threads(4);
        rc.run(s4);
        bool same = (s1 == s2) && (s2 == s4);
        if (!same) ok = false;
        d << rc.name << (same ? " identical; " : " DIVERGED; ");
    }
    set_threads(2);
    detail = d.str();
    return ok;
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    Criterion criteria[] = {
        {1, "SVD oracle equivalence (1e-10 relative, 1000 matrices)", criterion_svd_oracle},
        {2, "classify vs exhaustive incompressibility oracle (n in {6,10,14})",
         criterion_geometry_oracle},
        {3, "small-ball lower bound never violated (exact enumeration)",
         [](std::string& s) { return criterion_lemma31(s); }},
        {4, "Paley-Zygmund exact suite", criterion_paley_zygmund},
        {5, "Berry-Esseen exact gap shape (n up to 1600)", criterion_berry_esseen},
        {6, "Gaussian column-distance law (CI covers 2 Phi(0.05) - 1)",
         [](std::string& s) { return criterion_gaussian_distance(s); }},
        {7, "constants fixtures at 1e-12 and hypothesis gates", criterion_constants_fixtures},
        {8, "tall-theorem non-violation and mean envelope",
         [](std::string& s) { return criterion_tall_theorem(s); }},
        {9, "sparsity keeps the 1st percentile of s_n/sqrt(N) above 0.05",
         [](std::string& s) { return criterion_sparsity_regression(s); }},
        {10, "byte-identical summaries across thread counts", criterion_determinism},
    };
    // stated runtime budgets, seconds; 0 = unbudgeted
    const double budgets[] = {10, 60, 30, 0, 0, 120, 0, 180, 0, 0};

    int failures = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        auto& c = criteria[i];
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (budgets[i] > 0 && secs > budgets[i]) {
            ok = false;
            detail += " [over the " + std::to_string(static_cast<int>(budgets[i])) + "s budget]";
        }
        if (!ok) ++failures;
        std::printf("%s %2d. %s  (%s) [%.1fs]\n", ok ? "PASS" : "FAIL", c.id, c.name,
                    detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
