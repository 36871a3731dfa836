#include "ssv/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>

#include "ssv/errors.hpp"
#include "ssv/rng.hpp"
#include "ssv/spectra.hpp"

namespace ssv::probe {

namespace {

double phi_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::VacuousPass: return "vacuous-pass";
        case Verdict::Fail: return "fail";
        case Verdict::Undecided: return "undecided";
    }
    return "?";
}

void clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha,
                     double& low, double& high) {
    if (trials == 0) throw invalid_input("clopper_pearson: need trials >= 1");
    if (successes > trials) throw invalid_input("clopper_pearson: successes > trials");
    if (!(alpha > 0 && alpha < 1)) throw invalid_input("clopper_pearson: alpha must lie in (0,1)");
    const double s = static_cast<double>(successes);
    const double T = static_cast<double>(trials);
    if (successes == 0) {
        low = 0.0;
        high = boost::math::ibeta_inv(1.0, T, 1.0 - alpha); // = 1 - alpha^(1/T)
    } else if (successes == trials) {
        low = boost::math::ibeta_inv(T, 1.0, alpha); // = alpha^(1/T)
        high = 1.0;
    } else {
        low = boost::math::ibeta_inv(s, T - s + 1.0, alpha / 2.0);
        high = boost::math::ibeta_inv(s + 1.0, T - s, 1.0 - alpha / 2.0);
    }
}

Verdict judge(double ci_low, double ci_high, double bound, BoundSide side, bool* vacuous) {
    bool vac = false;
    Verdict v;
    if (side == BoundSide::Upper) {
        if (ci_low > bound) v = Verdict::Fail;
        else if (bound >= kVacuousUpper) { v = Verdict::VacuousPass; vac = true; }
        else if (ci_high <= bound) v = Verdict::Pass;
        else v = Verdict::Undecided;
    } else {
        if (ci_high < bound) v = Verdict::Fail;
        else if (bound <= 0.0) { v = Verdict::VacuousPass; vac = true; }
        else if (ci_low >= bound) v = Verdict::Pass;
        else v = Verdict::Undecided;
    }
    if (vacuous) *vacuous = vac;
    return v;
}

std::string TrialSummary::to_json() const {
    std::ostringstream out;
    out << "{\"event\":\"" << event << "\",\"trials\":" << trials
        << ",\"successes\":" << successes << ",\"estimate\":" << fmt(estimate)
        << ",\"ci\":[" << fmt(ci_low) << "," << fmt(ci_high) << "]"
        << ",\"alpha\":" << fmt(alpha) << ",\"seed\":" << seed << ",\"vacuous\":"
        << (vacuous ? "true" : "false");
    if (bound) out << ",\"bound\":" << fmt(*bound);
    if (verdict) out << ",\"verdict\":\"" << verdict_name(*verdict) << "\"";
    out << "}";
    return out.str();
}

double ExactTail::probability() const {
    return static_cast<double>(favorable) / std::ldexp(1.0, static_cast<int>(dimension));
}

ExactTail exact_rademacher_small_ball(const std::vector<double>& x, double lambda,
                                      char mode, Exec policy) {
    const std::size_t n = x.size();
    if (n == 0 || n > 20) throw capacity_error("exact enumeration limited to 1 <= n <= 20");
    if (mode != '>' && mode != '<' && mode != 'L')
        throw invalid_input("mode must be '>', '<' or 'L' (<=)");
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw invalid_input("need lambda >= 0");

    const std::uint64_t total = std::uint64_t{1} << n;
    // Fresh per-pattern dot products in fixed index order, so the count is
    // independent of enumeration order and thread count.
    auto hit = [&](std::uint64_t mask) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += (mask & (std::uint64_t{1} << i)) ? x[i] : -x[i];
        double a = std::abs(s);
        switch (mode) {
            case '>': return a > lambda;
            case '<': return a < lambda;
            default: return a <= lambda;
        }
    };

    std::uint64_t count = 0;
    if (policy == Exec::Serial) {
        for (std::uint64_t m = 0; m < total; ++m)
            if (hit(m)) ++count;
    } else {
#pragma omp parallel for schedule(static) reduction(+ : count)
        for (long long m = 0; m < static_cast<long long>(total); ++m)
            if (hit(static_cast<std::uint64_t>(m))) ++count;
    }
    return {count, static_cast<unsigned>(n)};
}

TrialSummary mc_event(const ensemble::EnsembleSpec& spec, const MatrixEvent& event,
                      std::uint64_t trials, std::uint64_t seed, double alpha,
                      const std::string& description, Exec policy) {
    if (trials < 1) throw invalid_input("mc_event: need trials >= 1");
    spec.validate();
    TrialSummary s;
    s.event = description;
    s.trials = trials;
    s.alpha = alpha;
    s.seed = seed;
    s.successes = count_trials(trials, policy, [&](std::uint64_t t) {
        return event(ensemble::sample(spec, rng::mix64(seed, t)));
    });
    s.estimate = static_cast<double>(s.successes) / static_cast<double>(trials);
    clopper_pearson(s.successes, trials, alpha, s.ci_low, s.ci_high);
    return s;
}

TrialSummary mc_smallest_sv_tail(const ensemble::EnsembleSpec& spec, double c1,
                                 std::uint64_t trials, std::uint64_t seed, double alpha,
                                 std::optional<double> c2, Exec policy) {
    if (!(c1 >= 0)) throw invalid_input("need c1 >= 0");
    const double threshold = c1 * std::sqrt(static_cast<double>(spec.N));
    auto summary = mc_event(
        spec,
        [threshold](const ensemble::MatrixSample& ms) {
            return spectra::smallest_singular(ms.matrix) <= threshold;
        },
        trials, seed, alpha, "s_n <= " + fmt(c1) + "*sqrt(N)", policy);
    if (c2) {
        summary.bound = std::exp(-*c2 * static_cast<double>(spec.N));
        summary.side = BoundSide::Upper;
        summary.verdict = judge(summary.ci_low, summary.ci_high, *summary.bound,
                                BoundSide::Upper, &summary.vacuous);
    }
    return summary;
}

TrialSummary mc_operator_norm_tail(const ensemble::EnsembleSpec& spec, double a1,
                                   std::uint64_t trials, std::uint64_t seed, double alpha,
                                   std::optional<double> a2, Exec policy) {
    if (!(a1 >= 0)) throw invalid_input("need a1 >= 0");
    const double threshold = a1 * std::sqrt(static_cast<double>(spec.N));
    auto summary = mc_event(
        spec,
        [threshold](const ensemble::MatrixSample& ms) {
            return spectra::operator_norm(ms.matrix) > threshold;
        },
        trials, seed, alpha, "|Gamma| > " + fmt(a1) + "*sqrt(N)", policy);
    if (a2) {
        summary.bound = std::exp(-*a2 * static_cast<double>(spec.N));
        summary.side = BoundSide::Upper;
        summary.verdict = judge(summary.ci_low, summary.ci_high, *summary.bound,
                                BoundSide::Upper, &summary.vacuous);
    }
    return summary;
}

TrialSummary mc_column_distance_tail(const ensemble::EnsembleSpec& spec, double eps,
                                     std::uint64_t trials, std::uint64_t seed, double alpha,
                                     std::optional<double> c_weak, Exec policy) {
    if (spec.N != spec.n) throw invalid_input("column-distance tail needs a square spec");
    if (!(eps >= 0)) throw invalid_input("need eps >= 0");
    const double norm_cap = spec.params.a1 * std::sqrt(static_cast<double>(spec.n));
    const std::size_t last = spec.n - 1;
    auto summary = mc_event(
        spec,
        [eps, norm_cap, last](const ensemble::MatrixSample& ms) {
            return spectra::column_distance(ms.matrix, last) < eps &&
                   spectra::operator_norm(ms.matrix) <= norm_cap;
        },
        trials, seed, alpha,
        "dist(X_n, H_n) < " + fmt(eps) + " and |Gamma| <= a1*sqrt(n)", policy);
    if (c_weak) {
        double r0 = bounds::reduce_order(spec.params.r);
        double nn = static_cast<double>(spec.n);
        summary.bound = *c_weak * (eps * std::pow(nn, (3.0 - r0) / 2.0) +
                                   std::pow(spec.params.mu, r0) * std::pow(nn, (2.0 - r0) / 2.0));
        summary.side = BoundSide::Upper;
        summary.verdict = judge(summary.ci_low, summary.ci_high, *summary.bound,
                                BoundSide::Upper, &summary.vacuous);
    }
    return summary;
}

SecondMomentReport second_moment_check(const ensemble::EnsembleSpec& spec,
                                       const std::vector<double>& x, std::uint64_t trials,
                                       std::uint64_t seed, Exec policy) {
    if (trials < 100) throw invalid_input("second_moment_check: need trials >= 100");
    spec.validate();
    if (x.size() != spec.n) throw invalid_input("second_moment_check: |x| != n");

    SecondMomentReport rep;
    rep.trials = trials;
    double analytic = 0;
    for (std::size_t i = 0; i < spec.n; ++i)
        analytic += spec.profile.column_sum(i) * x[i] * x[i];
    rep.analytic = analytic;

    std::vector<double> vals;
    map_trials(trials, policy, vals, [&](std::uint64_t t) {
        auto ms = ensemble::sample(spec, rng::mix64(seed, t));
        auto y = ms.matrix.apply(x);
        return dot(y, y);
    });
    // Accumulation is ordered, so the report is thread-count independent.
    double mean = sum_ordered(vals) / static_cast<double>(trials);
    double ssq = 0;
    for (double v : vals) ssq += (v - mean) * (v - mean);
    double sd = std::sqrt(ssq / (static_cast<double>(trials) - 1.0));
    rep.empirical_mean = mean;
    rep.z_score = sd > 0 ? (mean - analytic) / (sd / std::sqrt(static_cast<double>(trials)))
                         : (mean == analytic ? 0.0 : std::numeric_limits<double>::infinity());

    auto cond = ensemble::check_conditions(spec);
    double unit_norm = 0;
    for (double v : x) unit_norm += v * v;
    rep.analytic_meets_cond_iii_floor =
        !cond.cond_iii_pass || analytic >= cond.a3_sq_N * unit_norm - 1e-9 * cond.a3_sq_N;
    return rep;
}

// ---------------------------------------------------------------------------
// Finite distributions

void FiniteDistribution::validate() const {
    if (atoms.empty()) throw invalid_input("finite distribution needs at least one atom");
    double total = 0;
    for (const auto& a : atoms) {
        if (!std::isfinite(a.value)) throw invalid_input("atom value must be finite");
        if (!(a.prob >= 0)) throw invalid_input("atom probability must be >= 0");
        total += a.prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw invalid_input("atom probabilities must sum to 1 within 1e-12");
}

double FiniteDistribution::moment_abs(double order) const {
    double s = 0;
    for (const auto& a : atoms) s += a.prob * std::pow(std::abs(a.value), order);
    return s;
}

double FiniteDistribution::raw_moment(double order) const {
    double s = 0;
    for (const auto& a : atoms) s += a.prob * std::pow(a.value, order);
    return s;
}

double FiniteDistribution::mean() const {
    double s = 0;
    for (const auto& a : atoms) s += a.prob * a.value;
    return s;
}

double FiniteDistribution::variance() const {
    double m = mean(), s = 0;
    for (const auto& a : atoms) s += a.prob * (a.value - m) * (a.value - m);
    return s;
}

double FiniteDistribution::prob_greater(double lambda) const {
    double s = 0;
    for (const auto& a : atoms)
        if (a.value > lambda) s += a.prob;
    return s;
}

Summand Summand::normal(double sd) {
    Summand s;
    s.gaussian = true;
    s.sd = sd;
    return s;
}

Summand Summand::rademacher(double scale) {
    Summand s;
    s.finite.atoms = {{-scale, 0.5}, {scale, 0.5}};
    return s;
}

Summand Summand::from_distribution(FiniteDistribution d) {
    d.validate();
    Summand s;
    s.finite = std::move(d);
    return s;
}

// ---------------------------------------------------------------------------
// Berry-Esseen

namespace {

struct AtomicCdf {
    std::vector<double> values;          // ascending
    std::vector<long double> cdf;        // cdf[i] = P(S <= values[i])
};

// Equal-scale Rademacher sum: S = scale*(2k - n), mass C(n,k) 2^{-n}.
AtomicCdf binomial_sum_cdf(std::size_t n, double scale) {
    AtomicCdf out;
    out.values.resize(n + 1);
    out.cdf.resize(n + 1);
    long double acc = 0;
    const long double ln2n = static_cast<long double>(n) * std::numbers::ln2_v<long double>;
    for (std::size_t k = 0; k <= n; ++k) {
        long double logmass = lgammal(static_cast<long double>(n) + 1) -
                              lgammal(static_cast<long double>(k) + 1) -
                              lgammal(static_cast<long double>(n - k) + 1) - ln2n;
        acc += expl(logmass);
        out.values[k] = scale * (2.0 * static_cast<double>(k) - static_cast<double>(n));
        out.cdf[k] = acc;
    }
    // exact unit total, guard against cumulative rounding
    long double last = out.cdf.back();
    if (last > 0)
        for (auto& c : out.cdf) c /= last;
    return out;
}

} // namespace

double SumCdf::at(double t) const {
    auto it = std::upper_bound(values.begin(), values.end(), t);
    if (it == values.begin()) return 0.0;
    return cdf[static_cast<std::size_t>(std::distance(values.begin(), it)) - 1];
}

SumCdf rademacher_sum_cdf(std::size_t n, double scale) {
    if (n == 0 || !(scale > 0)) throw invalid_input("rademacher_sum_cdf: need n >= 1, scale > 0");
    auto inner = binomial_sum_cdf(n, scale);
    SumCdf out;
    out.values = std::move(inner.values);
    out.cdf.reserve(inner.cdf.size());
    for (long double c : inner.cdf) out.cdf.push_back(static_cast<double>(c));
    return out;
}

namespace {

AtomicCdf convolve_sum_cdf(const std::vector<const FiniteDistribution*>& dists) {
    std::vector<std::pair<double, long double>> atoms = {{0.0, 1.0L}};
    constexpr std::size_t kCap = 4000000;
    for (const auto* d : dists) {
        std::vector<std::pair<double, long double>> next;
        next.reserve(atoms.size() * d->atoms.size());
        if (atoms.size() * d->atoms.size() > kCap)
            throw capacity_error("berry_esseen_gap: exact convolution atom cap exceeded");
        for (const auto& [v, p] : atoms)
            for (const auto& a : d->atoms) next.emplace_back(v + a.value, p * a.prob);
        std::sort(next.begin(), next.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        atoms.clear();
        for (const auto& [v, p] : next) {
            if (!atoms.empty() && atoms.back().first == v)
                atoms.back().second += p;
            else
                atoms.emplace_back(v, p);
        }
    }
    AtomicCdf out;
    out.values.reserve(atoms.size());
    out.cdf.reserve(atoms.size());
    long double acc = 0;
    for (const auto& [v, p] : atoms) {
        acc += p;
        out.values.push_back(v);
        out.cdf.push_back(acc);
    }
    long double last = out.cdf.back();
    if (last > 0)
        for (auto& c : out.cdf) c /= last;
    return out;
}

} // namespace

BerryEsseenReport berry_esseen_gap(const std::vector<Summand>& summands,
                                   const std::vector<double>& t_grid, double r) {
    if (summands.empty()) throw invalid_input("berry_esseen_gap: no summands");
    double r0 = bounds::reduce_order(r);

    double sigma_sq = 0, sum_abs_r = 0;
    bool all_gaussian = true, all_finite = true;
    for (const auto& s : summands) {
        if (s.gaussian) {
            all_finite = false;
            sigma_sq += s.sd * s.sd;
            // E|N(0,sd)|^r = sd^r 2^{r/2} Gamma((r+1)/2)/sqrt(pi)
            sum_abs_r += std::pow(s.sd, r0) *
                         std::exp((r0 / 2) * std::numbers::ln2 + std::lgamma((r0 + 1) / 2) -
                                  0.5 * std::log(std::numbers::pi));
        } else {
            all_gaussian = false;
            s.finite.validate();
            if (std::abs(s.finite.mean()) > 1e-12)
                throw invalid_input("berry_esseen_gap: summands must be centered");
            sigma_sq += s.finite.variance();
            sum_abs_r += s.finite.moment_abs(r0);
        }
    }
    if (!(sigma_sq > 0)) throw invalid_input("berry_esseen_gap: zero total variance");

    BerryEsseenReport rep;
    rep.sigma = std::sqrt(sigma_sq);
    rep.sum_abs_r = sum_abs_r;
    rep.r = r0;

    if (all_gaussian) {
        rep.gap = 0.0; // the normalized sum is exactly standard normal
        rep.ratio = 0.0;
        return rep;
    }

    if (!all_finite) {
        // Finite part convolved exactly, Gaussian parts pooled: the sum's CDF
        // is sum_a p_a Phi((t sigma - v_a)/sigma_g), smooth, so the sup is
        // taken over the grid plus the atom locations.
        double gauss_var = 0;
        std::vector<const FiniteDistribution*> dists;
        for (const auto& s : summands) {
            if (s.gaussian) gauss_var += s.sd * s.sd;
            else dists.push_back(&s.finite);
        }
        if (!(gauss_var > 0)) throw invalid_input("berry_esseen_gap: zero-variance gaussians");
        auto atoms = convolve_sum_cdf(dists);
        double sigma_g = std::sqrt(gauss_var);
        auto mixed_cdf = [&](double t) {
            long double acc = 0, prev = 0;
            for (std::size_t i = 0; i < atoms.values.size(); ++i) {
                long double mass = atoms.cdf[i] - prev;
                prev = atoms.cdf[i];
                acc += mass * phi_cdf((t * rep.sigma - atoms.values[i]) / sigma_g);
            }
            return static_cast<double>(acc);
        };
        double gap = 0;
        for (double t : t_grid) gap = std::max(gap, std::abs(mixed_cdf(t) - phi_cdf(t)));
        for (double v : atoms.values) {
            double t = v / rep.sigma;
            gap = std::max(gap, std::abs(mixed_cdf(t) - phi_cdf(t)));
        }
        rep.gap = gap;
        rep.ratio = gap * std::pow(rep.sigma, r0) / sum_abs_r;
        return rep;
    }

    // Equal-scale all-Rademacher fast path.
    bool equal_rademacher = true;
    double scale = 0;
    for (std::size_t i = 0; i < summands.size(); ++i) {
        const auto& at = summands[i].finite.atoms;
        bool rad = at.size() == 2 && at[0].prob == 0.5 && at[1].prob == 0.5 &&
                   at[0].value == -at[1].value;
        if (!rad) { equal_rademacher = false; break; }
        double sc = std::abs(at[1].value);
        if (i == 0) scale = sc;
        else if (sc != scale) { equal_rademacher = false; break; }
    }

    AtomicCdf cdf;
    if (equal_rademacher && scale > 0) {
        cdf = binomial_sum_cdf(summands.size(), scale);
    } else {
        std::vector<const FiniteDistribution*> dists;
        dists.reserve(summands.size());
        for (const auto& s : summands) dists.push_back(&s.finite);
        cdf = convolve_sum_cdf(dists);
    }

    double gap = 0;
    // Both one-sided limits at every atom: the sup of |F - Phi| for a step
    // CDF is attained there.
    for (std::size_t i = 0; i < cdf.values.size(); ++i) {
        double t = cdf.values[i] / rep.sigma;
        double p = phi_cdf(t);
        double left = (i == 0) ? 0.0 : static_cast<double>(cdf.cdf[i - 1]);
        double right = static_cast<double>(cdf.cdf[i]);
        gap = std::max({gap, std::abs(left - p), std::abs(right - p)});
    }
    for (double t : t_grid) {
        auto it = std::upper_bound(cdf.values.begin(), cdf.values.end(), t * rep.sigma);
        double F = (it == cdf.values.begin())
                       ? 0.0
                       : static_cast<double>(cdf.cdf[static_cast<std::size_t>(
                             std::distance(cdf.values.begin(), it) - 1)]);
        gap = std::max(gap, std::abs(F - phi_cdf(t)));
    }
    rep.gap = gap;
    rep.ratio = gap * std::pow(rep.sigma, r0) / sum_abs_r;
    return rep;
}

PaleyZygmundReport paley_zygmund_check(const FiniteDistribution& dist, double lambda, double p) {
    dist.validate();
    if (!(p > 1)) throw invalid_input("paley_zygmund_check: need p > 1");
    for (const auto& a : dist.atoms)
        if (a.value < 0) throw invalid_input("paley_zygmund_check: needs f >= 0");
    const double ef2 = dist.raw_moment(2.0);
    if (!(lambda >= 0) || lambda * lambda > ef2 * (1 + 1e-15))
        throw invalid_input("paley_zygmund_check: lambda outside [0, sqrt(E f^2)]");
    const double q = p / (p - 1.0);
    const double ef2p = dist.raw_moment(2.0 * p);

    PaleyZygmundReport rep;
    rep.lhs = dist.prob_greater(lambda);
    double num = std::max(0.0, ef2 - lambda * lambda);
    rep.rhs = ef2p > 0 ? std::pow(num, q) / std::pow(ef2p, q / p) : (num > 0 ? 1.0 : 0.0);
    // equality cases land on floating-point noise; give them a relative hair
    rep.holds = rep.lhs >= rep.rhs * (1.0 - 1e-12) - 1e-300;
    return rep;
}

Lemma31Report lemma31_verify(const std::vector<double>& x,
                             const std::vector<ensemble::DistributionFamily>& families,
                             double lambda, double mu, double r, std::uint64_t trials,
                             std::uint64_t seed, Exec policy) {
    if (x.size() != families.size()) throw invalid_input("lemma31_verify: |x| != |families|");
    if (x.empty()) throw invalid_input("lemma31_verify: empty input");
    const std::size_t n = x.size();

    // condition (i) for the supplied (mu, r)
    for (const auto& f : families)
        if (ensemble::moment_bound(f, r) > std::pow(mu, r) * (1 + 1e-12))
            throw invalid_input("lemma31_verify: a coordinate family violates E|xi|^r <= mu^r");

    double A2 = 0;
    for (std::size_t i = 0; i < n; ++i) A2 += ensemble::variance(families[i]) * x[i] * x[i];

    Lemma31Report rep;
    rep.lower_bound = bounds::small_ball_lower(lambda, A2, mu, r);
    rep.vacuous = rep.lower_bound <= 0.0;

    bool all_rademacher = true;
    for (const auto& f : families)
        if (f.kind != ensemble::FamilyKind::Rademacher &&
            f.kind != ensemble::FamilyKind::Zero)
            all_rademacher = false;

    if (all_rademacher && n <= 20) {
        std::vector<double> weighted(n);
        for (std::size_t i = 0; i < n; ++i)
            weighted[i] = (families[i].kind == ensemble::FamilyKind::Zero ? 0.0
                                                                          : families[i].p1) * x[i];
        auto tail = exact_rademacher_small_ball(weighted, lambda, '>', policy);
        rep.exact = true;
        rep.probability = tail.probability();
        rep.ci_low = rep.ci_high = rep.probability;
        rep.holds = rep.probability >= rep.lower_bound;
        return rep;
    }

    // Monte Carlo fallback: trial t draws every coordinate from its family.
    std::uint64_t hits = count_trials(trials, policy, [&](std::uint64_t t) {
        std::uint64_t ts = rng::mix64(seed, t);
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += ensemble::sample_entry(families[i], ts, 0, static_cast<std::uint32_t>(i)) * x[i];
        return std::abs(s) > lambda;
    });
    rep.exact = false;
    rep.probability = static_cast<double>(hits) / static_cast<double>(trials);
    clopper_pearson(hits, trials, 0.05, rep.ci_low, rep.ci_high);
    rep.holds = rep.ci_low >= rep.lower_bound;
    return rep;
}

} // namespace ssv::probe
