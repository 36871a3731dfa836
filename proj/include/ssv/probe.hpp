#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssv/bounds.hpp"
#include "ssv/ensemble.hpp"
#include "ssv/parallel.hpp"

namespace ssv::probe {

/// Upper bounds that close to within 1% of 1 carry no information at desk
/// scale; they are flagged vacuous rather than counted as informative passes.
constexpr double kVacuousUpper = 0.99;

enum class Verdict { Pass, VacuousPass, Fail, Undecided };
std::string verdict_name(Verdict v);

enum class BoundSide { Upper, Lower };

struct TrialSummary {
    std::string event;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<double> bound;       // theoretical bound being compared, if any
    std::optional<BoundSide> side;
    std::optional<Verdict> verdict;
    bool vacuous = false;

    std::string to_json() const; // stable field order, round-trip doubles
};

/// Exact two-sided binomial interval. Boundary tallies use the full alpha on
/// the single informative side: successes = trials gives ci_low = alpha^(1/T),
/// successes = 0 gives ci_high = 1 - alpha^(1/T).
void clopper_pearson(std::uint64_t successes, std::uint64_t trials, double alpha,
                     double& low, double& high);

/// Judges an estimated probability against a theoretical bound in the sound
/// direction, flagging vacuous bounds (>= kVacuousUpper for upper, <= 0 lower).
Verdict judge(double ci_low, double ci_high, double bound, BoundSide side, bool* vacuous);

struct ExactTail {
    std::uint64_t favorable = 0;
    unsigned dimension = 0; // probability = favorable / 2^dimension
    double probability() const;
};

/// P(|sum_i eps_i x_i| ? lambda) over all 2^n sign patterns, mode in {'>', '<', 'L'}
/// where 'L' means <=. n <= 20.
ExactTail exact_rademacher_small_ball(const std::vector<double>& x, double lambda,
                                      char mode, Exec policy = Exec::Parallel);

using MatrixEvent = std::function<bool(const ensemble::MatrixSample&)>;

/// Trial t draws sample(spec, mix64(seed, t)) and evaluates the event.
/// Counts are schedule-independent; identical summaries at any thread count.
TrialSummary mc_event(const ensemble::EnsembleSpec& spec, const MatrixEvent& event,
                      std::uint64_t trials, std::uint64_t seed, double alpha,
                      const std::string& description, Exec policy = Exec::Parallel);

/// Event s_n(sample) <= c1 sqrt(N); optional comparison with e^{-c2 N}.
TrialSummary mc_smallest_sv_tail(const ensemble::EnsembleSpec& spec, double c1,
                                 std::uint64_t trials, std::uint64_t seed,
                                 double alpha = 0.05,
                                 std::optional<double> c2 = std::nullopt,
                                 Exec policy = Exec::Parallel);

/// Event |Gamma| > a1 sqrt(N); empirical check of condition (ii), compared
/// with e^{-a2 N} when a2 is supplied.
TrialSummary mc_operator_norm_tail(const ensemble::EnsembleSpec& spec, double a1,
                                   std::uint64_t trials, std::uint64_t seed,
                                   double alpha = 0.05,
                                   std::optional<double> a2 = std::nullopt,
                                   Exec policy = Exec::Parallel);

/// Square spec; event dist(X_n, H_n) < eps and |Gamma| <= a1 sqrt(n).
/// Compared against c_weak (eps n^{(3-r)/2} + mu^r n^{(2-r)/2}) when supplied.
TrialSummary mc_column_distance_tail(const ensemble::EnsembleSpec& spec, double eps,
                                     std::uint64_t trials, std::uint64_t seed,
                                     double alpha = 0.05,
                                     std::optional<double> c_weak = std::nullopt,
                                     Exec policy = Exec::Parallel);

struct SecondMomentReport {
    double empirical_mean = 0;
    double analytic = 0; // sum_i (sum_j var_ji) x_i^2
    double z_score = 0;
    std::uint64_t trials = 0;
    bool analytic_meets_cond_iii_floor = false; // analytic >= a3^2 N when (iii) holds
};

/// Empirical mean of |Gamma x|^2 against the exact column-sum identity.
SecondMomentReport second_moment_check(const ensemble::EnsembleSpec& spec,
                                       const std::vector<double>& x, std::uint64_t trials,
                                       std::uint64_t seed, Exec policy = Exec::Parallel);

struct FiniteDistribution {
    struct Atom {
        double value;
        double prob;
    };
    std::vector<Atom> atoms;

    void validate() const; // finite values, probs >= 0, sum 1 within 1e-12
    double moment_abs(double order) const; // E |X|^order
    double raw_moment(double order) const; // E X^order, X >= 0 contexts
    double mean() const;
    double variance() const;
    double prob_greater(double lambda) const;
};

struct Summand {
    bool gaussian = false;
    double sd = 0.0;            // when gaussian
    FiniteDistribution finite;  // otherwise

    static Summand normal(double sd);
    static Summand rademacher(double scale);
    static Summand from_distribution(FiniteDistribution d);
};

struct BerryEsseenReport {
    double gap = 0;        // sup over grid and both one-sided limits at atoms
    double ratio = 0;      // gap sigma^r / sum E|z_k|^r
    double sigma = 0;
    double sum_abs_r = 0;
    double r = 3;
};

/// Exact law of a sum of n equal-scale Rademacher variables: ascending atom
/// values with their cumulative masses.
struct SumCdf {
    std::vector<double> values;
    std::vector<double> cdf; // cdf[i] = P(S <= values[i])

    /// P(S <= t), right-continuous step evaluation.
    double at(double t) const;
};
SumCdf rademacher_sum_cdf(std::size_t n, double scale);

/// Exact CDF of the normalized sum vs the standard normal. All-Rademacher
/// input with equal scale goes through binomial masses; mixed finite summands
/// are convolved exactly (capacity-capped); all-Gaussian gives gap 0.
BerryEsseenReport berry_esseen_gap(const std::vector<Summand>& summands,
                                   const std::vector<double>& t_grid, double r = 3.0);

struct PaleyZygmundReport {
    double lhs = 0; // P(f > lambda)
    double rhs = 0; // (E f^2 - lambda^2)^q / (E f^{2p})^{q/p}
    bool holds = false;
};

/// Exact two-sided evaluation for a nonnegative finite distribution;
/// requires p > 1 and 0 <= lambda <= sqrt(E f^2).
PaleyZygmundReport paley_zygmund_check(const FiniteDistribution& dist, double lambda, double p);

struct Lemma31Report {
    bool exact = false;
    double probability = 0;  // exact value, or MC point estimate
    double ci_low = 0, ci_high = 1;
    double lower_bound = 0;  // from bounds::small_ball_lower
    bool holds = false;      // exact: probability >= bound; MC: ci_low >= bound
    bool vacuous = false;    // bound <= 0
};

/// Verifies the small-ball lower bound for sum xi_i x_i at threshold lambda.
/// All-Rademacher coordinates with n <= 20 are enumerated exactly; otherwise
/// Monte Carlo with an exact binomial interval.
Lemma31Report lemma31_verify(const std::vector<double>& x,
                             const std::vector<ensemble::DistributionFamily>& families,
                             double lambda, double mu, double r,
                             std::uint64_t trials = 100000, std::uint64_t seed = 1,
                             Exec policy = Exec::Parallel);

} // namespace ssv::probe
