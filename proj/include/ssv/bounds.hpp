#pragma once

#include <cstddef>
#include <vector>

namespace ssv::bounds {

/// Unnamed absolute constants appearing in the estimates. Defaults are
/// conventions, not derived values; every report surfaces them.
struct UniversalConstants {
    double c_sbp = 1.0; // small-ball proposition constant c
    double c_be = 1.0;  // Berry-Esseen constant C
    double c_abs = 1.0; // absolute c >= 1 inside the c3 assembly

    bool operator==(const UniversalConstants&) const = default;
};

/// r0 = min{3, r}; every evaluator reduces to this order first.
double reduce_order(double r);

struct TallConstants {
    double b1 = 0, b2 = 0;
    double r0 = 0;
};

/// b1 = a3^4/(2^5 mu^2) (a3^2/(2^5 mu^2))^{r0/(r0-2)},
/// b2 = a3^2/(2^3 mu^2) (a3^2/(2^5 mu^2))^{r0/(r0-2)}.
TallConstants prop_tall_constants(double r, double mu, double a3);

/// delta0 = max{ (2/b2) ln(6 a1 / b1), (2/b2) ln 3 }.
double teo_tall_delta0(double b1, double b2, double a1);

/// ([A2 - lambda^2]_+ / (8 mu^2))^{r0/(r0-2)}; lower bound on P(|sum| > lambda).
double small_ball_lower(double lambda, double A2, double mu, double r);

/// (b - a)/(sqrt(2 pi) A) + c (|x|_r mu / A)^{r0}. A = 0 gives the vacuous 1.
double sbp_interval_upper(double a, double b, double A, double x_r_norm, double mu,
                          double r, const UniversalConstants& u);

/// 2t/(sqrt(2 pi) A_sigma) + c (|P_sigma x|_r mu / A_sigma)^{r0}; vacuous 1 at
/// A_sigma = 0 (empty sigma).
double sbp_levy_upper(double t, double A_sigma, double proj_r_norm, double mu, double r,
                      const UniversalConstants& u);

/// C / |sigma|^{r0/2-1} ( t/A + mu^{r0} (B/A)^{r0} ), C = max{sqrt(2/pi), c_sbp}
/// as assembled in the corollary's proof.
double coro_upper(double t, double A, double B, std::size_t sigma_card, double mu, double r,
                  const UniversalConstants& u);

/// c ( t n^{(3-r0)/2} + mu^{r0} n^{(2-r0)/2} ) with the constant assembled from
/// the proof chain through c0 = a4 + rho^2 gamma / 2 - 1. Throws
/// hypothesis_violation when the gate a4 + rho^2 gamma / 2 > 1 is unmet.
double incomp_sbp_upper(double t, std::size_t n, double mu, double r, double gamma,
                        double rho, double a4, const UniversalConstants& u);

struct TheoremConstants {
    double r0 = 0;
    double b1 = 0, b2 = 0;
    double delta0 = 0;
    double rho = 0;    // min{1/4, b1/(5 a1)}
    double gamma = 0;  // b2 / (4 ln(6e/(rho b2)))
    double c3 = 0;     // c (sqrt(pi)/rho + mu^{r0}/(rho^{r0} a1^{r0-2}))
    double ct1 = 0;    // (2/(r0-2)) ln(3 a1 c3 e^2)
    double ct2 = 0;    // (gamma + a4 - 1) / (a1^2 (c3 e^2)^{2/(r0-2)})
    double gamma0 = 0; // the square-matrix gate, identified with gamma
    bool gamma0_identified_with_gamma = true;
    double a1 = 0;

    /// Equality choice in the cap t <= (1/(c3 e^2)) (1/(3 a1 c3 e^2))^{1/delta}.
    double t_for_delta(double delta) const;
};

/// All the almost-square proof choices. Throws hypothesis_violation when
/// a4 <= 1 - gamma ("a4 > 1 - gamma" unmet).
TheoremConstants almost_square_constants(double r, double mu, double a1, double a2,
                                         double a3, double a4,
                                         const UniversalConstants& u);

/// C (eps + n^{1 - r0/2}).
double square_bound(double eps, std::size_t n, double r, double C);

struct AggregateBound {
    double unclamped = 0;
    double clamped = 0;
};

/// (1/(gamma n)) sum p_k, clamped to [0,1] with the raw value kept.
AggregateBound invert_via_distance_aggregate(const std::vector<double>& dist_tail_probs,
                                             double gamma);

/// The three theorem hypothesis gates, evaluated without throwing.
struct GateReport {
    bool have_delta = false;
    double delta = 0, delta0 = 0;
    bool delta_ge_delta0 = false;
    double gamma = 0;
    bool a4_gt_1_minus_gamma = false;
    double c0 = 0; // a4 + rho^2 gamma / 2 - 1
    bool incomp_hypothesis = false;
};

GateReport evaluate_gates(double r, double mu, double a1, double a3, double a4,
                          const UniversalConstants& u, const double* delta = nullptr);

} // namespace ssv::bounds
