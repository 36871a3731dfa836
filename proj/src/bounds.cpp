#include "ssv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <string>

#include "ssv/errors.hpp"

namespace ssv::bounds {

namespace {

constexpr double kE2 = 7.3890560989306495; // e^2
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

void require(bool cond, const char* what) {
    if (!cond) throw invalid_input(what);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

double reduce_order(double r) {
    require(std::isfinite(r) && r > 2, "need r > 2");
    return std::min(3.0, r);
}

TallConstants prop_tall_constants(double r, double mu, double a3) {
    double r0 = reduce_order(r);
    require(mu >= 1, "need mu >= 1");
    require(a3 > 0 && a3 <= mu, "need a3 in (0, mu]");
    double base = a3 * a3 / (32.0 * mu * mu);
    double pow_term = std::pow(base, r0 / (r0 - 2.0));
    TallConstants out;
    out.r0 = r0;
    out.b1 = (a3 * a3 * a3 * a3 / (32.0 * mu * mu)) * pow_term;
    out.b2 = (a3 * a3 / (8.0 * mu * mu)) * pow_term;
    return out;
}

double teo_tall_delta0(double b1, double b2, double a1) {
    require(b1 > 0 && b2 > 0 && a1 > 0, "need b1, b2, a1 > 0");
    return std::max((2.0 / b2) * std::log(6.0 * a1 / b1), (2.0 / b2) * std::log(3.0));
}

double small_ball_lower(double lambda, double A2, double mu, double r) {
    double r0 = reduce_order(r);
    require(lambda >= 0 && A2 >= 0 && mu >= 1, "need lambda, A2 >= 0 and mu >= 1");
    double pos = A2 - lambda * lambda;
    if (pos <= 0) return 0.0;
    return std::pow(pos / (8.0 * mu * mu), r0 / (r0 - 2.0));
}

double sbp_interval_upper(double a, double b, double A, double x_r_norm, double mu, double r,
                          const UniversalConstants& u) {
    double r0 = reduce_order(r);
    require(a <= b, "need a <= b");
    require(A >= 0 && x_r_norm >= 0 && mu >= 1, "need A, |x|_r >= 0 and mu >= 1");
    if (A == 0) return 1.0; // vacuous
    return (b - a) / (kSqrt2Pi * A) + u.c_sbp * std::pow(x_r_norm * mu / A, r0);
}

double sbp_levy_upper(double t, double A_sigma, double proj_r_norm, double mu, double r,
                      const UniversalConstants& u) {
    double r0 = reduce_order(r);
    require(t >= 0 && A_sigma >= 0 && proj_r_norm >= 0 && mu >= 1, "bad levy-form arguments");
    if (A_sigma == 0) return 1.0; // empty sigma is vacuous
    return 2.0 * t / (kSqrt2Pi * A_sigma) + u.c_sbp * std::pow(proj_r_norm * mu / A_sigma, r0);
}

double coro_upper(double t, double A, double B, std::size_t sigma_card, double mu, double r,
                  const UniversalConstants& u) {
    double r0 = reduce_order(r);
    require(A > 0 && B >= A, "need 0 < A <= B");
    require(sigma_card >= 1, "need |sigma| >= 1");
    require(t >= 0 && mu >= 1, "need t >= 0, mu >= 1");
    double C = std::max(std::sqrt(2.0 / std::numbers::pi), u.c_sbp);
    return C / std::pow(static_cast<double>(sigma_card), r0 / 2.0 - 1.0) *
           (t / A + std::pow(mu, r0) * std::pow(B / A, r0));
}

double incomp_sbp_upper(double t, std::size_t n, double mu, double r, double gamma,
                        double rho, double a4, const UniversalConstants& u) {
    double r0 = reduce_order(r);
    require(t >= 0 && n >= 1 && mu >= 1, "need t >= 0, n >= 1, mu >= 1");
    require(gamma > 0 && gamma < 1 && rho > 0 && rho < 1, "need gamma, rho in (0,1)");
    require(a4 > 0 && a4 <= 1, "need a4 in (0, 1]");
    // (a4 - 1) first: a4 is near 1 and the gamma term can be ~1e-22
    double c0 = (a4 - 1.0) + 0.5 * rho * rho * gamma;
    if (!(c0 > 0))
        throw hypothesis_violation("a4 + rho^2 gamma / 2 > 1 unmet (c0 = " + num(c0) + ")");
    double C = std::max(std::sqrt(2.0 / std::numbers::pi), u.c_sbp);
    double c0_pow = std::pow(c0, r0 / 2.0 - 1.0);
    double coef_t = C * std::numbers::sqrt2 / rho / c0_pow;
    double coef_mu = C * std::pow(std::numbers::sqrt2 / (rho * std::sqrt(gamma)), r0) / c0_pow;
    double c = std::max(coef_t, coef_mu);
    double nn = static_cast<double>(n);
    return c * (t * std::pow(nn, (3.0 - r0) / 2.0) +
                std::pow(mu, r0) * std::pow(nn, (2.0 - r0) / 2.0));
}

double TheoremConstants::t_for_delta(double delta) const {
    if (!(delta > 0)) throw invalid_input("need delta > 0");
    double cap = 1.0 / (c3 * kE2);
    return cap * std::pow(1.0 / (3.0 * a1 * c3 * kE2), 1.0 / delta);
}

TheoremConstants almost_square_constants(double r, double mu, double a1, double a2,
                                         double a3, double a4,
                                         const UniversalConstants& u) {
    (void)a2; // enters the theorem's probability, not these choices
    double r0 = reduce_order(r);
    require(a1 > 0, "need a1 > 0");
    require(a4 > 0 && a4 <= 1, "need a4 in (0, 1]");
    require(u.c_abs > 0, "need c_abs > 0");
    TallConstants tall = prop_tall_constants(r, mu, a3);

    TheoremConstants out;
    out.r0 = r0;
    out.b1 = tall.b1;
    out.b2 = tall.b2;
    out.a1 = a1;
    out.delta0 = teo_tall_delta0(tall.b1, tall.b2, a1);
    out.rho = std::min(0.25, tall.b1 / (5.0 * a1));
    out.gamma = tall.b2 / (4.0 * std::log(6.0 * std::numbers::e / (out.rho * tall.b2)));
    out.c3 = u.c_abs * (std::sqrt(std::numbers::pi) / out.rho +
                        std::pow(mu, r0) / (std::pow(out.rho, r0) * std::pow(a1, r0 - 2.0)));
    out.ct1 = (2.0 / (r0 - 2.0)) * std::log(3.0 * a1 * out.c3 * kE2);
    out.gamma0 = out.gamma;
    out.gamma0_identified_with_gamma = true;

    if (!((a4 - 1.0) + out.gamma > 0))
        throw hypothesis_violation("a4 > 1 - gamma unmet (gamma = " + num(out.gamma) +
                                   ", a4 = " + num(a4) + ")");
    out.ct2 = ((a4 - 1.0) + out.gamma) /
              (a1 * a1 * std::pow(out.c3 * kE2, 2.0 / (r0 - 2.0)));

    require(out.gamma > 0 && out.gamma < 1, "derived gamma left (0,1)");
    require(out.rho > 0 && out.rho <= 0.25, "derived rho left (0, 1/4]");
    require(out.c3 * kE2 >= 1.0, "derived c3 e^2 < 1 would break t <= 1");
    return out;
}

double square_bound(double eps, std::size_t n, double r, double C) {
    double r0 = reduce_order(r);
    require(eps >= 0 && n >= 1 && C > 0, "need eps >= 0, n >= 1, C > 0");
    return C * (eps + std::pow(static_cast<double>(n), 1.0 - r0 / 2.0));
}

AggregateBound invert_via_distance_aggregate(const std::vector<double>& dist_tail_probs,
                                             double gamma) {
    require(gamma > 0 && gamma < 1, "need gamma in (0,1)");
    require(!dist_tail_probs.empty(), "need at least one probability");
    double s = 0;
    for (double p : dist_tail_probs) {
        require(p >= 0 && p <= 1, "probabilities must lie in [0,1]");
        s += p;
    }
    AggregateBound out;
    out.unclamped = s / (gamma * static_cast<double>(dist_tail_probs.size()));
    out.clamped = std::clamp(out.unclamped, 0.0, 1.0);
    return out;
}

GateReport evaluate_gates(double r, double mu, double a1, double a3, double a4,
                          const UniversalConstants& u, const double* delta) {
    (void)u;
    GateReport g;
    TallConstants tall = prop_tall_constants(r, mu, a3);
    g.delta0 = teo_tall_delta0(tall.b1, tall.b2, a1);
    if (delta) {
        g.have_delta = true;
        g.delta = *delta;
        g.delta_ge_delta0 = *delta >= g.delta0;
    }
    double rho = std::min(0.25, tall.b1 / (5.0 * a1));
    g.gamma = tall.b2 / (4.0 * std::log(6.0 * std::numbers::e / (rho * tall.b2)));
    g.a4_gt_1_minus_gamma = (a4 - 1.0) + g.gamma > 0;
    g.c0 = (a4 - 1.0) + 0.5 * rho * rho * g.gamma;
    g.incomp_hypothesis = g.c0 > 0;
    return g;
}

} // namespace ssv::bounds
