#include "ssv/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssv/errors.hpp"
#include "ssv/rng.hpp"

namespace ssv::ensemble {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw invalid_input(std::string("nonfinite parameter: ") + name);
}

} // namespace

DistributionFamily DistributionFamily::gaussian(double sd) {
    require_finite(sd, "sd");
    if (sd < 0) throw invalid_input("gaussian sd must be >= 0");
    return {FamilyKind::Gaussian, sd, 0, 0};
}

DistributionFamily DistributionFamily::rademacher(double scale) {
    require_finite(scale, "scale");
    if (scale < 0) throw invalid_input("rademacher scale must be >= 0");
    return {FamilyKind::Rademacher, scale, 0, 0};
}

DistributionFamily DistributionFamily::uniform_symmetric(double halfwidth) {
    require_finite(halfwidth, "halfwidth");
    if (halfwidth < 0) throw invalid_input("uniform halfwidth must be >= 0");
    return {FamilyKind::UniformSymmetric, halfwidth, 0, 0};
}

DistributionFamily DistributionFamily::two_point(double v1, double v2, double p) {
    require_finite(v1, "v1");
    require_finite(v2, "v2");
    require_finite(p, "p");
    if (p <= 0 || p >= 1) throw invalid_input("two-point probability must lie in (0,1)");
    double mean = p * v1 + (1 - p) * v2;
    double scale = std::max(std::abs(v1), std::abs(v2));
    if (std::abs(mean) > 1e-12 * std::max(1.0, scale))
        throw invalid_input("two-point family is not centered: p*v1 + (1-p)*v2 != 0");
    return {FamilyKind::TwoPointCentered, v1, v2, p};
}

DistributionFamily DistributionFamily::zero() { return {FamilyKind::Zero, 0, 0, 0}; }

double moment_bound(const DistributionFamily& f, double r) {
    if (!(r > 0) || !std::isfinite(r)) throw invalid_input("moment order r must be positive and finite");
    switch (f.kind) {
        case FamilyKind::Zero:
            return 0.0;
        case FamilyKind::Rademacher:
            return std::pow(f.p1, r);
        case FamilyKind::UniformSymmetric:
            // E|X|^r = h^r / (r+1)
            return std::pow(f.p1, r) / (r + 1.0);
        case FamilyKind::TwoPointCentered:
            return f.p3 * std::pow(std::abs(f.p1), r) + (1 - f.p3) * std::pow(std::abs(f.p2), r);
        case FamilyKind::Gaussian:
            // E|X|^r = sd^r * 2^{r/2} Gamma((r+1)/2) / sqrt(pi)
            return std::pow(f.p1, r) *
                   std::exp((r / 2) * std::numbers::ln2 + std::lgamma((r + 1) / 2) -
                            0.5 * std::log(std::numbers::pi));
    }
    throw invalid_input("unknown family kind");
}

double variance(const DistributionFamily& f) {
    switch (f.kind) {
        case FamilyKind::Zero: return 0.0;
        case FamilyKind::Rademacher: return f.p1 * f.p1;
        case FamilyKind::UniformSymmetric: return f.p1 * f.p1 / 3.0;
        case FamilyKind::TwoPointCentered:
            return f.p3 * f.p1 * f.p1 + (1 - f.p3) * f.p2 * f.p2;
        case FamilyKind::Gaussian: return f.p1 * f.p1;
    }
    throw invalid_input("unknown family kind");
}

double subgaussian_parameter(const DistributionFamily& f) {
    switch (f.kind) {
        case FamilyKind::Gaussian: return f.p1;
        case FamilyKind::Zero: return 0.0;
        case FamilyKind::Rademacher: return f.p1;
        case FamilyKind::UniformSymmetric: return f.p1;
        case FamilyKind::TwoPointCentered: {
            double lo = std::min(f.p1, f.p2), hi = std::max(f.p1, f.p2);
            return (hi - lo) / 2.0;
        }
    }
    throw unsupported_family("unbounded non-Gaussian family has no closed-form subgaussian parameter");
}

double sample_entry(const DistributionFamily& f, std::uint64_t seed,
                    std::uint32_t row, std::uint32_t col) {
    switch (f.kind) {
        case FamilyKind::Zero:
            return 0.0;
        case FamilyKind::Gaussian:
            return f.p1 == 0.0 ? 0.0 : f.p1 * rng::entry_normal(seed, row, col);
        case FamilyKind::Rademacher:
            return f.p1 * rng::entry_sign(seed, row, col);
        case FamilyKind::UniformSymmetric:
            return f.p1 * (2.0 * rng::entry_uniform01(seed, row, col) - 1.0);
        case FamilyKind::TwoPointCentered:
            return rng::entry_uniform01(seed, row, col) < f.p3 ? f.p1 : f.p2;
    }
    throw invalid_input("unknown family kind");
}

std::string family_name(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Rademacher: return "rademacher";
        case FamilyKind::UniformSymmetric: return "uniform";
        case FamilyKind::TwoPointCentered: return "two_point";
        case FamilyKind::Zero: return "zero";
    }
    return "?";
}

FamilyKind family_kind_from_name(const std::string& name) {
    if (name == "gaussian") return FamilyKind::Gaussian;
    if (name == "rademacher") return FamilyKind::Rademacher;
    if (name == "uniform") return FamilyKind::UniformSymmetric;
    if (name == "two_point") return FamilyKind::TwoPointCentered;
    if (name == "zero") return FamilyKind::Zero;
    throw invalid_input("unknown family name: " + name);
}

DistributionFamily scaled_to_variance(const DistributionFamily& base, double var) {
    if (var < 0) throw invalid_input("variance must be >= 0");
    // Sub-epsilon variances are collapsed to exact zeros.
    if (var < std::numeric_limits<double>::epsilon()) return DistributionFamily::zero();
    switch (base.kind) {
        case FamilyKind::Zero:
            throw invalid_input("cannot scale Zero family to positive variance");
        case FamilyKind::Gaussian:
            return DistributionFamily::gaussian(std::sqrt(var));
        case FamilyKind::Rademacher:
            return DistributionFamily::rademacher(std::sqrt(var));
        case FamilyKind::UniformSymmetric:
            return DistributionFamily::uniform_symmetric(std::sqrt(3.0 * var));
        case FamilyKind::TwoPointCentered: {
            // Keep the asymmetry p; atoms c(1-p), -cp have variance c^2 p(1-p).
            double p = base.p3;
            double c = std::sqrt(var / (p * (1 - p)));
            return DistributionFamily::two_point(c * (1 - p), -c * p, p);
        }
    }
    throw invalid_input("unknown family kind");
}

} // namespace ssv::ensemble
