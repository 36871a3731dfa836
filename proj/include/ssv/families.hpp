#pragma once

#include <cstdint>
#include <string>

namespace ssv::ensemble {

enum class FamilyKind { Gaussian, Rademacher, UniformSymmetric, TwoPointCentered, Zero };

/// A centered scalar distribution. Parameters:
///   Gaussian           p1 = standard deviation
///   Rademacher         p1 = scale s, values +-s with probability 1/2
///   UniformSymmetric   p1 = halfwidth h, uniform on [-h, h]
///   TwoPointCentered   p1 = v1, p2 = v2, p3 = P(v1); requires p*v1+(1-p)*v2 = 0
///   Zero               constant 0
struct DistributionFamily {
    FamilyKind kind = FamilyKind::Zero;
    double p1 = 0.0, p2 = 0.0, p3 = 0.0;

    static DistributionFamily gaussian(double sd);
    static DistributionFamily rademacher(double scale);
    static DistributionFamily uniform_symmetric(double halfwidth);
    static DistributionFamily two_point(double v1, double v2, double p);
    static DistributionFamily zero();
};

/// E|xi|^r in closed form (Gaussian via the absolute-moment formula).
double moment_bound(const DistributionFamily& family, double r);

/// E xi^2.
double variance(const DistributionFamily& family);

/// Subgaussian parameter b with E e^{tX} <= e^{b^2 t^2/2}.
/// Gaussian: sd. Bounded families: Hoeffding's lemma, b = (max - min)/2.
double subgaussian_parameter(const DistributionFamily& family);

/// One draw, counter-addressed by (seed, row, col).
double sample_entry(const DistributionFamily& family, std::uint64_t seed,
                    std::uint32_t row, std::uint32_t col);

std::string family_name(FamilyKind kind);
FamilyKind family_kind_from_name(const std::string& name);

/// Same shape of law, rescaled to the requested variance. Zero variance gives Zero.
DistributionFamily scaled_to_variance(const DistributionFamily& base, double var);

} // namespace ssv::ensemble
