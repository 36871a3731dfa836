#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ssv::geometry {

struct CompressibilityParams {
    std::size_t m = 1;   // sparsity level, 1 <= m <= n
    double rho = 0.25;   // distance threshold in (0,1)
};

enum class VectorClass { Sparse, Compressible, Incompressible };

/// Classification tie band: distances within this of rho count as Compressible.
constexpr double kTieBand = 1e-9;

/// Euclidean distance from x to the m-sparse set: the norm of x off its m
/// largest-magnitude coordinates (ties resolved by ascending index).
double distance_to_sparse(const std::vector<double>& x, std::size_t m);

/// Requires |x| = 1 within 1e-12.
VectorClass classify(const std::vector<double>& x, const CompressibilityParams& params);

/// Exhaustive check of the projection characterization: incompressible iff
/// |P_sigma x| > rho for every sigma whose complement has at most m indices.
/// n <= 20.
bool incompressible_oracle(const std::vector<double>& x, const CompressibilityParams& params);

struct SpreadSet {
    std::vector<std::size_t> indices; // coordinates with moderate magnitude
    double lower = 0.0;               // rho / sqrt(2n)
    double upper = 0.0;               // 1 / sqrt(gamma n)
    double cardinality_bound = 0.0;   // rho^2 gamma n / 2
    bool bound_satisfied = false;
    std::string note;                 // which invariant failed, when one does
};

/// Selects sigma = {k : lower <= |x_k| <= upper}. For incompressible x the
/// cardinality bound is guaranteed; for other x the report says what failed.
SpreadSet spread_set(const std::vector<double>& x, double gamma, double rho);

struct Net {
    std::size_t dim = 0;
    double epsilon = 0.0;
    std::string domain;                      // "sphere" | "ball"
    std::vector<std::vector<double>> points;
    double certified_max_distance = 0.0;     // max over probe points
    std::size_t probe_count = 0;
    double volumetric_bound = 0.0;           // (1 + 2/eps)^n, reported not asserted
};

/// Greedy farthest-point net, certified against a quasi-random probe set.
/// n <= 6. Throws capacity_error / numerical-style net errors on failure;
/// a positive deadline bounds the wall-clock spend.
Net build_net(std::size_t n, double epsilon, const std::string& domain,
              std::size_t probe_count = 1000000, double deadline_seconds = 0.0);

/// Zeroes coordinates outside sigma.
std::vector<double> project(const std::vector<double>& x, const std::vector<std::size_t>& sigma);

void write_net_csv(const Net& net, std::ostream& out);

} // namespace ssv::geometry
