#include "ssv/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ssv/errors.hpp"
#include "ssv/rng.hpp"

namespace ssv::ensemble {

VarianceProfile::VarianceProfile(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), var_(rows * cols, 0.0) {
    if (fill < 0 || !std::isfinite(fill))
        throw invalid_input("profile variance must be finite and >= 0");
    if (fill < std::numeric_limits<double>::epsilon()) fill = 0.0;
    for (auto& v : var_) v = fill;
}

void VarianceProfile::set(std::size_t j, std::size_t i, double v) {
    if (v < 0 || !std::isfinite(v)) throw invalid_input("profile variance must be finite and >= 0");
    if (v < std::numeric_limits<double>::epsilon()) v = 0.0;
    var_[j * cols_ + i] = v;
}

double VarianceProfile::column_sum(std::size_t i) const {
    double s = 0;
    for (std::size_t j = 0; j < rows_; ++j) s += (*this)(j, i);
    return s;
}

std::size_t VarianceProfile::row_count_at_least_one(std::size_t j) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < cols_; ++i)
        if ((*this)(j, i) >= 1.0) ++c;
    return c;
}

void EnsembleSpec::validate() const {
    if (n < 1 || N < n) throw invalid_input("need N >= n >= 1");
    if (profile.rows() != N || profile.cols() != n)
        throw invalid_input("profile shape does not match (N, n)");
    if (!(params.r > 2)) throw invalid_input("need r > 2");
    if (!(params.mu >= 1)) throw invalid_input("need mu >= 1");
    if (!(params.a1 > 0) || !(params.a2 > 0)) throw invalid_input("need a1, a2 > 0");
    if (!(params.a3 > 0 && params.a3 < params.mu)) throw invalid_input("need a3 in (0, mu)");
    if (!(params.a4 > 0 && params.a4 <= 1)) throw invalid_input("need a4 in (0, 1]");
    if (base_family == FamilyKind::TwoPointCentered && !(two_point_p > 0 && two_point_p < 1))
        throw invalid_input("two-point p must lie in (0,1)");
}

double EnsembleSpec::delta() const {
    return (static_cast<double>(N) - static_cast<double>(n)) / static_cast<double>(n);
}

DistributionFamily EnsembleSpec::family_at(std::size_t j, std::size_t i) const {
    double var = profile(j, i);
    if (var == 0.0) return DistributionFamily::zero();
    DistributionFamily base;
    switch (base_family) {
        case FamilyKind::Gaussian: base = DistributionFamily::gaussian(1.0); break;
        case FamilyKind::Rademacher: base = DistributionFamily::rademacher(1.0); break;
        case FamilyKind::UniformSymmetric: base = DistributionFamily::uniform_symmetric(1.0); break;
        case FamilyKind::TwoPointCentered:
            base = {FamilyKind::TwoPointCentered, 1.0, -1.0, two_point_p};
            break;
        case FamilyKind::Zero: return DistributionFamily::zero();
    }
    return scaled_to_variance(base, var);
}

ConditionReport check_conditions(const EnsembleSpec& spec) {
    spec.validate();
    ConditionReport rep;
    const auto& p = spec.params;

    // (i): worst entry r-th moment vs mu^r. Zero entries contribute 0.
    rep.mu_to_r = std::pow(p.mu, p.r);
    rep.worst_entry_moment = 0.0;
    for (std::size_t j = 0; j < spec.N; ++j) {
        for (std::size_t i = 0; i < spec.n; ++i) {
            double m = moment_bound(spec.family_at(j, i), p.r);
            if (m > rep.worst_entry_moment) {
                rep.worst_entry_moment = m;
                rep.worst_entry_row = j;
                rep.worst_entry_col = i;
            }
        }
    }
    rep.cond_i_pass = rep.worst_entry_moment <= rep.mu_to_r;

    // (iii): min column second-moment sum vs a3^2 N.
    rep.a3_sq_N = p.a3 * p.a3 * static_cast<double>(spec.N);
    rep.column_sums.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) rep.column_sums[i] = spec.profile.column_sum(i);
    rep.min_column_sum = *std::min_element(rep.column_sums.begin(), rep.column_sums.end());
    rep.cond_iii_pass = rep.min_column_sum >= rep.a3_sq_N;

    // (iv): min per-row count of unit-variance entries vs the real value a4*n.
    rep.a4_n = p.a4 * static_cast<double>(spec.n);
    rep.row_counts.resize(spec.N);
    for (std::size_t j = 0; j < spec.N; ++j)
        rep.row_counts[j] = spec.profile.row_count_at_least_one(j);
    rep.min_row_count = *std::min_element(rep.row_counts.begin(), rep.row_counts.end());
    rep.cond_iv_pass = static_cast<double>(rep.min_row_count) >= rep.a4_n;

    return rep;
}

MatrixSample sample(const EnsembleSpec& spec, std::uint64_t seed) {
    spec.validate();
    Matrix m(spec.N, spec.n);
    for (std::size_t j = 0; j < spec.N; ++j) {
        for (std::size_t i = 0; i < spec.n; ++i) {
            m(j, i) = sample_entry(spec.family_at(j, i), seed,
                                   static_cast<std::uint32_t>(j),
                                   static_cast<std::uint32_t>(i));
        }
    }
    return {std::move(m), seed};
}

VarianceProfile make_sparse_profile(std::size_t N, std::size_t n, double row_fill,
                                    double column_target, std::uint64_t seed) {
    if (n < 1 || N < n) throw invalid_input("need N >= n >= 1");
    if (!(row_fill > 0 && row_fill <= 1)) throw invalid_input("row_fill must lie in (0, 1]");
    if (!(column_target > 0)) throw invalid_input("column_target must be > 0");
    if (column_target > 1)
        throw infeasibility_error(
            "condition (iii) unreachable: unit variances cap column sums at N, need a3 <= 1");

    const std::size_t k = static_cast<std::size_t>(std::ceil(row_fill * static_cast<double>(n)));
    // Balanced round-robin: row j covers k consecutive column slots starting
    // at (j*k) mod n, so every column receives floor(Nk/n) or ceil(Nk/n) hits.
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::size_t r = static_cast<std::size_t>(rng::mix64(seed, i) % i);
        std::swap(perm[i - 1], perm[r]);
    }

    VarianceProfile prof(N, n, 0.0);
    std::vector<std::size_t> col_hits(n, 0);
    for (std::size_t j = 0; j < N; ++j) {
        std::size_t start = (j * k) % n;
        for (std::size_t t = 0; t < k; ++t) {
            std::size_t col = perm[(start + t) % n];
            prof.set(j, col, 1.0);
            ++col_hits[col];
        }
    }

    double min_col = static_cast<double>(*std::min_element(col_hits.begin(), col_hits.end()));
    double need = column_target * column_target * static_cast<double>(N);
    if (min_col < need)
        throw infeasibility_error(
            "condition (iii) infeasible: min column sum " + std::to_string(min_col) +
            " < a3^2 N = " + std::to_string(need) + " at row_fill " + std::to_string(row_fill));

    // Post-construction verification with a throwaway spec.
    EnsembleSpec check;
    check.N = N;
    check.n = n;
    check.profile = prof;
    check.base_family = FamilyKind::Rademacher;
    check.params.a3 = column_target;
    check.params.a4 = row_fill;
    check.params.mu = 2.0 * std::max(1.0, column_target);
    check.params.r = 3.0;
    auto rep = check_conditions(check);
    if (!rep.cond_iii_pass)
        throw infeasibility_error("condition (iii) violated by constructed profile");
    if (!rep.cond_iv_pass)
        throw infeasibility_error("condition (iv) violated by constructed profile");
    return prof;
}

} // namespace ssv::ensemble
