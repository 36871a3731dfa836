#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ssv/ensemble.hpp"
#include "ssv/errors.hpp"
#include "oracles.hpp"

using namespace ssv;
using namespace ssv::ensemble;

namespace {

EnsembleSpec dense_spec(std::size_t N, std::size_t n, FamilyKind kind = FamilyKind::Gaussian) {
    EnsembleSpec s;
    s.N = N;
    s.n = n;
    s.profile = VarianceProfile(N, n, 1.0);
    s.base_family = kind;
    s.params.mu = 2.0;
    s.params.a3 = 1.0;
    return s;
}

} // namespace

TEST_CASE("check_conditions on the all-ones profile") {
    auto spec = dense_spec(20, 10);
    spec.params.a3 = 1.0; // equality case: min column sum == a3^2 N
    auto rep = check_conditions(spec);
    CHECK(rep.cond_iii_pass);
    CHECK(rep.min_column_sum == doctest::Approx(20.0));
    CHECK(rep.a3_sq_N == doctest::Approx(20.0));
    CHECK(rep.cond_iv_pass);
    CHECK(rep.min_row_count == 10);
    CHECK(rep.cond_ii == "empirical");
    // Gaussian(1), r = 3: worst moment 2 sqrt(2/pi) <= mu^r = 8
    CHECK(rep.cond_i_pass);
}

TEST_CASE("a zero column fails condition (iii)") {
    auto spec = dense_spec(12, 5);
    for (std::size_t j = 0; j < spec.N; ++j) spec.profile.set(j, 2, 0.0);
    auto rep = check_conditions(spec);
    CHECK_FALSE(rep.cond_iii_pass);
    CHECK(rep.min_column_sum == 0.0);
}

TEST_CASE("condition (iv) compares against the real value a4 n") {
    auto spec = dense_spec(8, 5);
    spec.params.a4 = 0.5; // a4 n = 2.5, so 3 unit entries per row pass, 2 fail
    for (std::size_t j = 0; j < spec.N; ++j)
        for (std::size_t i = 3; i < spec.n; ++i) spec.profile.set(j, i, 0.25);
    auto rep = check_conditions(spec);
    CHECK(rep.min_row_count == 3);
    CHECK(rep.cond_iv_pass);
    for (std::size_t j = 0; j < spec.N; ++j) spec.profile.set(j, 2, 0.5);
    rep = check_conditions(spec);
    CHECK(rep.min_row_count == 2);
    CHECK_FALSE(rep.cond_iv_pass);
}

TEST_CASE("condition reports are permutation invariant") {
    auto spec = dense_spec(9, 6);
    for (std::size_t j = 0; j < spec.N; ++j)
        for (std::size_t i = 0; i < spec.n; ++i)
            spec.profile.set(j, i, ((j * 7 + i * 3) % 5) * 0.5);
    auto base = check_conditions(spec);

    auto rows_swapped = spec;
    for (std::size_t i = 0; i < spec.n; ++i) {
        double a = spec.profile(0, i), b = spec.profile(5, i);
        rows_swapped.profile.set(0, i, b);
        rows_swapped.profile.set(5, i, a);
    }
    auto rep_r = check_conditions(rows_swapped);
    CHECK(rep_r.cond_i_pass == base.cond_i_pass);
    CHECK(rep_r.min_column_sum == doctest::Approx(base.min_column_sum));
    CHECK(rep_r.cond_iii_pass == base.cond_iii_pass);

    auto cols_swapped = spec;
    for (std::size_t j = 0; j < spec.N; ++j) {
        double a = spec.profile(j, 1), b = spec.profile(j, 4);
        cols_swapped.profile.set(j, 1, b);
        cols_swapped.profile.set(j, 4, a);
    }
    auto rep_c = check_conditions(cols_swapped);
    CHECK(rep_c.cond_i_pass == base.cond_i_pass);
    CHECK(rep_c.min_row_count == base.min_row_count);
    CHECK(rep_c.cond_iv_pass == base.cond_iv_pass);
}

TEST_CASE("sample determinism and zero profile") {
    auto spec = dense_spec(15, 7, FamilyKind::Rademacher);
    auto a = sample(spec, 99);
    auto b = sample(spec, 99);
    CHECK(a.matrix == b.matrix); // bitwise
    auto c = sample(spec, 100);
    CHECK(a.matrix != c.matrix);

    auto zero = dense_spec(6, 4);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t i = 0; i < 4; ++i) zero.profile.set(j, i, 0.0);
    auto z = sample(zero, 1234);
    for (double v : z.matrix.data()) CHECK(v == 0.0);
}

TEST_CASE("rademacher sample mean is CLT-sized") {
    auto spec = dense_spec(100, 100, FamilyKind::Rademacher);
    auto ms = sample(spec, 7);
    double mean = 0;
    for (double v : ms.matrix.data()) mean += v;
    mean /= 1e4;
    CHECK(std::abs(mean) <= 4.0 / 100.0); // 4 sigma at 10^4 entries
}

TEST_CASE("sampled entry variance follows the profile") {
    auto spec = dense_spec(200, 50, FamilyKind::UniformSymmetric);
    spec.profile = VarianceProfile(200, 50, 0.49);
    auto ms = sample(spec, 3);
    double ssq = 0;
    for (double v : ms.matrix.data()) ssq += v * v;
    CHECK(ssq / 1e4 == doctest::Approx(0.49).epsilon(0.05));
}

TEST_CASE("make_sparse_profile") {
    SUBCASE("full fill is the all-ones profile") {
        auto p = make_sparse_profile(6, 4, 1.0, 0.9, 5);
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t i = 0; i < 4; ++i) CHECK(p(j, i) == 1.0);
    }
    SUBCASE("sparse fill passes (iii) and (iv) by construction") {
        auto p = make_sparse_profile(20, 10, 0.9, 0.9, 11);
        EnsembleSpec s;
        s.N = 20;
        s.n = 10;
        s.profile = p;
        s.base_family = FamilyKind::Rademacher;
        s.params.a3 = 0.9;
        s.params.a4 = 0.9;
        s.params.mu = 2.0;
        auto rep = check_conditions(s);
        CHECK(rep.cond_iii_pass);
        CHECK(rep.cond_iv_pass);
    }
    SUBCASE("infeasible corner is refused and names condition (iii)") {
        bool threw = false;
        try {
            make_sparse_profile(20, 10, 0.1, 1.0, 0);
        } catch (const ssv::infeasibility_error& e) {
            threw = true;
            CHECK(std::string(e.what()).find("condition (iii)") != std::string::npos);
        }
        CHECK(threw);
        CHECK_THROWS_AS(make_sparse_profile(12, 6, 0.34, 0.95, 0), ssv::infeasibility_error);
    }
    SUBCASE("balanced construction is optimal for tiny grids") {
        // exhaustive oracle: with k ones per row, no placement beats the
        // balanced round-robin minimum column count
        for (auto [N, n, k] : {std::tuple<std::size_t, std::size_t, std::size_t>{4, 3, 1},
                               {5, 3, 2}, {6, 4, 2}}) {
            std::size_t best = oracles::best_min_column_count(N, n, k);
            double fill = static_cast<double>(k) / static_cast<double>(n);
            auto p = make_sparse_profile(N, n, fill, 1e-9, 3);
            std::size_t got = static_cast<std::size_t>(p.column_sum(0));
            for (std::size_t i = 1; i < n; ++i)
                got = std::min(got, static_cast<std::size_t>(p.column_sum(i)));
            CHECK(got == best);
        }
    }
}

TEST_CASE("sub-epsilon variances collapse to exact zeros") {
    VarianceProfile p(2, 2, 1e-18);
    CHECK(p(0, 0) == 0.0);
    VarianceProfile q(2, 2, 1.0);
    q.set(1, 1, 1e-20);
    CHECK(q(1, 1) == 0.0);
    CHECK_THROWS_AS(VarianceProfile(2, 2, -1.0), ssv::invalid_input);
}

TEST_CASE("spec validation") {
    auto spec = dense_spec(5, 10); // N < n
    CHECK_THROWS_AS(spec.validate(), ssv::invalid_input);
    spec = dense_spec(10, 5);
    spec.params.r = 2.0;
    CHECK_THROWS_AS(spec.validate(), ssv::invalid_input);
    spec = dense_spec(10, 5);
    spec.params.a3 = spec.params.mu; // a3 < mu required on ensembles
    CHECK_THROWS_AS(spec.validate(), ssv::invalid_input);
    spec = dense_spec(12, 4);
    CHECK(spec.delta() == doctest::Approx(2.0));
}
