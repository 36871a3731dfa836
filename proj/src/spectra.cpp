#include "ssv/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssv/errors.hpp"
#include "ssv/rng.hpp"

namespace ssv::spectra {

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr int kMaxSweeps = 30;

struct ColMajor {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a; // column-major
    int scale_exp = 0;     // entries were divided by 2^scale_exp

    explicit ColMajor(const Matrix& m) : rows(m.rows()), cols(m.cols()), a(rows * cols) {
        for (std::size_t c = 0; c < cols; ++c)
            for (std::size_t r = 0; r < rows; ++r) a[c * rows + r] = m(r, c);
        // Extreme magnitudes would overflow the squared column norms; dividing
        // by a power of two is exact and keeps ordinary inputs untouched.
        double amax = 0;
        for (double v : a) amax = std::max(amax, std::abs(v));
        if (amax > 0) {
            int k = std::ilogb(amax);
            if (k > 200 || k < -200) {
                scale_exp = k;
                for (double& v : a) v = std::ldexp(v, -k);
            }
        }
    }
    double* col(std::size_t c) { return a.data() + c * rows; }
    double unscale(double v) const { return std::ldexp(v, scale_exp); }
};

double col_dot(const double* x, const double* y, std::size_t n) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

// One-sided Jacobi: rotate column pairs of W until all pairs are orthogonal
// relative to kJacobiTol; optionally accumulate the rotations into V.
SpectrumResult jacobi(ColMajor& w, ColMajor* v) {
    const std::size_t n = w.cols;
    SpectrumResult res;
    double off = 0.0;
    bool converged = (n == 1);
    int sweep = 0;
    if (n == 1) res.residual = 0.0;
    while (!converged && sweep < kMaxSweeps) {
        ++sweep;
        std::size_t rotations = 0;
        off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double* wp = w.col(p);
                double* wq = w.col(q);
                double alpha = col_dot(wp, wp, w.rows);
                double beta = col_dot(wq, wq, w.rows);
                double gam = col_dot(wp, wq, w.rows);
                double denom = std::sqrt(alpha * beta);
                if (denom == 0.0) continue; // a zero column is orthogonal to everything
                off = std::max(off, std::abs(gam) / denom);
                if (std::abs(gam) <= kJacobiTol * denom) continue;
                ++rotations;
                double zeta = (beta - alpha) / (2.0 * gam);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < w.rows; ++i) {
                    double x = wp[i], y = wq[i];
                    wp[i] = c * x - s * y;
                    wq[i] = s * x + c * y;
                }
                if (v) {
                    double* vp = v->col(p);
                    double* vq = v->col(q);
                    for (std::size_t i = 0; i < v->rows; ++i) {
                        double x = vp[i], y = vq[i];
                        vp[i] = c * x - s * y;
                        vq[i] = s * x + c * y;
                    }
                }
            }
        }
        if (rotations == 0) converged = true; // `off` from this pass is current
    }
    res.sweeps = sweep;
    res.residual = off;
    if (!converged)
        throw numerical_failure("one-sided Jacobi did not converge in " +
                                    std::to_string(kMaxSweeps) + " sweeps",
                                off);
    res.values.resize(n);
    for (std::size_t c = 0; c < n; ++c)
        res.values[c] = w.unscale(std::sqrt(col_dot(w.col(c), w.col(c), w.rows)));
    return res;
}

void check_input(const Matrix& m) {
    if (m.cols() < 1 || m.rows() < m.cols())
        throw invalid_input("singular_values: need N >= n >= 1");
    for (double v : m.data())
        if (!std::isfinite(v)) throw invalid_input("singular_values: nonfinite entry");
}

} // namespace

SpectrumResult singular_values(const Matrix& m) {
    check_input(m);
    ColMajor w(m);
    SpectrumResult res = jacobi(w, nullptr);
    std::sort(res.values.begin(), res.values.end(), std::greater<>());
    return res;
}

double smallest_singular(const Matrix& m) { return singular_values(m).smallest(); }
double operator_norm(const Matrix& m) { return singular_values(m).largest(); }

SmallestWitness smallest_singular_witness(const Matrix& m) {
    check_input(m);
    ColMajor w(m);
    Matrix ident = Matrix::identity(m.cols());
    ColMajor v(ident);
    SpectrumResult res = jacobi(w, &v);
    std::size_t best = 0;
    for (std::size_t c = 1; c < m.cols(); ++c)
        if (res.values[c] < res.values[best]) best = c;
    std::vector<double> x(v.col(best), v.col(best) + v.rows);
    double nx = norm2(x);
    if (nx > 0)
        for (auto& e : x) e /= nx;
    return {res.values[best], std::move(x)};
}

double operator_norm_power(const Matrix& m, int max_iters, double tol) {
    check_input(m);
    const std::size_t n = m.cols();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto blk = rng::philox4x32(0x5eedULL, 0, 0, static_cast<std::uint32_t>(i), 7);
        x[i] = rng::u01(rng::to_u64(blk.w[0], blk.w[1])) - 0.5;
    }
    double nx = norm2(x);
    if (nx == 0) x[0] = 1.0, nx = 1.0;
    for (auto& e : x) e /= nx;

    double lambda = 0.0;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> y = m.apply_transpose(m.apply(x));
        double ny = norm2(y);
        if (ny == 0.0) return 0.0;
        double next = dot(x, y); // Rayleigh quotient for M^t M
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
        if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(std::max(0.0, lambda));
}

double column_distance(const Matrix& m, std::size_t k) {
    if (m.cols() < 2) throw invalid_input("column_distance: need at least 2 columns");
    if (k >= m.cols()) throw invalid_input("column_distance: column index out of range");
    const std::size_t rows = m.rows();
    const std::size_t nc = m.cols() - 1;

    // A = all columns but k (column-major), b = column k.
    std::vector<double> a(rows * nc);
    std::vector<double> b(rows);
    {
        std::size_t c = 0;
        for (std::size_t i = 0; i < m.cols(); ++i) {
            if (i == k) continue;
            for (std::size_t r = 0; r < rows; ++r) a[c * rows + r] = m(r, i);
            ++c;
        }
        for (std::size_t r = 0; r < rows; ++r) b[r] = m(r, k);
    }

    // Exact power-of-two prescale, as in the SVD path.
    int scale_exp = 0;
    {
        double amax = 0;
        for (double v : a) amax = std::max(amax, std::abs(v));
        for (double v : b) amax = std::max(amax, std::abs(v));
        if (amax > 0) {
            int ke = std::ilogb(amax);
            if (ke > 200 || ke < -200) {
                scale_exp = ke;
                for (double& v : a) v = std::ldexp(v, -ke);
                for (double& v : b) v = std::ldexp(v, -ke);
            }
        }
    }

    double fro = 0.0;
    for (double v : a) fro += v * v;
    fro = std::sqrt(fro);
    const double rank_tol = 1e-10 * fro;

    // Householder QR with column pivoting, reflectors applied to b as we go.
    std::vector<std::size_t> piv(nc);
    std::iota(piv.begin(), piv.end(), std::size_t{0});
    std::vector<double> colsq(nc);
    for (std::size_t c = 0; c < nc; ++c)
        colsq[c] = col_dot(a.data() + c * rows, a.data() + c * rows, rows);

    const std::size_t steps = std::min(rows, nc);
    std::size_t rank = 0;
    for (std::size_t s = 0; s < steps; ++s) {
        // pivot: remaining column with the largest residual mass
        std::size_t best = s;
        for (std::size_t c = s + 1; c < nc; ++c)
            if (colsq[c] > colsq[best]) best = c;
        if (best != s) {
            for (std::size_t r = 0; r < rows; ++r)
                std::swap(a[s * rows + r], a[best * rows + r]);
            std::swap(colsq[s], colsq[best]);
            std::swap(piv[s], piv[best]);
        }
        double* cs = a.data() + s * rows;
        double norm_tail = std::sqrt(col_dot(cs + s, cs + s, rows - s));
        if (norm_tail <= rank_tol) break;
        ++rank;

        // Householder vector v for rows s..end of column s.
        double alpha = cs[s] >= 0 ? -norm_tail : norm_tail;
        std::vector<double> v(rows - s);
        v[0] = cs[s] - alpha;
        for (std::size_t r = 1; r < rows - s; ++r) v[r] = cs[s + r];
        double vnorm_sq = col_dot(v.data(), v.data(), rows - s);
        cs[s] = alpha;
        for (std::size_t r = s + 1; r < rows; ++r) cs[r] = 0.0;

        if (vnorm_sq > 0) {
            auto reflect = [&](double* col) {
                double proj = 0;
                for (std::size_t r = 0; r < rows - s; ++r) proj += v[r] * col[s + r];
                proj = 2.0 * proj / vnorm_sq;
                for (std::size_t r = 0; r < rows - s; ++r) col[s + r] -= proj * v[r];
            };
            for (std::size_t c = s + 1; c < nc; ++c) reflect(a.data() + c * rows);
            reflect(b.data());
        }
        // downdate running column masses
        for (std::size_t c = s + 1; c < nc; ++c) {
            double* cc = a.data() + c * rows;
            colsq[c] = col_dot(cc + s + 1, cc + s + 1, rows - s - 1);
        }
    }

    // Residual = mass of b below the numerical rank.
    double res = std::sqrt(std::max(0.0, col_dot(b.data() + rank, b.data() + rank, rows - rank)));
    return std::ldexp(res, scale_exp);
}

} // namespace ssv::spectra
