#include "ssv/geometry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

#include "ssv/errors.hpp"

namespace ssv::geometry {

namespace {

double norm(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

void require_unit(const std::vector<double>& x) {
    if (std::abs(norm(x) - 1.0) > 1e-12)
        throw invalid_input("expected a unit vector (|x| = 1 within 1e-12)");
}

} // namespace

double distance_to_sparse(const std::vector<double>& x, std::size_t m) {
    const std::size_t n = x.size();
    if (m > n) throw invalid_input("distance_to_sparse: m > n");
    if (m == n) return 0.0;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // m largest magnitudes, ties to the lowest index
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(x[a]) > std::abs(x[b]);
    });
    double s = 0;
    for (std::size_t t = m; t < n; ++t) s += x[idx[t]] * x[idx[t]];
    return std::sqrt(s);
}

VectorClass classify(const std::vector<double>& x, const CompressibilityParams& params) {
    require_unit(x);
    if (params.m < 1 || params.m > x.size()) throw invalid_input("classify: m out of range");
    if (!(params.rho > 0 && params.rho < 1)) throw invalid_input("classify: rho must lie in (0,1)");
    double d = distance_to_sparse(x, params.m);
    if (d == 0.0) return VectorClass::Sparse;
    // the tie band around rho resolves to Compressible
    if (d <= params.rho + kTieBand) return VectorClass::Compressible;
    return VectorClass::Incompressible;
}

bool incompressible_oracle(const std::vector<double>& x, const CompressibilityParams& params) {
    const std::size_t n = x.size();
    if (n > 20) throw capacity_error("incompressible_oracle: n > 20");
    if (params.m < 1 || params.m > n) throw invalid_input("incompressible_oracle: m out of range");
    if (!(params.rho > 0 && params.rho < 1))
        throw invalid_input("incompressible_oracle: rho must lie in (0,1)");
    require_unit(x);

    // Enumerate complements T = sigma^c with |T| <= m; incompressible iff the
    // remaining mass always exceeds rho^2.
    double total = 0;
    for (double v : x) total += v * v;
    const double rho_sq = params.rho * params.rho;
    const std::uint32_t full = (1u << n) - 1u;
    for (std::uint32_t mask = 0;; ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) <= params.m) {
            double removed = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) removed += x[i] * x[i];
            if (total - removed <= rho_sq) return false;
        }
        if (mask == full) break;
    }
    return true;
}

SpreadSet spread_set(const std::vector<double>& x, double gamma, double rho) {
    require_unit(x);
    if (!(gamma > 0 && gamma < 1) || !(rho > 0 && rho < 1))
        throw invalid_input("spread_set: gamma, rho must lie in (0,1)");
    const double n = static_cast<double>(x.size());
    SpreadSet out;
    out.lower = rho / std::sqrt(2.0 * n);
    out.upper = 1.0 / std::sqrt(gamma * n);
    out.cardinality_bound = 0.5 * rho * rho * gamma * n;
    for (std::size_t k = 0; k < x.size(); ++k) {
        double a = std::abs(x[k]);
        if (a >= out.lower && a <= out.upper) out.indices.push_back(k);
    }
    out.bound_satisfied =
        static_cast<double>(out.indices.size()) >= out.cardinality_bound;
    if (!out.bound_satisfied)
        out.note = "cardinality " + std::to_string(out.indices.size()) +
                   " below rho^2 gamma n / 2 = " + std::to_string(out.cardinality_bound) +
                   " (vector is not (floor(gamma n), rho)-incompressible)";
    return out;
}

std::vector<double> project(const std::vector<double>& x, const std::vector<std::size_t>& sigma) {
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k : sigma) {
        if (k >= x.size()) throw invalid_input("project: index out of range");
        out[k] = x[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nets

namespace {

// Halton low-discrepancy sequence, one prime base per axis.
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double halton(std::uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

// Point k of the quasi-random probe set: Box-Muller over Halton pairs gives a
// direction; ball points get a u^(1/n) radius from one extra axis.
std::vector<double> probe_point(std::size_t n, bool ball, std::uint64_t k, std::uint64_t offset) {
    const std::uint64_t idx = k + offset + 1;
    std::vector<double> z(n);
    std::size_t pairs = (n + 1) / 2;
    for (std::size_t p = 0; p < pairs; ++p) {
        double u1 = halton(idx, kPrimes[2 * p]);
        double u2 = halton(idx, kPrimes[2 * p + 1]);
        if (u1 <= 0) u1 = 0x1.0p-60;
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.283185307179586476925286766559 * u2;
        z[2 * p] = rad * std::cos(ang);
        if (2 * p + 1 < n) z[2 * p + 1] = rad * std::sin(ang);
    }
    double nz = norm(z);
    if (nz == 0) {
        z[0] = 1.0;
        nz = 1.0;
    }
    for (auto& v : z) v /= nz;
    if (ball) {
        double u = halton(idx, kPrimes[2 * pairs]);
        double r = std::pow(u, 1.0 / static_cast<double>(n));
        for (auto& v : z) v *= r;
    }
    return z;
}

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

} // namespace

Net build_net(std::size_t n, double epsilon, const std::string& domain,
              std::size_t probe_count, double deadline_seconds) {
    if (n < 1 || n > 6) throw capacity_error("build_net: certified nets limited to n <= 6");
    if (!(epsilon > 0 && epsilon <= 2)) throw invalid_input("build_net: epsilon must lie in (0, 2]");
    if (domain != "sphere" && domain != "ball") throw invalid_input("build_net: domain must be sphere or ball");
    const bool ball = (domain == "ball");

    const auto start = std::chrono::steady_clock::now();
    auto past_deadline = [&] {
        if (deadline_seconds <= 0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
               deadline_seconds;
    };

    Net net;
    net.dim = n;
    net.epsilon = epsilon;
    net.domain = domain;
    net.probe_count = probe_count;
    net.volumetric_bound = std::pow(1.0 + 2.0 / epsilon, static_cast<double>(n));

    const std::size_t kMaxNetSize = 100000;
    std::size_t candidates = std::max<std::size_t>(20000, std::size_t{1} << (2 * n + 8));
    double inner = 0.8 * epsilon;

    for (int attempt = 0; attempt < 3; ++attempt) {
        // Greedy farthest point over a candidate pool (stream offset 0).
        std::vector<std::vector<double>> pool(candidates);
        for (std::size_t k = 0; k < candidates; ++k) pool[k] = probe_point(n, ball, k, 0);

        std::vector<std::vector<double>> pts;
        if (ball) {
            pts.push_back(std::vector<double>(n, 0.0));
        } else {
            std::vector<double> e1(n, 0.0);
            e1[0] = 1.0;
            pts.push_back(e1);
        }
        std::vector<double> dsq(candidates);
        for (std::size_t k = 0; k < candidates; ++k) dsq[k] = dist_sq(pool[k], pts[0]);

        const double inner_sq = inner * inner;
        while (pts.size() < kMaxNetSize) {
            if ((pts.size() & 0x3F) == 0 && past_deadline())
                throw numerical_failure("build_net: deadline exceeded during greedy selection",
                                        deadline_seconds);
            std::size_t far = 0;
            for (std::size_t k = 1; k < candidates; ++k)
                if (dsq[k] > dsq[far]) far = k;
            if (dsq[far] <= inner_sq) break;
            pts.push_back(pool[far]);
            const auto& p = pts.back();
            for (std::size_t k = 0; k < candidates; ++k)
                dsq[k] = std::min(dsq[k], dist_sq(pool[k], p));
        }

        // Certify against a disjoint, finer probe stream.
        const std::uint64_t probe_offset = 1u << 24;
        double worst_sq = 0.0;
        const double eps_sq = epsilon * epsilon;
#pragma omp parallel for schedule(static) reduction(max : worst_sq)
        for (long long k = 0; k < static_cast<long long>(probe_count); ++k) {
            std::vector<double> q = probe_point(n, ball, static_cast<std::uint64_t>(k), probe_offset);
            double best = dist_sq(q, pts[0]);
            for (std::size_t j = 1; j < pts.size(); ++j)
                best = std::min(best, dist_sq(q, pts[j]));
            worst_sq = std::max(worst_sq, best);
        }
        if (worst_sq <= eps_sq) {
            net.points = std::move(pts);
            net.certified_max_distance = std::sqrt(worst_sq);
            return net;
        }
        if (past_deadline())
            throw numerical_failure("build_net: deadline exceeded before certification succeeded",
                                    deadline_seconds);
        candidates *= 4;
        inner *= 0.8;
    }
    throw numerical_failure("build_net: certification failed after densification retries", 0.0);
}

void write_net_csv(const Net& net, std::ostream& out) {
    out << "# ssv net v1\n";
    out << "# n=" << net.dim << " epsilon=" << net.epsilon << " domain=" << net.domain
        << " probe_count=" << net.probe_count
        << " certified_max_distance=" << net.certified_max_distance
        << " volumetric_bound=" << net.volumetric_bound << "\n";
    char buf[40];
    for (const auto& p : net.points) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", p[i]);
            out << buf << (i + 1 < p.size() ? "," : "");
        }
        out << '\n';
    }
}

} // namespace ssv::geometry
