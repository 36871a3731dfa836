// Serial vs OpenMP timings for the hot kernels, with an equality check:
// the parallel path must reproduce the serial result exactly.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ssv/ensemble.hpp"
#include "ssv/geometry.hpp"
#include "ssv/parallel.hpp"
#include "ssv/probe.hpp"
#include "ssv/rng.hpp"
#include "ssv/spectra.hpp"

using namespace ssv;

namespace {

struct Row {
    std::string name;
    double serial_s;
    double parallel_s;
    bool identical;
};

template <typename F>
double timed(F&& f) {
    double t0 = omp_get_wtime();
    f();
    return omp_get_wtime() - t0;
}

ensemble::EnsembleSpec spec_120x40() {
    ensemble::EnsembleSpec spec;
    spec.N = 120;
    spec.n = 40;
    spec.profile = ensemble::VarianceProfile(120, 40, 1.0);
    spec.base_family = ensemble::FamilyKind::Rademacher;
    spec.params = {3.0, 2.0, 4.0, 0.1, 0.9, 1.0};
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    const std::uint64_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 400;
    std::vector<Row> rows;

    {
        auto spec = spec_120x40();
        auto event = [](const ensemble::MatrixSample& ms) {
            return spectra::smallest_singular(ms.matrix) <= 0.05 * std::sqrt(120.0);
        };
        probe::TrialSummary a, b;
        double ts = timed([&] {
            a = probe::mc_event(spec, event, trials, 7, 0.05, "bench", Exec::Serial);
        });
        double tp = timed([&] {
            b = probe::mc_event(spec, event, trials, 7, 0.05, "bench", Exec::Parallel);
        });
        rows.push_back({"mc smallest-sv trials (120x40, " + std::to_string(trials) + ")", ts, tp,
                        a.to_json() == b.to_json()});
    }

    {
        std::vector<double> x(20);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = rng::entry_normal(99, 0, static_cast<std::uint32_t>(i));
        probe::ExactTail a{}, b{};
        double ts = timed([&] { a = probe::exact_rademacher_small_ball(x, 1.0, '>', Exec::Serial); });
        double tp = timed([&] { b = probe::exact_rademacher_small_ball(x, 1.0, '>', Exec::Parallel); });
        rows.push_back({"exact rademacher enumeration (2^20 patterns)", ts, tp,
                        a.favorable == b.favorable});
    }

    {
        // certification is the parallel part of net construction; serial via 1 thread
        int saved = max_threads();
        geometry::Net a, b;
        set_threads(1);
        double ts = timed([&] { a = geometry::build_net(3, 0.7, "sphere", 400000); });
        set_threads(saved);
        double tp = timed([&] { b = geometry::build_net(3, 0.7, "sphere", 400000); });
        rows.push_back({"net build + certification (n=3, 4e5 probes)", ts, tp,
                        a.points.size() == b.points.size() &&
                            a.certified_max_distance == b.certified_max_distance});
    }

    std::printf("%-52s %10s %10s %8s %s\n", "kernel", "serial[s]", "openmp[s]", "speedup",
                "identical");
    for (const auto& r : rows)
        std::printf("%-52s %10.3f %10.3f %7.2fx %s\n", r.name.c_str(), r.serial_s, r.parallel_s,
                    r.serial_s / std::max(r.parallel_s, 1e-9), r.identical ? "yes" : "NO");
    bool all = true;
    for (const auto& r : rows) all = all && r.identical;
    return all ? 0 : 1;
}
