#include "ssv/parallel.hpp"

#include <omp.h>

namespace ssv {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

std::uint64_t count_trials(std::uint64_t trials, Exec policy,
                           const std::function<bool(std::uint64_t)>& trial) {
    std::uint64_t hits = 0;
    if (policy == Exec::Serial) {
        for (std::uint64_t t = 0; t < trials; ++t)
            if (trial(t)) ++hits;
        return hits;
    }
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : hits)
    for (long long t = 0; t < static_cast<long long>(trials); ++t)
        if (trial(static_cast<std::uint64_t>(t))) ++hits;
    return hits;
}

void map_trials(std::uint64_t trials, Exec policy, std::vector<double>& out,
                const std::function<double(std::uint64_t)>& trial) {
    out.assign(trials, 0.0);
    if (policy == Exec::Serial) {
        for (std::uint64_t t = 0; t < trials; ++t) out[t] = trial(t);
        return;
    }
#pragma omp parallel for schedule(dynamic, 8)
    for (long long t = 0; t < static_cast<long long>(trials); ++t)
        out[t] = trial(static_cast<std::uint64_t>(t));
}

double sum_ordered(const std::vector<double>& values) {
    double s = 0;
    for (double v : values) s += v;
    return s;
}

} // namespace ssv
