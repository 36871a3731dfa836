#pragma once

#include <cstdint>
#include <functional>
#include <vector>

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; the parallel path must produce identical results (counts
// are commutative, per-slot writes are indexed, floating-point accumulation
// happens serially over stored slots).

namespace ssv {

enum class Exec { Serial, Parallel };

int max_threads();
void set_threads(int n);

/// Counts trials where `trial(t)` is true, t in [0, trials).
std::uint64_t count_trials(std::uint64_t trials, Exec policy,
                           const std::function<bool(std::uint64_t)>& trial);

/// out[t] = trial(t). Slot-indexed writes, schedule-independent.
void map_trials(std::uint64_t trials, Exec policy, std::vector<double>& out,
                const std::function<double(std::uint64_t)>& trial);

/// Sums values in index order; the one sanctioned way to reduce stored slots.
double sum_ordered(const std::vector<double>& values);

} // namespace ssv
