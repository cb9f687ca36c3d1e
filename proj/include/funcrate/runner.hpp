#pragma once

#include <cstdint>
#include <functional>

#include "funcrate/config.hpp"
#include "funcrate/report.hpp"
#include "funcrate/rng.hpp"

namespace funcrate {

// Worker count: FUNCRATE_THREADS if set (positive), else hardware
// concurrency. Results never depend on it.
int worker_threads();

// Runs fn(replicate_index, rng) for replicates 0..M-1, possibly in parallel.
// fn must only write state owned by its replicate index.
void for_each_replicate(long M, std::uint64_t seed,
                        const std::function<void(long, CounterRng&)>& fn);

// Full pipeline: kernel bound fits, coupled Monte Carlo ladder, estimates,
// rate fits, bound overlays and calibration. Deterministic given
// (config, seed) apart from the timing fields.
Report run_experiment(const ExperimentConfig& cfg);

}  // namespace funcrate
