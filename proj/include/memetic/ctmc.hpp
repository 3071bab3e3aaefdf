/*
* Copyright (C) 2026 Memetic Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef MEMETIC_CTMC_HPP
#define MEMETIC_CTMC_HPP

#include "memetic/models.hpp"
#include "memetic/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace memetic {

/// Identifier of the jump-process sampler; recorded in output metadata.
/// Replica r of a run with master seed s uses the engine seed
/// splitmix64(s + (r+1)*0x9E3779B97F4A7C15).
inline constexpr const char* rng_algorithm_name = "mt19937_64+splitmix64";

std::uint64_t derive_replica_seed(std::uint64_t master_seed, std::uint64_t stream_index);

struct EnsembleConfig {
    long n_total   = 100;  // integer population
    int n_replicas = 1;
    std::uint64_t seed = 0;
    std::pair<ScalarType, ScalarType> t_span{0, 1};
    std::vector<ScalarType> sample_times;
    bool record_events = false;

    void validate() const;
};

/// One exact-simulation path sampled on a fixed time grid. Counts are
/// integers stored as reals; rows follow sample_times.
struct CtmcPath {
    std::vector<ScalarType> sample_times;
    Matrix counts;
    long n_events = 0;
    std::vector<std::pair<ScalarType, int>> events;  // (time, transition) if recorded
};

/// Exact event-driven simulation of the SIS/SIR/STR jump process:
/// infection/tweet at rate (beta/N)*S*I and removal/retweet at nu*I.
/// Deterministic given config.seed; absorbing states end the event loop.
CtmcPath simulate_ctmc(ModelKind kind, const ModelParams& params,
                       const std::vector<long>& initial_counts, const EnsembleConfig& config);

/// Ensemble average at one population size, compared against the
/// mean-field ODE solution in fractions.
struct EnsembleResult {
    long n_total = 0;
    std::vector<ScalarType> sample_times;
    Matrix mean_fractions;
    ScalarType sup_norm_error = 0;
    std::vector<std::uint64_t> replica_seeds;
};

/// Runs n_replicas paths per population size and measures the sup-norm
/// distance between the averaged compartment fractions and the ODE
/// solution started from the same fractions.
std::vector<EnsembleResult> fluid_limit_check(ModelKind kind, const ModelParams& params,
                                              const Vector& initial_fractions,
                                              const std::vector<long>& n_list,
                                              const EnsembleConfig& config);

/// JSON report {model, params, N_list, errors, seeds, rng_algorithm}.
std::string ensemble_to_json(ModelKind kind, const ModelParams& params,
                             const std::vector<EnsembleResult>& results);

} // namespace memetic

#endif // MEMETIC_CTMC_HPP
