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
#include "memetic/ctmc.hpp"
#include "memetic/error.hpp"
#include "memetic/ode.hpp"

#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>

namespace memetic {

namespace {

constexpr std::uint64_t golden64 = 0x9E3779B97F4A7C15ULL;

std::uint64_t splitmix64(std::uint64_t state)
{
    std::uint64_t z = state + golden64;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Uniform in [0,1) from the top 53 bits; avoids distribution objects so
// identical seeds give identical paths on every platform.
ScalarType uniform01(std::mt19937_64& rng)
{
    return static_cast<ScalarType>(rng() >> 11) * 0x1.0p-53;
}

struct Transition {
    int from;
    int to;
};

// Transition catalog: rate 0 is infection/tweet, rate 1 removal/retweet.
void transition_table(ModelKind kind, std::vector<Transition>& moves)
{
    switch (kind) {
    case ModelKind::SIS:
        moves = {{0, 1}, {1, 0}};
        return;
    case ModelKind::SIR:
    case ModelKind::STR:
        moves = {{0, 1}, {1, 2}};
        return;
    default:
        throw StructuralError("stochastic simulation covers SIS, SIR and STR only");
    }
}

void transition_rates(ModelKind kind, const ModelParams& params, const std::vector<long>& counts,
                      std::vector<ScalarType>& rates)
{
    const auto n = static_cast<ScalarType>(params.n_total);
    const auto s = static_cast<ScalarType>(counts[0]);
    const auto i = static_cast<ScalarType>(counts[1]);
    rates[0] = params.beta / n * s * i;
    rates[1] = params.nu * i;
    (void)kind;
}

} // namespace

std::uint64_t derive_replica_seed(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return splitmix64(master_seed + (stream_index + 1) * golden64);
}

void EnsembleConfig::validate() const
{
    if (n_total < 2) {
        throw ConfigError("n_total must be >= 2");
    }
    if (n_replicas < 1) {
        throw ConfigError("n_replicas must be >= 1");
    }
    if (!(t_span.second > t_span.first)) {
        throw ConfigError("t_span must be increasing");
    }
    if (sample_times.empty()) {
        throw ConfigError("sample_times must not be empty");
    }
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (sample_times[i] < t_span.first || sample_times[i] > t_span.second) {
            throw ConfigError("sample_times must lie within t_span");
        }
        if (i > 0 && !(sample_times[i] > sample_times[i - 1])) {
            throw ConfigError("sample_times must be strictly increasing");
        }
    }
}

CtmcPath simulate_ctmc(ModelKind kind, const ModelParams& params,
                       const std::vector<long>& initial_counts, const EnsembleConfig& config)
{
    config.validate();
    ModelParams checked = params;
    checked.n_total     = static_cast<ScalarType>(config.n_total);
    checked.validate(kind);

    const int n_comp = compartment_count(kind);
    if (static_cast<int>(initial_counts.size()) != n_comp) {
        throw StructuralError("initial counts do not match model " + to_string(kind));
    }
    long total = 0;
    for (long c : initial_counts) {
        if (c < 0) {
            throw DomainError("compartment counts must be >= 0");
        }
        total += c;
    }
    if (total != config.n_total) {
        throw DomainError("initial counts must sum to n_total");
    }

    std::vector<Transition> moves;
    transition_table(kind, moves);
    std::vector<ScalarType> rates(moves.size());

    std::mt19937_64 rng(config.seed);
    std::vector<long> counts = initial_counts;

    CtmcPath path;
    path.sample_times = config.sample_times;
    path.counts.resize(static_cast<Eigen::Index>(config.sample_times.size()), n_comp);

    std::size_t next_sample = 0;
    auto flush_samples = [&](ScalarType until) {
        while (next_sample < config.sample_times.size() &&
               config.sample_times[next_sample] < until) {
            for (int c = 0; c < n_comp; ++c) {
                path.counts(static_cast<Eigen::Index>(next_sample), c) =
                    static_cast<ScalarType>(counts[c]);
            }
            ++next_sample;
        }
    };

    ScalarType t = config.t_span.first;
    const ScalarType t_end = config.t_span.second;
    while (true) {
        transition_rates(kind, checked, counts, rates);
        const ScalarType total_rate = std::accumulate(rates.begin(), rates.end(), ScalarType(0));
        if (total_rate <= 0) {
            break;  // absorbing state
        }
        const ScalarType wait = -std::log1p(-uniform01(rng)) / total_rate;
        const ScalarType t_next = t + wait;
        if (t_next > t_end) {
            break;
        }
        flush_samples(t_next);

        ScalarType pick = uniform01(rng) * total_rate;
        std::size_t chosen = 0;
        for (; chosen + 1 < rates.size(); ++chosen) {
            if (pick < rates[chosen]) {
                break;
            }
            pick -= rates[chosen];
        }
        --counts[moves[chosen].from];
        ++counts[moves[chosen].to];
        ++path.n_events;
        if (config.record_events) {
            path.events.emplace_back(t_next, static_cast<int>(chosen));
        }
        t = t_next;
    }
    flush_samples(std::numeric_limits<ScalarType>::infinity());
    return path;
}

std::vector<EnsembleResult> fluid_limit_check(ModelKind kind, const ModelParams& params,
                                              const Vector& initial_fractions,
                                              const std::vector<long>& n_list,
                                              const EnsembleConfig& config)
{
    if (initial_fractions.size() != compartment_count(kind)) {
        throw StructuralError("initial fractions do not match model " + to_string(kind));
    }
    if (std::abs(initial_fractions.sum() - 1.0) > 1e-9 || initial_fractions.minCoeff() < 0) {
        throw DomainError("initial fractions must be >= 0 and sum to 1");
    }
    if (n_list.empty()) {
        throw ConfigError("n_list must not be empty");
    }

    // Mean-field reference in fractions: same rates with N normalized to 1.
    ModelParams norm = params;
    norm.n_total     = 1.0;
    IntegratorConfig ode_config;
    ode_config.rel_tol = 1e-10;
    ode_config.abs_tol = 1e-13;
    ode_config.t_span  = config.t_span;
    ode_config.sample_times = config.sample_times;
    const Trajectory reference = integrate(kind, norm, {initial_fractions, config.t_span.first},
                                           ode_config);

    std::vector<EnsembleResult> results;
    results.reserve(n_list.size());
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        const long n = n_list[k];
        EnsembleConfig replica_config = config;
        replica_config.n_total        = n;

        // Integer initial counts; the first compartment absorbs rounding.
        std::vector<long> counts(initial_fractions.size());
        long assigned = 0;
        for (Eigen::Index i = 1; i < initial_fractions.size(); ++i) {
            counts[static_cast<std::size_t>(i)] =
                std::lround(initial_fractions[i] * static_cast<ScalarType>(n));
            assigned += counts[static_cast<std::size_t>(i)];
        }
        counts[0] = n - assigned;
        if (counts[0] < 0) {
            throw DomainError("initial fractions round to more than n_total");
        }

        EnsembleResult result;
        result.n_total      = n;
        result.sample_times = config.sample_times;
        result.mean_fractions =
            Matrix::Zero(static_cast<Eigen::Index>(config.sample_times.size()),
                         compartment_count(kind));
        for (int r = 0; r < config.n_replicas; ++r) {
            const std::uint64_t stream =
                static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(config.n_replicas) +
                static_cast<std::uint64_t>(r);
            replica_config.seed = derive_replica_seed(config.seed, stream);
            result.replica_seeds.push_back(replica_config.seed);
            const CtmcPath path = simulate_ctmc(kind, params, counts, replica_config);
            result.mean_fractions += path.counts;
        }
        result.mean_fractions /=
            static_cast<ScalarType>(config.n_replicas) * static_cast<ScalarType>(n);
        result.sup_norm_error =
            (result.mean_fractions - reference.states).cwiseAbs().maxCoeff();
        results.push_back(std::move(result));
    }
    return results;
}

std::string ensemble_to_json(ModelKind kind, const ModelParams& params,
                             const std::vector<EnsembleResult>& results)
{
    nlohmann::ordered_json j;
    j["model"]  = to_string(kind);
    j["params"] = {{"beta", params.beta},       {"nu", params.nu},
                   {"b", params.b},             {"rho", params.rho},
                   {"epsilon", params.epsilon}, {"l_prob", params.l_prob},
                   {"p_prob", params.p_prob},   {"d_diff", params.d_diff},
                   {"n_total", params.n_total}};
    auto n_list = nlohmann::ordered_json::array();
    auto errors = nlohmann::ordered_json::array();
    auto seeds  = nlohmann::ordered_json::array();
    for (const EnsembleResult& r : results) {
        n_list.push_back(r.n_total);
        errors.push_back(r.sup_norm_error);
        seeds.push_back(r.replica_seeds);
    }
    j["N_list"]        = n_list;
    j["errors"]        = errors;
    j["seeds"]         = seeds;
    j["rng_algorithm"] = rng_algorithm_name;
    return j.dump(2) + "\n";
}

} // namespace memetic
