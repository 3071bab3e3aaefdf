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
#ifndef MEMETIC_ODE_HPP
#define MEMETIC_ODE_HPP

#include "memetic/models.hpp"
#include "memetic/types.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memetic {

struct IntegratorConfig {
    ScalarType rel_tol = 1e-9;
    ScalarType abs_tol = 1e-12;
    ScalarType h_init  = 0;  // 0 = choose automatically
    ScalarType h_max   = 0;  // 0 = unlimited
    std::pair<ScalarType, ScalarType> t_span{0, 1};
    std::vector<ScalarType> sample_times;  // empty = record accepted steps

    void validate() const;
};

/// Local maximum of one compartment found while integrating.
struct PeakEvent {
    std::string compartment;
    ScalarType time  = 0;
    ScalarType value = 0;
};

/// Sampled solution of one model run. Rows of `states` are samples in
/// the fixed compartment order of the model.
struct Trajectory {
    ModelKind kind = ModelKind::SIR;
    ModelParams params;
    std::vector<ScalarType> times;
    Matrix states;
    std::vector<PeakEvent> peak_events;

    StateVector sample(Eigen::Index i) const { return {states.row(i).transpose(), times[i]}; }
};

/// Integrates the model with an embedded Dormand-Prince 5(4) pair.
///
/// Steps are accepted when the error estimate stays below
/// abs_tol + rel_tol*|state|; sample times are filled by the pair's
/// fourth-order Hermite-type interpolant over each accepted step.
/// Compartments dipping below
/// -10*abs_tol abort with IntegratorFault, smaller dips are clipped to 0.
/// For closed-population models every sample is checked for
/// |sum - N| <= 10*abs_tol.
Trajectory integrate(ModelKind kind, const ModelParams& params, const StateVector& initial,
                     const IntegratorConfig& config);

struct PeakResult {
    ScalarType time  = 0;
    ScalarType value = 0;
    bool boundary    = false;  // maximum sits on the first or last sample
};

/// Global maximum of one compartment over the samples, refined by a
/// quadratic through the three bracketing samples when interior.
PeakResult find_peak(const Trajectory& traj, std::string_view compartment);

/// CSV serialization: header `t,<compartments...>`, one row per sample,
/// 15 significant digits.
std::string to_csv(const Trajectory& traj);

} // namespace memetic

#endif // MEMETIC_ODE_HPP
