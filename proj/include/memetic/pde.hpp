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
#ifndef MEMETIC_PDE_HPP
#define MEMETIC_PDE_HPP

#include "memetic/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace memetic {

/// 1-D reaction-diffusion setup: dI/dt = d_diff * I_xx + beta * I * (N - I)
/// on [domain_lo, domain_hi] with no-flux (Neumann) boundaries.
/// The reaction is the unnormalized logistic term, so beta carries units
/// 1/(count * time) when n_total != 1.
struct PdeConfig {
    ScalarType domain_lo = 0;
    ScalarType domain_hi = 1;
    int n_cells          = 64;
    ScalarType d_diff    = 0;
    ScalarType beta      = 0;
    ScalarType n_total   = 1;
    std::pair<ScalarType, ScalarType> t_span{0, 1};
    ScalarType cfl_safety = 0.4;

    void validate() const;
    ScalarType dx() const { return (domain_hi - domain_lo) / n_cells; }
    Vector cell_centers() const;

    /// Largest step obeying both explicit stability bounds,
    /// cfl_safety*dx^2/(2d) and cfl_safety/(beta*N).
    ScalarType stable_dt() const;
};

/// Infected density at cell centers at one instant.
struct Field {
    Vector values;
    ScalarType time = 0;
};

struct InitialProfile {
    enum class Shape { Uniform, GaussianBump, Step };
    Shape shape          = Shape::Uniform;
    ScalarType value     = 0;  // uniform level
    ScalarType center    = 0;  // bump center
    ScalarType width     = 1;  // bump standard deviation
    ScalarType amplitude = 0;  // bump / step height
    ScalarType edge      = 0;  // step: amplitude for x <= edge, 0 beyond

    static InitialProfile uniform(ScalarType value);
    static InitialProfile gaussian_bump(ScalarType center, ScalarType width, ScalarType amplitude);
    static InitialProfile step(ScalarType edge, ScalarType amplitude);
};

Field make_initial(const PdeConfig& config, const InitialProfile& profile);

/// One forward-Euler step with second-order central differences and
/// mirrored ghost cells. dt must obey the stability bounds.
Field step_field(const PdeConfig& config, const Field& field, ScalarType dt);

/// Same with dt = config.stable_dt().
Field step_field(const PdeConfig& config, const Field& field);

/// Time-steps from the initial field, landing exactly on each snapshot
/// time. snapshot_times must be increasing and within t_span.
std::vector<Field> run_pde(const PdeConfig& config, const Field& initial,
                           const std::vector<ScalarType>& snapshot_times);

struct FrontSpeedResult {
    ScalarType speed = 0;           // least-squares slope of front position vs time
    ScalarType ref_speed_sqrt_2dbn = 0;  // sqrt(2*d*beta*N)
    ScalarType ref_speed_kpp = 0;        // 2*sqrt(d*beta*N), classical minimal speed
    int n_points = 0;               // snapshots entering the fit
};

/// Tracks where the field crosses level*N in each snapshot of the central
/// 50% of the run and fits position vs time. Throws MeasurementError when
/// the front touches the boundary inside the window or too few snapshots
/// show a crossing.
FrontSpeedResult front_speed(const PdeConfig& config, const std::vector<Field>& snapshots,
                             ScalarType level = 0.5);

/// CSV serialization: first row `x,<cell centers...>`, then one row
/// `t,<values...>` per snapshot.
std::string snapshots_to_csv(const PdeConfig& config, const std::vector<Field>& snapshots);

} // namespace memetic

#endif // MEMETIC_PDE_HPP
