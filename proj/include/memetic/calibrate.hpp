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
#ifndef MEMETIC_CALIBRATE_HPP
#define MEMETIC_CALIBRATE_HPP

#include "memetic/models.hpp"
#include "memetic/ode.hpp"
#include "memetic/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace memetic {

/// Observed per-compartment time series (typically the tweeting
/// compartment only). `values` has one column per observed compartment.
struct ObservedSeries {
    std::vector<ScalarType> times;
    Matrix values;
    std::vector<std::string> compartments;

    void validate() const;
};

struct FitOptions {
    std::vector<std::string> free_names;  // parameter names and/or compartments
    std::map<std::string, std::pair<ScalarType, ScalarType>> bounds;  // overrides per name
    std::map<std::string, ScalarType> init_guess;                     // overrides per name
    long budget = 4000;          // objective evaluation cap
    bool relative_loss = false;  // relative residuals, for count-scale data
    bool power_law_seed = false; // seed beta from a log-log prefit of the early growth
    ScalarType rel_tol = 1e-8;   // integrator tolerances per trial point
    ScalarType abs_tol = 1e-11;
};

struct FitResult {
    ModelParams params;
    StateVector initial_state;
    ScalarType loss = 0;
    long n_evals    = 0;
    bool converged  = false;
    std::vector<ScalarType> best_loss_history;  // nonincreasing, one entry per eval
    std::optional<ScalarType> r;      // reproduction number at the fitted point
    std::optional<ScalarType> r_rob;  // robustness metric, SEIZ fits only
};

/// Least-squares fit of the free parameters by a bounded Nelder-Mead
/// simplex. Free names may include initial compartments (all but the
/// first; the susceptible pool closes the population to N). Trial points
/// where the integrator fails are penalized, not fatal. Deterministic
/// for fixed inputs.
FitResult fit(ModelKind kind, const ObservedSeries& observed, const ModelParams& base_params,
              const StateVector& base_initial, const FitOptions& options);

/// log-log linear least squares v ~ amplitude * t^exponent over the
/// positive samples; used to seed early-growth fits.
struct PowerLawFit {
    ScalarType amplitude = 0;
    ScalarType exponent  = 0;
};

PowerLawFit power_law_prefit(const std::vector<ScalarType>& times,
                             const std::vector<ScalarType>& values);

/// One row of the reported parameter table. Columns that do not apply
/// (no retweet rate, non-SEIZ model) render as "-".
struct MetricPanel {
    std::string label;
    ScalarType beta = 0;
    std::optional<ScalarType> r;
    std::optional<ScalarType> r_rob;
};

/// Assembles beta, the reproduction number at s0, and (for SEIZ) the
/// robustness metric from a converged fit. Requesting the robustness
/// column for another model is a structural error.
MetricPanel metric_panel(ModelKind kind, const FitResult& fit_result, ScalarType s0,
                         std::optional<bool> with_robustness = std::nullopt);

std::string render_panel_csv(const std::vector<MetricPanel>& rows);
std::string render_panel_text(const std::vector<MetricPanel>& rows);

/// Window-averaged dR/dt and d2R/dt2 by finite differencing (central
/// stencils inside, one-sided at the ends; the second derivative needs
/// three points). Gaps must match `spacing` within 1% unless nonuniform
/// mode is requested; stencils always use the actual times.
struct RDerivatives {
    ScalarType first  = 0;
    ScalarType second = 0;
    bool second_defined = false;
};

RDerivatives r_derivatives(const std::vector<std::pair<ScalarType, ScalarType>>& window_r,
                           ScalarType spacing, bool nonuniform = false);

/// JSON serialization of a fit {model, params, initial, loss, n_evals,
/// converged, metrics}.
std::string fit_result_to_json(ModelKind kind, const FitResult& fit_result);

} // namespace memetic

#endif // MEMETIC_CALIBRATE_HPP
