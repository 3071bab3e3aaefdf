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
#ifndef MEMETIC_MODELS_HPP
#define MEMETIC_MODELS_HPP

#include "memetic/types.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace memetic {

/// Catalog of compartmental models.
///
/// LogisticSI carries a single compartment I (S is implied by N - I) and an
/// unnormalized logistic coupling beta*I*(N - I), so beta has units
/// 1/(count * time). All other models use density-dependent couplings
/// (beta/N)*X*Y and beta has units 1/time.
enum class ModelKind {
    LogisticSI,
    SIS,
    SIR,
    STR,
    SEIZ,
};

/// Number of compartments integrated for a model.
int compartment_count(ModelKind kind);

/// Fixed compartment ordering, susceptible first, removed/skeptic last.
/// Serialization and state vectors use this order everywhere.
std::span<const std::string> compartment_names(ModelKind kind);

/// Index of a named compartment; throws StructuralError if unknown.
int compartment_index(ModelKind kind, std::string_view name);

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view name);

/// Rate constants and probabilities for every model in the catalog.
/// Fields not used by a model must stay zero; validate() enforces this.
struct ModelParams {
    ScalarType beta    = 0;  // contact / tweet rate, 1/time
    ScalarType nu      = 0;  // cure / retweet rate, 1/time
    ScalarType b       = 0;  // S-Z contact rate (SEIZ only)
    ScalarType rho     = 0;  // R-T contact rate (SEIZ only)
    ScalarType epsilon = 0;  // incubation rate (SEIZ only), 1/epsilon = mean holding time
    ScalarType l_prob  = 0;  // P(S -> Z | skeptic contact), SEIZ only
    ScalarType p_prob  = 0;  // P(S -> T | adopter contact), SEIZ only
    ScalarType d_diff  = 0;  // diffusivity, length^2/time (PDE only)
    ScalarType n_total = 1;  // population N

    /// Throws DomainError on negative rates, probabilities outside [0,1],
    /// non-positive population, or SEIZ-only fields set on other models.
    void validate(ModelKind kind) const;
};

/// Mean node-to-node transmission time, approximated as 1/beta.
ScalarType node_to_node_time(const ModelParams& params);

/// Compartment populations at an instant, ordered per compartment_names().
struct StateVector {
    Vector values;
    ScalarType time = 0;
};

/// Time derivative of the state under the given model.
///
/// For SIS/SIR/STR/SEIZ the entries sum to zero by construction
/// (closed population). Entries below -negative_tol raise DomainError,
/// a wrong dimension raises StructuralError.
Vector rhs(ModelKind kind, const ModelParams& params, const StateVector& state,
           ScalarType negative_tol = 0);

/// Derivative without state validation. Integrators call this on trial
/// stage values that may transiently leave the admissible region.
Vector rhs_raw(ModelKind kind, const ModelParams& params, const Vector& values);

/// I(t) of the d=0 logistic model:
///   I(t) = i0*N / (i0 + (N - i0)*exp(-beta*N*t)).
/// Requires 0 < i0 < N; monotone in t, I(0) = i0, I(t) -> N.
ScalarType logistic_closed_form(const ModelParams& params, ScalarType i0, ScalarType t);

/// Saturation time T_c with I(T_c) = N - 1:
///   T_c = ln((N - 1)*(N - i0)/i0) / (beta*N).
/// Requires 0 < i0 < N - 1, beta > 0, N > 2.
ScalarType critical_time(const ModelParams& params, ScalarType i0);

/// Long-time limits (S_inf, I_inf) of the SIS model:
/// (nu*N/beta, (beta-nu)*N/beta) when beta > nu, else (N, 0).
std::pair<ScalarType, ScalarType> sis_limits(const ModelParams& params);

/// Basic reproduction number: beta/nu for SIS, beta*s0/(nu*N) for SIR/STR.
/// Throws DomainError when nu = 0, StructuralError for other models.
ScalarType reproduction_number(ModelKind kind, const ModelParams& params, ScalarType s0);

/// Influx/efflux ratio of the delayed compartment:
///   R_Rob = ((1-p)*beta + (1-l)*b) / (rho + epsilon).
/// Values > 1 indicate news-like spread, values well below 1 rumor-like.
ScalarType robustness_metric(const ModelParams& params);

} // namespace memetic

#endif // MEMETIC_MODELS_HPP
