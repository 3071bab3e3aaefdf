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
#include "memetic/models.hpp"
#include "memetic/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

namespace memetic {

std::string format_scalar(ScalarType v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

const std::array<std::string, 1> names_logistic = {"I"};
const std::array<std::string, 2> names_sis      = {"S", "I"};
const std::array<std::string, 3> names_sir      = {"S", "I", "R"};
const std::array<std::string, 3> names_str      = {"S", "T", "R"};
const std::array<std::string, 4> names_seiz     = {"S", "T", "R", "Z"};

void require(bool ok, const std::string& msg)
{
    if (!ok) {
        throw DomainError(msg);
    }
}

} // namespace

int compartment_count(ModelKind kind)
{
    switch (kind) {
    case ModelKind::LogisticSI:
        return 1;
    case ModelKind::SIS:
        return 2;
    case ModelKind::SIR:
    case ModelKind::STR:
        return 3;
    case ModelKind::SEIZ:
        return 4;
    }
    throw StructuralError("unknown model kind");
}

std::span<const std::string> compartment_names(ModelKind kind)
{
    switch (kind) {
    case ModelKind::LogisticSI:
        return names_logistic;
    case ModelKind::SIS:
        return names_sis;
    case ModelKind::SIR:
        return names_sir;
    case ModelKind::STR:
        return names_str;
    case ModelKind::SEIZ:
        return names_seiz;
    }
    throw StructuralError("unknown model kind");
}

int compartment_index(ModelKind kind, std::string_view name)
{
    auto names = compartment_names(kind);
    for (int i = 0; i < static_cast<int>(names.size()); ++i) {
        if (names[i] == name) {
            return i;
        }
    }
    throw StructuralError("model " + to_string(kind) + " has no compartment '" + std::string(name) +
                          "'");
}

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::LogisticSI:
        return "logistic_si";
    case ModelKind::SIS:
        return "sis";
    case ModelKind::SIR:
        return "sir";
    case ModelKind::STR:
        return "str";
    case ModelKind::SEIZ:
        return "seiz";
    }
    throw StructuralError("unknown model kind");
}

ModelKind model_kind_from_string(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "logistic_si" || lower == "logisticsi" || lower == "logistic") {
        return ModelKind::LogisticSI;
    }
    if (lower == "sis") {
        return ModelKind::SIS;
    }
    if (lower == "sir") {
        return ModelKind::SIR;
    }
    if (lower == "str") {
        return ModelKind::STR;
    }
    if (lower == "seiz" || lower == "strz") {
        return ModelKind::SEIZ;
    }
    throw StructuralError("unknown model name '" + std::string(name) + "'");
}

void ModelParams::validate(ModelKind kind) const
{
    require(beta >= 0, "beta must be >= 0");
    require(nu >= 0, "nu must be >= 0");
    require(b >= 0, "b must be >= 0");
    require(rho >= 0, "rho must be >= 0");
    require(epsilon >= 0, "epsilon must be >= 0");
    require(d_diff >= 0, "d_diff must be >= 0");
    require(l_prob >= 0 && l_prob <= 1, "l_prob must be in [0,1]");
    require(p_prob >= 0 && p_prob <= 1, "p_prob must be in [0,1]");
    require(n_total > 0, "n_total must be > 0");
    if (kind != ModelKind::SEIZ) {
        require(b == 0 && rho == 0 && epsilon == 0 && l_prob == 0 && p_prob == 0,
                "b, rho, epsilon, l_prob, p_prob apply to the SEIZ model only");
    }
}

ScalarType node_to_node_time(const ModelParams& params)
{
    require(params.beta > 0, "node-to-node time needs beta > 0");
    return 1.0 / params.beta;
}

Vector rhs_raw(ModelKind kind, const ModelParams& params, const Vector& values)
{
    const ScalarType n = params.n_total;
    Vector d(values.size());
    switch (kind) {
    case ModelKind::LogisticSI: {
        // Unnormalized logistic coupling, beta in 1/(count*time).
        d[0] = params.beta * values[0] * (n - values[0]);
        return d;
    }
    case ModelKind::SIS: {
        const ScalarType infect = params.beta / n * values[0] * values[1];
        const ScalarType cure   = params.nu * values[1];
        d[0] = -infect + cure;
        d[1] = infect - cure;
        return d;
    }
    case ModelKind::SIR:
    case ModelKind::STR: {
        const ScalarType infect = params.beta / n * values[0] * values[1];
        const ScalarType remove = params.nu * values[1];
        d[0] = -infect;
        d[1] = infect - remove;
        d[2] = remove;
        return d;
    }
    case ModelKind::SEIZ: {
        // S, T (tweeted), R (delayed re-tweeters), Z (skeptics).
        const ScalarType s = values[0], t = values[1], r = values[2], z = values[3];
        const ScalarType adopter_contact = params.beta / n * s * t;
        const ScalarType skeptic_contact = params.b / n * s * z;
        const ScalarType promote         = params.rho / n * r * t + params.epsilon * r;
        d[0] = -adopter_contact - skeptic_contact;
        d[1] = params.p_prob * adopter_contact + promote;
        d[2] = (1 - params.p_prob) * adopter_contact + (1 - params.l_prob) * skeptic_contact -
               promote;
        d[3] = params.l_prob * skeptic_contact;
        return d;
    }
    }
    throw StructuralError("unknown model kind");
}

Vector rhs(ModelKind kind, const ModelParams& params, const StateVector& state,
           ScalarType negative_tol)
{
    params.validate(kind);
    if (state.values.size() != compartment_count(kind)) {
        throw StructuralError("state has " + std::to_string(state.values.size()) +
                              " compartments, model " + to_string(kind) + " needs " +
                              std::to_string(compartment_count(kind)));
    }
    for (Eigen::Index i = 0; i < state.values.size(); ++i) {
        if (state.values[i] < -negative_tol) {
            throw DomainError("compartment " + std::string(compartment_names(kind)[i]) +
                              " is negative beyond tolerance: " + format_scalar(state.values[i]));
        }
    }
    return rhs_raw(kind, params, state.values);
}

ScalarType logistic_closed_form(const ModelParams& params, ScalarType i0, ScalarType t)
{
    const ScalarType n = params.n_total;
    if (!(i0 > 0 && i0 < n)) {
        throw DomainError("logistic initial value must satisfy 0 < i0 < N");
    }
    return i0 * n / (i0 + (n - i0) * std::exp(-params.beta * n * t));
}

ScalarType critical_time(const ModelParams& params, ScalarType i0)
{
    const ScalarType n = params.n_total;
    require(n > 2, "critical time needs N > 2");
    require(params.beta > 0, "critical time needs beta > 0");
    require(i0 > 0 && i0 < n - 1, "critical time needs 0 < i0 < N - 1");
    return std::log((n - 1) * (n - i0) / i0) / (params.beta * n);
}

std::pair<ScalarType, ScalarType> sis_limits(const ModelParams& params)
{
    params.validate(ModelKind::SIS);
    const ScalarType n = params.n_total;
    if (params.beta > params.nu) {
        return {params.nu * n / params.beta, (params.beta - params.nu) * n / params.beta};
    }
    return {n, 0.0};
}

ScalarType reproduction_number(ModelKind kind, const ModelParams& params, ScalarType s0)
{
    if (params.nu == 0) {
        throw DomainError("reproduction number needs nu > 0");
    }
    switch (kind) {
    case ModelKind::SIS:
        return params.beta / params.nu;
    case ModelKind::SIR:
    case ModelKind::STR:
        require(s0 > 0 && s0 <= params.n_total, "reproduction number needs 0 < s0 <= N");
        return params.beta * s0 / (params.nu * params.n_total);
    default:
        throw StructuralError("reproduction number is defined for SIS, SIR and STR");
    }
}

ScalarType robustness_metric(const ModelParams& params)
{
    const ScalarType efflux = params.rho + params.epsilon;
    if (efflux == 0) {
        throw DomainError("robustness metric needs rho + epsilon > 0");
    }
    return ((1 - params.p_prob) * params.beta + (1 - params.l_prob) * params.b) / efflux;
}

} // namespace memetic
