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
#include "memetic/ode.hpp"
#include "memetic/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace memetic {

namespace {

// Dormand-Prince 5(4) tableau. The last row of A doubles as the 5th order
// weights (FSAL), E holds the difference to the embedded 4th order solution.
constexpr ScalarType C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr ScalarType A21 = 1.0 / 5;
constexpr ScalarType A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr ScalarType A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr ScalarType A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                     A54 = -212.0 / 729;
constexpr ScalarType A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                     A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr ScalarType B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                     B6 = 11.0 / 84;
constexpr ScalarType E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                     E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;
// Quartic continuous-extension weights of the pair.
constexpr ScalarType D1 = -12715105075.0 / 11282082432.0, D3 = 87487479700.0 / 32700410799.0,
                     D4 = -10690763975.0 / 1880347072.0, D5 = 701980252875.0 / 199316789632.0,
                     D6 = -1453857185.0 / 822651844.0, D7 = 69997945.0 / 29380423.0;

constexpr std::size_t max_steps = 50'000'000;

bool conserved(ModelKind kind)
{
    return kind != ModelKind::LogisticSI;
}

// Fourth-order interpolant over one accepted step: Hermite conditions at
// both endpoints plus the stage combination D. Nested form is exact at the
// endpoints and exactly constant when the step did not move.
struct DenseInterpolant {
    Vector c1, c2, c3, c4, c5;

    Vector operator()(ScalarType theta) const
    {
        const ScalarType omt = 1 - theta;
        return c1 + theta * (c2 + omt * (c3 + theta * (c4 + omt * c5)));
    }
};

ScalarType error_norm(const Vector& err, const Vector& y0, const Vector& y1, ScalarType abs_tol,
                      ScalarType rel_tol)
{
    ScalarType sum = 0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const ScalarType scale =
            abs_tol + rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const ScalarType q = err[i] / scale;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<ScalarType>(err.size()));
}

// Hairer-style automatic initial step: probe with an explicit Euler step
// and bound by the estimated second derivative.
ScalarType initial_step(ModelKind kind, const ModelParams& params, const Vector& y0,
                        const Vector& f0, ScalarType t_span, ScalarType abs_tol,
                        ScalarType rel_tol)
{
    auto scaled_norm = [&](const Vector& v, const Vector& ref) {
        ScalarType sum = 0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const ScalarType scale = abs_tol + rel_tol * std::abs(ref[i]);
            const ScalarType q     = v[i] / scale;
            sum += q * q;
        }
        return std::sqrt(sum / static_cast<ScalarType>(v.size()));
    };
    const ScalarType d0 = scaled_norm(y0, y0);
    const ScalarType d1 = scaled_norm(f0, y0);
    ScalarType h0 = (d0 >= 1e-5 && d1 >= 1e-5) ? 0.01 * d0 / d1 : 1e-6 * t_span;
    h0            = std::min(h0, t_span);

    const Vector y1 = y0 + h0 * f0;
    const Vector f1 = rhs_raw(kind, params, y1);
    const ScalarType d2 = scaled_norm(f1 - f0, y0) / h0;

    const ScalarType dmax = std::max(d1, d2);
    ScalarType h1 = dmax > 1e-15 ? std::pow(0.01 / dmax, 0.2) : std::max(1e-6 * t_span, h0 * 1e-3);
    return std::min({100 * h0, h1, t_span});
}

} // namespace

void IntegratorConfig::validate() const
{
    if (!(rel_tol > 0) || !(abs_tol > 0)) {
        throw ConfigError("rel_tol and abs_tol must be > 0");
    }
    if (!(t_span.second > t_span.first)) {
        throw ConfigError("t_span must be increasing");
    }
    if (h_init < 0 || h_max < 0) {
        throw ConfigError("h_init and h_max must be >= 0");
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

Trajectory integrate(ModelKind kind, const ModelParams& params, const StateVector& initial,
                     const IntegratorConfig& config)
{
    params.validate(kind);
    config.validate();
    if (initial.values.size() != compartment_count(kind)) {
        throw StructuralError("initial state does not match model " + to_string(kind));
    }
    for (Eigen::Index i = 0; i < initial.values.size(); ++i) {
        if (initial.values[i] < 0) {
            throw DomainError("initial compartments must be >= 0");
        }
    }

    const ScalarType t0 = config.t_span.first;
    const ScalarType t1 = config.t_span.second;
    const ScalarType span = t1 - t0;
    const ScalarType neg_floor = 10 * config.abs_tol;

    std::vector<ScalarType> out_times;
    std::vector<Vector> out_states;

    auto record = [&](ScalarType t, Vector y) {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            if (y[i] < 0) {
                if (y[i] < -neg_floor) {
                    throw IntegratorFault("compartment " +
                                          std::string(compartment_names(kind)[i]) +
                                          " fell below -10*abs_tol at t=" + format_scalar(t));
                }
                y[i] = 0;
            }
        }
        if (conserved(kind) && std::abs(y.sum() - params.n_total) > neg_floor) {
            throw IntegratorFault("population sum drifted from N at t=" + format_scalar(t));
        }
        out_times.push_back(t);
        out_states.push_back(std::move(y));
    };

    const bool dense = !config.sample_times.empty();
    std::size_t next_sample = 0;
    if (dense) {
        // A sample exactly at t0 comes straight from the initial state.
        while (next_sample < config.sample_times.size() &&
               config.sample_times[next_sample] <= t0) {
            record(config.sample_times[next_sample], initial.values);
            ++next_sample;
        }
    }
    else {
        record(t0, initial.values);
    }

    ScalarType t = t0;
    Vector y     = initial.values;
    Vector f     = rhs_raw(kind, params, y);

    const ScalarType h_max =
        config.h_max > 0 ? config.h_max : std::numeric_limits<ScalarType>::infinity();
    ScalarType h = config.h_init > 0
                       ? config.h_init
                       : initial_step(kind, params, y, f, span, config.abs_tol, config.rel_tol);
    h = std::min(h, h_max);

    Vector k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size()), k7(y.size());

    std::size_t n_steps = 0;
    while (t < t1) {
        if (++n_steps > max_steps) {
            throw StiffnessError("step budget exhausted before reaching t_span end");
        }
        if (h < 1e-12 * span) {
            throw StiffnessError("step size underflow at t=" + format_scalar(t));
        }
        h = std::min(h, t1 - t);

        k2 = rhs_raw(kind, params, y + h * (A21 * f));
        k3 = rhs_raw(kind, params, y + h * (A31 * f + A32 * k2));
        k4 = rhs_raw(kind, params, y + h * (A41 * f + A42 * k2 + A43 * k3));
        k5 = rhs_raw(kind, params, y + h * (A51 * f + A52 * k2 + A53 * k3 + A54 * k4));
        k6 = rhs_raw(kind, params,
                     y + h * (A61 * f + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
        const Vector y_next =
            y + h * (B1 * f + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        k7 = rhs_raw(kind, params, y_next);

        const Vector err =
            h * (E1 * f + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        const ScalarType err_norm =
            error_norm(err, y, y_next, config.abs_tol, config.rel_tol);

        if (err_norm <= 1.0) {
            const ScalarType t_next = t + h;
            if (dense && next_sample < config.sample_times.size() &&
                config.sample_times[next_sample] <= t_next + 1e-14 * span) {
                DenseInterpolant interp;
                interp.c1 = y;
                interp.c2 = y_next - y;
                interp.c3 = h * f - interp.c2;
                interp.c4 = interp.c2 - h * k7 - interp.c3;
                interp.c5 = h * (D1 * f + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7);
                while (next_sample < config.sample_times.size() &&
                       config.sample_times[next_sample] <= t_next + 1e-14 * span) {
                    const ScalarType ts    = config.sample_times[next_sample];
                    const ScalarType theta = std::clamp((ts - t) / h, 0.0, 1.0);
                    record(ts, interp(theta));
                    ++next_sample;
                }
            }
            t = t_next;
            y = y_next;
            f = k7;  // FSAL
            for (Eigen::Index i = 0; i < y.size(); ++i) {
                if (y[i] < 0) {
                    if (y[i] < -neg_floor) {
                        throw IntegratorFault(
                            "compartment " + std::string(compartment_names(kind)[i]) +
                            " fell below -10*abs_tol at t=" + format_scalar(t));
                    }
                    y[i] = 0;
                }
            }
            if (!dense) {
                record(t, y);
            }
        }

        ScalarType fac = err_norm > 0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
        fac            = std::clamp(fac, 0.2, 5.0);
        h              = std::min(h * fac, h_max);
    }
    // Samples within roundoff of the end point.
    while (dense && next_sample < config.sample_times.size()) {
        record(config.sample_times[next_sample], y);
        ++next_sample;
    }

    Trajectory traj;
    traj.kind   = kind;
    traj.params = params;
    traj.times  = std::move(out_times);
    traj.states.resize(static_cast<Eigen::Index>(traj.times.size()), compartment_count(kind));
    for (std::size_t i = 0; i < out_states.size(); ++i) {
        traj.states.row(static_cast<Eigen::Index>(i)) = out_states[i].transpose();
    }

    // Interior peak of the infective/tweeting compartment, when any.
    const char* watched = nullptr;
    switch (kind) {
    case ModelKind::LogisticSI:
        watched = "I";
        break;
    case ModelKind::SIS:
    case ModelKind::SIR:
        watched = "I";
        break;
    case ModelKind::STR:
    case ModelKind::SEIZ:
        watched = "T";
        break;
    }
    if (watched != nullptr && traj.times.size() >= 3) {
        const PeakResult peak = find_peak(traj, watched);
        if (!peak.boundary) {
            traj.peak_events.push_back({watched, peak.time, peak.value});
        }
    }
    return traj;
}

PeakResult find_peak(const Trajectory& traj, std::string_view compartment)
{
    const int col = compartment_index(traj.kind, compartment);
    if (traj.times.empty()) {
        throw StructuralError("trajectory has no samples");
    }
    Eigen::Index best = 0;
    traj.states.col(col).maxCoeff(&best);

    PeakResult result;
    result.time  = traj.times[static_cast<std::size_t>(best)];
    result.value = traj.states(best, col);
    if (best == 0 || best == traj.states.rows() - 1) {
        result.boundary = true;
        return result;
    }

    // Quadratic through the three bracketing samples; vertex refines the peak.
    const ScalarType t0 = traj.times[best - 1], t1 = traj.times[best], t2 = traj.times[best + 1];
    const ScalarType v0 = traj.states(best - 1, col), v1 = traj.states(best, col),
                     v2 = traj.states(best + 1, col);
    const ScalarType d01 = (v1 - v0) / (t1 - t0);
    const ScalarType d12 = (v2 - v1) / (t2 - t1);
    const ScalarType curv = (d12 - d01) / (t2 - t0);
    if (curv < 0) {
        const ScalarType t_peak = 0.5 * (t0 + t1 - d01 / curv);
        if (t_peak > t0 && t_peak < t2) {
            // Newton form evaluated at the vertex.
            result.time  = t_peak;
            result.value = v0 + d01 * (t_peak - t0) + curv * (t_peak - t0) * (t_peak - t1);
        }
    }
    return result;
}

std::string to_csv(const Trajectory& traj)
{
    std::string out = "t";
    for (const auto& name : compartment_names(traj.kind)) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += format_scalar(traj.times[i]);
        for (Eigen::Index j = 0; j < traj.states.cols(); ++j) {
            out += ',';
            out += format_scalar(traj.states(static_cast<Eigen::Index>(i), j));
        }
        out += '\n';
    }
    return out;
}

} // namespace memetic
