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
#include "memetic/pde.hpp"
#include "memetic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace memetic {

void PdeConfig::validate() const
{
    if (!(domain_hi > domain_lo)) {
        throw ConfigError("domain_hi must exceed domain_lo");
    }
    if (n_cells < 8) {
        throw ConfigError("n_cells must be >= 8");
    }
    if (d_diff < 0 || beta < 0) {
        throw ConfigError("d_diff and beta must be >= 0");
    }
    if (!(n_total > 0)) {
        throw ConfigError("n_total must be > 0");
    }
    if (!(t_span.second > t_span.first)) {
        throw ConfigError("t_span must be increasing");
    }
    if (!(cfl_safety > 0 && cfl_safety <= 1)) {
        throw ConfigError("cfl_safety must be in (0,1]");
    }
}

Vector PdeConfig::cell_centers() const
{
    const ScalarType h = dx();
    Vector x(n_cells);
    for (int i = 0; i < n_cells; ++i) {
        x[i] = domain_lo + (i + 0.5) * h;
    }
    return x;
}

ScalarType PdeConfig::stable_dt() const
{
    ScalarType dt = std::numeric_limits<ScalarType>::infinity();
    if (d_diff > 0) {
        dt = std::min(dt, cfl_safety * dx() * dx() / (2 * d_diff));
    }
    if (beta > 0) {
        dt = std::min(dt, cfl_safety / (beta * n_total));
    }
    if (!std::isfinite(dt)) {
        dt = t_span.second - t_span.first;  // nothing evolves
    }
    return dt;
}

InitialProfile InitialProfile::uniform(ScalarType value)
{
    InitialProfile p;
    p.shape = Shape::Uniform;
    p.value = value;
    return p;
}

InitialProfile InitialProfile::gaussian_bump(ScalarType center, ScalarType width,
                                             ScalarType amplitude)
{
    InitialProfile p;
    p.shape     = Shape::GaussianBump;
    p.center    = center;
    p.width     = width;
    p.amplitude = amplitude;
    return p;
}

InitialProfile InitialProfile::step(ScalarType edge, ScalarType amplitude)
{
    InitialProfile p;
    p.shape     = Shape::Step;
    p.edge      = edge;
    p.amplitude = amplitude;
    return p;
}

Field make_initial(const PdeConfig& config, const InitialProfile& profile)
{
    config.validate();
    const Vector x = config.cell_centers();
    Field field;
    field.time = config.t_span.first;
    switch (profile.shape) {
    case InitialProfile::Shape::Uniform:
        field.values = Vector::Constant(config.n_cells, profile.value);
        break;
    case InitialProfile::Shape::GaussianBump:
        field.values = profile.amplitude *
                       (-((x.array() - profile.center) / profile.width).square() / 2).exp();
        break;
    case InitialProfile::Shape::Step:
        field.values = (x.array() <= profile.edge)
                           .select(Vector::Constant(config.n_cells, profile.amplitude),
                                   Vector::Zero(config.n_cells));
        break;
    }
    for (int i = 0; i < config.n_cells; ++i) {
        if (field.values[i] < 0 || field.values[i] > config.n_total) {
            throw DomainError("initial profile must lie in [0, N]");
        }
    }
    return field;
}

Field step_field(const PdeConfig& config, const Field& field, ScalarType dt)
{
    if (field.values.size() != config.n_cells) {
        throw StructuralError("field size does not match n_cells");
    }
    if (!(dt > 0)) {
        throw ConfigError("dt must be > 0");
    }
    const ScalarType h = config.dx();
    if (config.d_diff > 0 && dt > config.cfl_safety * h * h / (2 * config.d_diff) * (1 + 1e-12)) {
        throw ConfigError("dt violates the diffusive stability bound");
    }
    if (config.beta > 0 &&
        dt > config.cfl_safety / (config.beta * config.n_total) * (1 + 1e-12)) {
        throw ConfigError("dt violates the reaction stability bound");
    }

    const Vector& v = field.values;
    const int n     = config.n_cells;
    Vector lap(n);
    lap[0]     = v[1] - v[0];  // mirrored ghost cell
    lap[n - 1] = v[n - 2] - v[n - 1];
    if (n > 2) {
        lap.segment(1, n - 2) =
            v.segment(0, n - 2) - 2 * v.segment(1, n - 2) + v.segment(2, n - 2);
    }

    Field next;
    next.time = field.time + dt;
    next.values =
        v.array() + dt * (config.d_diff / (h * h) * lap.array() +
                          config.beta * v.array() * (config.n_total - v.array()));
    return next;
}

Field step_field(const PdeConfig& config, const Field& field)
{
    return step_field(config, field, config.stable_dt());
}

std::vector<Field> run_pde(const PdeConfig& config, const Field& initial,
                           const std::vector<ScalarType>& snapshot_times)
{
    config.validate();
    if (snapshot_times.empty()) {
        throw ConfigError("snapshot_times must not be empty");
    }
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (snapshot_times[i] < config.t_span.first || snapshot_times[i] > config.t_span.second) {
            throw ConfigError("snapshot_times must lie within t_span");
        }
        if (i > 0 && !(snapshot_times[i] > snapshot_times[i - 1])) {
            throw ConfigError("snapshot_times must be strictly increasing");
        }
    }

    const ScalarType dt_cap = config.stable_dt();
    std::vector<Field> snapshots;
    snapshots.reserve(snapshot_times.size());

    Field current = initial;
    current.time  = config.t_span.first;
    for (ScalarType target : snapshot_times) {
        const ScalarType interval = target - current.time;
        if (interval > 0) {
            const auto n_steps = static_cast<long>(std::ceil(interval / dt_cap - 1e-12));
            const ScalarType dt = interval / static_cast<ScalarType>(n_steps);
            for (long s = 0; s < n_steps; ++s) {
                current = step_field(config, current, dt);
            }
        }
        current.time = target;
        snapshots.push_back(current);
    }
    return snapshots;
}

namespace {

// Rightmost downward crossing of the threshold, linearly interpolated
// between cell centers. Returns NaN when the snapshot has no crossing.
ScalarType crossing_position(const PdeConfig& config, const Vector& v, ScalarType threshold)
{
    const Vector x = config.cell_centers();
    for (int i = config.n_cells - 2; i >= 0; --i) {
        if (v[i] >= threshold && v[i + 1] < threshold) {
            const ScalarType frac = (v[i] - threshold) / (v[i] - v[i + 1]);
            return x[i] + frac * (x[i + 1] - x[i]);
        }
    }
    return std::numeric_limits<ScalarType>::quiet_NaN();
}

} // namespace

FrontSpeedResult front_speed(const PdeConfig& config, const std::vector<Field>& snapshots,
                             ScalarType level)
{
    if (!(level > 0 && level < 1)) {
        throw ConfigError("level must be in (0,1)");
    }
    if (snapshots.size() < 8) {
        throw MeasurementError("need at least 8 snapshots to measure a front speed");
    }
    const ScalarType threshold = level * config.n_total;
    const std::size_t lo = snapshots.size() / 4;
    const std::size_t hi = snapshots.size() - snapshots.size() / 4;
    const ScalarType boundary_guard = config.domain_hi - 3 * config.dx();

    std::vector<ScalarType> ts, xs;
    for (std::size_t i = lo; i < hi; ++i) {
        const ScalarType pos = crossing_position(config, snapshots[i].values, threshold);
        if (std::isnan(pos)) {
            continue;
        }
        if (pos > boundary_guard) {
            throw MeasurementError("front reached the boundary inside the measurement window");
        }
        ts.push_back(snapshots[i].time);
        xs.push_back(pos);
    }
    if (ts.size() < 2) {
        throw MeasurementError("too few snapshots with a developed front");
    }

    // Least-squares slope of position vs time.
    const auto n = static_cast<ScalarType>(ts.size());
    ScalarType st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sx += xs[i];
        stt += ts[i] * ts[i];
        stx += ts[i] * xs[i];
    }
    const ScalarType denom = n * stt - st * st;
    if (denom == 0) {
        throw MeasurementError("degenerate time window");
    }

    FrontSpeedResult result;
    result.speed = (n * stx - st * sx) / denom;
    result.ref_speed_sqrt_2dbn = std::sqrt(2 * config.d_diff * config.beta * config.n_total);
    result.ref_speed_kpp       = 2 * std::sqrt(config.d_diff * config.beta * config.n_total);
    result.n_points            = static_cast<int>(ts.size());
    return result;
}

std::string snapshots_to_csv(const PdeConfig& config, const std::vector<Field>& snapshots)
{
    const Vector x = config.cell_centers();
    std::string out = "x";
    for (int i = 0; i < config.n_cells; ++i) {
        out += ',';
        out += format_scalar(x[i]);
    }
    out += '\n';
    for (const Field& f : snapshots) {
        out += format_scalar(f.time);
        for (int i = 0; i < config.n_cells; ++i) {
            out += ',';
            out += format_scalar(f.values[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace memetic
