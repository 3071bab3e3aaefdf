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
#include "memetic/calibrate.hpp"
#include "memetic/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace memetic {

namespace {

constexpr ScalarType inf = std::numeric_limits<ScalarType>::infinity();

bool is_param_name(const std::string& name)
{
    static const char* names[] = {"beta", "nu", "b", "rho", "epsilon", "l_prob", "p_prob",
                                  "d_diff"};
    return std::find_if(std::begin(names), std::end(names),
                        [&](const char* n) { return name == n; }) != std::end(names);
}

ScalarType& param_field(ModelParams& p, const std::string& name)
{
    if (name == "beta") return p.beta;
    if (name == "nu") return p.nu;
    if (name == "b") return p.b;
    if (name == "rho") return p.rho;
    if (name == "epsilon") return p.epsilon;
    if (name == "l_prob") return p.l_prob;
    if (name == "p_prob") return p.p_prob;
    if (name == "d_diff") return p.d_diff;
    throw StructuralError("unknown parameter '" + name + "'");
}

std::pair<ScalarType, ScalarType> default_bounds(const std::string& name, ScalarType n_total)
{
    if (name == "l_prob" || name == "p_prob") {
        return {0.0, 1.0};
    }
    if (name == "d_diff") {
        return {0.0, 1.0};
    }
    if (is_param_name(name)) {
        return {0.0, 10.0};  // rates per day; fitted values land well inside
    }
    return {0.0, n_total};  // initial compartment value
}

} // namespace

void ObservedSeries::validate() const
{
    if (times.empty()) {
        throw DomainError("observed series is empty");
    }
    if (static_cast<Eigen::Index>(times.size()) != values.rows() ||
        static_cast<Eigen::Index>(compartments.size()) != values.cols()) {
        throw StructuralError("observed series shape mismatch");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("observed times must be strictly increasing");
        }
    }
    if (values.minCoeff() < 0) {
        throw DomainError("observed values must be >= 0");
    }
}

PowerLawFit power_law_prefit(const std::vector<ScalarType>& times,
                             const std::vector<ScalarType>& values)
{
    if (times.size() != values.size()) {
        throw StructuralError("times and values differ in length");
    }
    ScalarType sx = 0, sy = 0, sxx = 0, sxy = 0;
    long n = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] > 0 && values[i] > 0) {
            const ScalarType lx = std::log(times[i]);
            const ScalarType ly = std::log(values[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
    }
    if (n < 2) {
        throw DomainError("need at least two positive samples for a power-law fit");
    }
    const ScalarType denom = n * sxx - sx * sx;
    if (denom == 0) {
        throw DomainError("degenerate times for a power-law fit");
    }
    PowerLawFit result;
    result.exponent  = (n * sxy - sx * sy) / denom;
    result.amplitude = std::exp((sy - result.exponent * sx) / n);
    return result;
}

FitResult fit(ModelKind kind, const ObservedSeries& observed, const ModelParams& base_params,
              const StateVector& base_initial, const FitOptions& options)
{
    observed.validate();
    base_params.validate(kind);
    const auto names = compartment_names(kind);
    if (base_initial.values.size() != compartment_count(kind)) {
        throw StructuralError("initial state does not match model " + to_string(kind));
    }
    if (options.free_names.empty()) {
        throw StructuralError("no free parameters requested");
    }

    std::vector<int> observed_cols;
    observed_cols.reserve(observed.compartments.size());
    for (const std::string& name : observed.compartments) {
        observed_cols.push_back(compartment_index(kind, name));
    }

    const int dim = static_cast<int>(options.free_names.size());
    std::vector<std::pair<ScalarType, ScalarType>> bounds(dim);
    Vector x0(dim);
    for (int i = 0; i < dim; ++i) {
        const std::string& name = options.free_names[i];
        const bool is_param = is_param_name(name);
        if (!is_param) {
            const int idx = compartment_index(kind, name);
            if (idx == 0) {
                throw StructuralError("the susceptible pool closes the population; fit the "
                                      "other compartments instead");
            }
        }
        bounds[i] = default_bounds(name, base_params.n_total);
        if (auto it = options.bounds.find(name); it != options.bounds.end()) {
            bounds[i] = it->second;
        }
        if (!(std::isfinite(bounds[i].first) && std::isfinite(bounds[i].second) &&
              bounds[i].second > bounds[i].first)) {
            throw ConfigError("bounds for '" + name + "' must be finite and increasing");
        }
        ScalarType start;
        if (auto it = options.init_guess.find(name); it != options.init_guess.end()) {
            start = it->second;
        }
        else if (is_param) {
            ModelParams tmp = base_params;
            start           = param_field(tmp, name);
        }
        else {
            start = base_initial.values[compartment_index(kind, name)];
        }
        x0[i] = std::clamp(start, bounds[i].first, bounds[i].second);
    }

    // Optional early-growth seeding: the log-log slope p of the first half
    // of the observed (primary) compartment approximates d ln v/dt ~ p/t at
    // the segment's geometric mean time, and beta ~ (growth + nu) N/S0.
    if (options.power_law_seed) {
        const auto beta_slot =
            std::find(options.free_names.begin(), options.free_names.end(), "beta");
        if (beta_slot != options.free_names.end()) {
            std::vector<ScalarType> ts, vs;
            for (std::size_t i = 0; i < observed.times.size() / 2 + 1; ++i) {
                ts.push_back(observed.times[i]);
                vs.push_back(observed.values(static_cast<Eigen::Index>(i), 0));
            }
            try {
                const PowerLawFit pl = power_law_prefit(ts, vs);
                ScalarType t_lo = 0, t_hi = 0;
                for (ScalarType t : ts) {
                    if (t > 0) {
                        t_lo = t_lo == 0 ? t : t_lo;
                        t_hi = t;
                    }
                }
                const ScalarType t_mid = std::sqrt(t_lo * t_hi);
                const ScalarType s0 = base_initial.values[0];
                if (t_mid > 0 && s0 > 0) {
                    const int slot = static_cast<int>(beta_slot - options.free_names.begin());
                    ModelParams tmp = base_params;
                    const ScalarType growth = pl.exponent / t_mid + tmp.nu;
                    x0[slot] = std::clamp(growth * base_params.n_total / s0,
                                          bounds[slot].first, bounds[slot].second);
                }
            }
            catch (const DomainError&) {
                // not enough positive early samples; keep the plain guess
            }
        }
    }

    IntegratorConfig ode_config;
    ode_config.rel_tol      = options.rel_tol;
    ode_config.abs_tol      = options.abs_tol;
    ode_config.t_span       = {observed.times.front(), observed.times.back()};
    ode_config.sample_times = observed.times;

    FitResult result;
    auto apply_point = [&](const Vector& x, ModelParams& params, Vector& init) {
        params = base_params;
        init   = base_initial.values;
        for (int i = 0; i < dim; ++i) {
            const std::string& name = options.free_names[i];
            if (is_param_name(name)) {
                param_field(params, name) = x[i];
            }
            else {
                init[compartment_index(kind, name)] = x[i];
            }
        }
        // Close the population through the first compartment.
        if (compartment_count(kind) > 1) {
            init[0] = params.n_total - init.tail(init.size() - 1).sum();
        }
    };

    auto objective = [&](const Vector& x) -> ScalarType {
        ModelParams params;
        Vector init;
        apply_point(x, params, init);
        if (compartment_count(kind) > 1 && init[0] < 0) {
            return inf;
        }
        Trajectory traj;
        try {
            traj = integrate(kind, params, {init, observed.times.front()}, ode_config);
        }
        catch (const std::runtime_error&) {
            return inf;  // penalized trial point
        }
        ScalarType loss = 0;
        for (std::size_t t = 0; t < observed.times.size(); ++t) {
            for (std::size_t c = 0; c < observed_cols.size(); ++c) {
                const ScalarType model_v =
                    traj.states(static_cast<Eigen::Index>(t), observed_cols[c]);
                const ScalarType obs_v =
                    observed.values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c));
                ScalarType r = model_v - obs_v;
                if (options.relative_loss) {
                    r /= std::max(std::abs(obs_v), ScalarType(1e-12));
                }
                loss += r * r;
            }
        }
        return loss;
    };

    ScalarType best_so_far = inf;
    auto evaluate = [&](const Vector& x) {
        const ScalarType f = objective(x);
        ++result.n_evals;
        best_so_far = std::min(best_so_far, f);
        result.best_loss_history.push_back(best_so_far);
        return f;
    };

    auto clip = [&](Vector x) {
        for (int i = 0; i < dim; ++i) {
            x[i] = std::clamp(x[i], bounds[i].first, bounds[i].second);
        }
        return x;
    };

    // Initial simplex: 5% of each bound range around the start point.
    std::vector<Vector> simplex;
    std::vector<ScalarType> f_vals;
    simplex.push_back(clip(x0));
    for (int i = 0; i < dim; ++i) {
        Vector v = simplex[0];
        const ScalarType delta = 0.05 * (bounds[i].second - bounds[i].first);
        v[i] = v[i] + delta <= bounds[i].second ? v[i] + delta : v[i] - delta;
        simplex.push_back(clip(v));
    }
    for (const Vector& v : simplex) {
        f_vals.push_back(evaluate(v));
    }

    const ScalarType reflect = 1.0, expand = 2.0, contract = 0.5, shrink = 0.5;
    bool converged = false;
    while (result.n_evals < options.budget) {
        std::vector<int> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return f_vals[a] < f_vals[b]; });
        std::vector<Vector> sorted_x;
        std::vector<ScalarType> sorted_f;
        for (int idx : order) {
            sorted_x.push_back(simplex[idx]);
            sorted_f.push_back(f_vals[idx]);
        }
        simplex = std::move(sorted_x);
        f_vals  = std::move(sorted_f);

        ScalarType diameter = 0;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            diameter = std::max(diameter, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
        }
        const ScalarType scale = std::max(ScalarType(1), simplex[0].cwiseAbs().maxCoeff());
        if (diameter < 1e-8 * scale) {
            converged = true;
            break;
        }

        Vector centroid = Vector::Zero(dim);
        for (int i = 0; i < dim; ++i) {
            centroid += simplex[static_cast<std::size_t>(i)];
        }
        centroid /= static_cast<ScalarType>(dim);

        const Vector& worst = simplex.back();
        const Vector xr = clip(centroid + reflect * (centroid - worst));
        const ScalarType fr = evaluate(xr);
        if (fr < f_vals[0]) {
            const Vector xe = clip(centroid + expand * (centroid - worst));
            const ScalarType fe = evaluate(xe);
            if (fe < fr) {
                simplex.back() = xe;
                f_vals.back()  = fe;
            }
            else {
                simplex.back() = xr;
                f_vals.back()  = fr;
            }
        }
        else if (fr < f_vals[f_vals.size() - 2]) {
            simplex.back() = xr;
            f_vals.back()  = fr;
        }
        else {
            const bool outside = fr < f_vals.back();
            const Vector xc =
                clip(centroid + contract * ((outside ? xr : worst) - centroid));
            const ScalarType fc = evaluate(xc);
            if (fc < std::min(fr, f_vals.back())) {
                simplex.back() = xc;
                f_vals.back()  = fc;
            }
            else {
                for (std::size_t i = 1; i < simplex.size(); ++i) {
                    simplex[i] = clip(simplex[0] + shrink * (simplex[i] - simplex[0]));
                    f_vals[i]  = evaluate(simplex[i]);
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < f_vals.size(); ++i) {
        if (f_vals[i] < f_vals[best]) {
            best = i;
        }
    }
    if (!std::isfinite(f_vals[best])) {
        throw FitFailure("every trial point failed to integrate");
    }

    Vector init;
    apply_point(simplex[best], result.params, init);
    result.initial_state = {init, observed.times.front()};
    result.loss          = f_vals[best];
    result.converged     = converged;
    try {
        result.r = reproduction_number(kind, result.params, init[0]);
    }
    catch (const std::runtime_error&) {
        result.r.reset();
    }
    if (kind == ModelKind::SEIZ) {
        try {
            result.r_rob = robustness_metric(result.params);
        }
        catch (const std::runtime_error&) {
            result.r_rob.reset();
        }
    }
    return result;
}

MetricPanel metric_panel(ModelKind kind, const FitResult& fit_result, ScalarType s0,
                         std::optional<bool> with_robustness)
{
    if (!fit_result.converged) {
        throw DomainError("metric panel needs a converged fit");
    }
    const bool want_rob = with_robustness.value_or(kind == ModelKind::SEIZ);
    if (want_rob && kind != ModelKind::SEIZ) {
        throw StructuralError("robustness metric applies to SEIZ fits only");
    }
    MetricPanel row;
    row.beta = fit_result.params.beta;
    try {
        // SEIZ rows report the reproduction number of the paired
        // tweet/retweet pair when nu is available.
        row.r = reproduction_number(kind == ModelKind::SEIZ ? ModelKind::SIR : kind,
                                    fit_result.params, s0);
    }
    catch (const std::runtime_error&) {
        row.r.reset();
    }
    if (want_rob) {
        row.r_rob = robustness_metric(fit_result.params);
    }
    return row;
}

std::string render_panel_csv(const std::vector<MetricPanel>& rows)
{
    std::string out = "label,beta,R,R_Rob\n";
    for (const MetricPanel& r : rows) {
        out += r.label + ',' + format_scalar(r.beta) + ',';
        if (r.r) {
            out += format_scalar(*r.r);
        }
        out += ',';
        if (r.r_rob) {
            out += format_scalar(*r.r_rob);
        }
        out += '\n';
    }
    return out;
}

std::string render_panel_text(const std::vector<MetricPanel>& rows)
{
    std::size_t label_w = 5;
    for (const MetricPanel& r : rows) {
        label_w = std::max(label_w, r.label.size());
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-*s  %10s  %8s  %8s\n", static_cast<int>(label_w), "",
                  "beta", "R", "R_Rob");
    std::string out = buf;
    for (const MetricPanel& r : rows) {
        char r_col[24], rob_col[24];
        if (r.r) {
            std::snprintf(r_col, sizeof(r_col), "%8.4g", *r.r);
        }
        else {
            std::snprintf(r_col, sizeof(r_col), "%8s", "-");
        }
        if (r.r_rob) {
            std::snprintf(rob_col, sizeof(rob_col), "%8.4g", *r.r_rob);
        }
        else {
            std::snprintf(rob_col, sizeof(rob_col), "%8s", "-");
        }
        std::snprintf(buf, sizeof(buf), "%-*s  %10.5g  %s  %s\n", static_cast<int>(label_w),
                      r.label.c_str(), r.beta, r_col, rob_col);
        out += buf;
    }
    return out;
}

RDerivatives r_derivatives(const std::vector<std::pair<ScalarType, ScalarType>>& window_r,
                           ScalarType spacing, bool nonuniform)
{
    if (window_r.size() < 2) {
        throw DomainError("need at least two windows for dR/dt");
    }
    for (std::size_t i = 1; i < window_r.size(); ++i) {
        const ScalarType gap = window_r[i].first - window_r[i - 1].first;
        if (!(gap > 0)) {
            throw DomainError("window times must be strictly increasing");
        }
        if (!nonuniform && std::abs(gap - spacing) > 0.01 * spacing) {
            throw ConfigError("window spacing deviates by more than 1%; "
                              "use nonuniform mode");
        }
    }

    const std::size_t n = window_r.size();
    auto t = [&](std::size_t i) { return window_r[i].first; };
    auto v = [&](std::size_t i) { return window_r[i].second; };

    // First derivative: parabola slope at interior points, one-sided at the
    // ends; exact on quadratics for any spacing.
    ScalarType first_sum = (v(1) - v(0)) / (t(1) - t(0));
    first_sum += (v(n - 1) - v(n - 2)) / (t(n - 1) - t(n - 2));
    std::size_t first_count = 2;
    ScalarType second_sum = 0;
    std::size_t second_count = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const ScalarType t0 = t(i - 1), t1 = t(i), t2 = t(i + 1);
        const ScalarType d01 = (v(i) - v(i - 1)) / (t1 - t0);
        const ScalarType d12 = (v(i + 1) - v(i)) / (t2 - t1);
        const ScalarType curv = (d12 - d01) / (t2 - t0);
        first_sum += d01 + curv * (t1 - t0);  // parabola slope at t1
        ++first_count;
        second_sum += 2 * curv;
        ++second_count;
    }

    RDerivatives result;
    result.first = first_sum / static_cast<ScalarType>(first_count);
    if (second_count > 0) {
        result.second         = second_sum / static_cast<ScalarType>(second_count);
        result.second_defined = true;
    }
    return result;
}

std::string fit_result_to_json(ModelKind kind, const FitResult& fit_result)
{
    nlohmann::ordered_json j;
    j["model"]  = to_string(kind);
    j["params"] = {{"beta", fit_result.params.beta},
                   {"nu", fit_result.params.nu},
                   {"b", fit_result.params.b},
                   {"rho", fit_result.params.rho},
                   {"epsilon", fit_result.params.epsilon},
                   {"l_prob", fit_result.params.l_prob},
                   {"p_prob", fit_result.params.p_prob},
                   {"d_diff", fit_result.params.d_diff},
                   {"n_total", fit_result.params.n_total}};
    auto initial = nlohmann::ordered_json::object();
    const auto names = compartment_names(kind);
    for (Eigen::Index i = 0; i < fit_result.initial_state.values.size(); ++i) {
        initial[names[static_cast<std::size_t>(i)]] = fit_result.initial_state.values[i];
    }
    j["initial"]   = initial;
    j["loss"]      = fit_result.loss;
    j["n_evals"]   = fit_result.n_evals;
    j["converged"] = fit_result.converged;
    auto metrics = nlohmann::ordered_json::object();
    if (fit_result.r) {
        metrics["R"] = *fit_result.r;
    }
    if (fit_result.r_rob) {
        metrics["R_Rob"] = *fit_result.r_rob;
    }
    j["metrics"] = metrics;
    return j.dump(2) + "\n";
}

} // namespace memetic
