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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "memetic/error.hpp"
#include "memetic/ode.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace memetic;

namespace {

IntegratorConfig sampled_config(ScalarType t0, ScalarType t1, int n)
{
    IntegratorConfig c;
    c.t_span       = {t0, t1};
    c.sample_times = testing::linspace(t0, t1, n);
    return c;
}

} // namespace

TEST_CASE("logistic integration matches the closed form")
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        ModelParams p;
        p.beta    = testing::uniform(rng, 0.02, 0.3);
        p.n_total = testing::uniform(rng, 50, 1500);
        const ScalarType i0 = testing::uniform(rng, 0.5, p.n_total / 2);

        IntegratorConfig config = sampled_config(0, 10 / (p.beta * p.n_total), 100);
        Vector initial(1);
        initial << i0;
        const Trajectory traj = integrate(ModelKind::LogisticSI, p, {initial, 0}, config);

        REQUIRE(traj.times.size() == 100);
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            const ScalarType expected = logistic_closed_form(p, i0, traj.times[s]);
            CHECK(traj.states(static_cast<Eigen::Index>(s), 0) ==
                  doctest::Approx(expected).epsilon(1e-6));
        }
    }
}

TEST_CASE("SIR with no infectives stays put")
{
    ModelParams p;
    p.beta = 3;
    p.nu = 1;
    p.n_total = 1;
    Vector initial(3);
    initial << 0.8, 0, 0.2;
    const Trajectory traj = integrate(ModelKind::SIR, p, {initial, 0}, sampled_config(0, 5, 21));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        CHECK(traj.states(static_cast<Eigen::Index>(s), 0) == 0.8);
        CHECK(traj.states(static_cast<Eigen::Index>(s), 1) == 0.0);
        CHECK(traj.states(static_cast<Eigen::Index>(s), 2) == 0.2);
    }
}

TEST_CASE("zero rates return the initial state exactly")
{
    ModelParams p;
    p.beta = 0;
    p.nu = 0;
    p.n_total = 1;
    Vector initial(2);
    initial << 0.25, 0.75;
    const Trajectory traj = integrate(ModelKind::SIS, p, {initial, 0}, sampled_config(0, 3, 17));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        CHECK(traj.states(static_cast<Eigen::Index>(s), 0) == 0.25);
        CHECK(traj.states(static_cast<Eigen::Index>(s), 1) == 0.75);
    }
}

TEST_CASE("STR run shows the expected wave shapes")
{
    ModelParams p;
    p.beta = 0.5;
    p.nu = 0.1;
    p.n_total = 1;
    Vector initial(3);
    initial << 0.99, 0.01, 0;
    const Trajectory traj =
        integrate(ModelKind::STR, p, {initial, 0}, sampled_config(0, 120, 241));

    const auto n = static_cast<Eigen::Index>(traj.times.size());
    // S nonincreasing, R nondecreasing.
    for (Eigen::Index s = 1; s < n; ++s) {
        CHECK(traj.states(s, 0) <= traj.states(s - 1, 0) + 1e-12);
        CHECK(traj.states(s, 2) >= traj.states(s - 1, 2) - 1e-12);
    }
    // T rises to an interior peak and decays toward zero.
    Eigen::Index peak_idx = 0;
    traj.states.col(1).maxCoeff(&peak_idx);
    CHECK(peak_idx > 0);
    CHECK(peak_idx < n - 1);
    CHECK(traj.states(peak_idx, 1) > initial[1]);
    CHECK(traj.states(n - 1, 1) < 0.05 * traj.states(peak_idx, 1));
    // The peak event was recorded.
    REQUIRE(traj.peak_events.size() == 1);
    CHECK(traj.peak_events[0].compartment == "T");
}

TEST_CASE("conservation holds at every sample")
{
    std::mt19937_64 rng(29);
    const ModelKind kinds[] = {ModelKind::SIS, ModelKind::SIR, ModelKind::STR, ModelKind::SEIZ};
    for (ModelKind kind : kinds) {
        ModelParams p;
        p.beta    = testing::uniform(rng, 0.2, 3);
        p.nu      = testing::uniform(rng, 0.1, 1);
        p.n_total = 500;
        if (kind == ModelKind::SEIZ) {
            p.b       = testing::uniform(rng, 0.1, 1);
            p.rho     = testing::uniform(rng, 0.1, 1);
            p.epsilon = testing::uniform(rng, 0.1, 1);
            p.l_prob  = 0.4;
            p.p_prob  = 0.6;
        }
        const int nc = compartment_count(kind);
        Vector initial = Vector::Zero(nc);
        initial[0]     = 0.9 * p.n_total;
        initial[1]     = 0.1 * p.n_total;
        IntegratorConfig config = sampled_config(0, 30, 101);
        const Trajectory traj   = integrate(kind, p, {initial, 0}, config);
        for (Eigen::Index s = 0; s < traj.states.rows(); ++s) {
            CHECK(std::abs(traj.states.row(s).sum() - p.n_total) <= 10 * config.abs_tol);
        }
    }
}

TEST_CASE("SIR final-size relation")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        ModelParams p;
        p.beta    = testing::uniform(rng, 0.5, 3);
        p.nu      = testing::uniform(rng, 0.2, 1);
        p.n_total = testing::uniform(rng, 1, 1e4);
        Vector initial(3);
        initial << 0.95 * p.n_total, 0.05 * p.n_total, 0;

        const ScalarType horizon = 40 / p.nu;
        const Trajectory traj =
            integrate(ModelKind::SIR, p, {initial, 0}, sampled_config(0, horizon, 11));
        const Eigen::Index last = traj.states.rows() - 1;
        const ScalarType s_end  = traj.states(last, 0);
        const ScalarType r_end  = traj.states(last, 2);
        const ScalarType predicted =
            initial[0] * std::exp(-p.beta / (p.nu * p.n_total) * r_end);
        CHECK(std::abs(s_end - predicted) < 1e-4 * p.n_total);
    }
}

TEST_CASE("halving tolerances never increases the closed-form error")
{
    ModelParams p;
    p.beta    = 0.05;
    p.n_total = 200;
    const ScalarType i0 = 2;
    Vector initial(1);
    initial << i0;

    // Error measured where the solver commits its solution: the accepted
    // steps. Dense-output accuracy at tight tolerances is covered below.
    ScalarType prev_err = -1;
    for (int level = 0; level < 10; ++level) {
        IntegratorConfig config;
        config.t_span  = {0, 10 / (p.beta * p.n_total)};
        config.rel_tol = 1e-4 * std::pow(0.5, level);
        config.abs_tol = 1e-7 * std::pow(0.5, level);
        const Trajectory traj = integrate(ModelKind::LogisticSI, p, {initial, 0}, config);
        ScalarType err = 0;
        for (std::size_t s = 0; s < traj.times.size(); ++s) {
            err = std::max(err, std::abs(traj.states(static_cast<Eigen::Index>(s), 0) -
                                         logistic_closed_form(p, i0, traj.times[s])));
        }
        if (prev_err >= 0) {
            CHECK(err <= prev_err + 1e-15);
        }
        prev_err = err;
    }

    // At tight tolerances the interpolated samples track the closed form
    // to well below the acceptance threshold.
    IntegratorConfig config = sampled_config(0, 10 / (p.beta * p.n_total), 64);
    const Trajectory traj   = integrate(ModelKind::LogisticSI, p, {initial, 0}, config);
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const ScalarType expected = logistic_closed_form(p, i0, traj.times[s]);
        CHECK(traj.states(static_cast<Eigen::Index>(s), 0) ==
              doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("find_peak refines against a fine fixed-step reference")
{
    ModelParams p;
    p.beta = 3;
    p.nu = 1;
    p.n_total = 1;
    Vector initial(3);
    initial << 0.99, 0.01, 0;
    const Trajectory traj =
        integrate(ModelKind::SIR, p, {initial, 0}, sampled_config(0, 15, 301));
    const PeakResult peak = find_peak(traj, "I");
    CHECK_FALSE(peak.boundary);

    const auto fine_times = testing::linspace(0, 15, 15001);
    const Matrix reference = testing::rk4_fixed(ModelKind::SIR, p, initial, fine_times, 1e-4);
    const ScalarType ref_peak = reference.col(1).maxCoeff();
    CHECK(std::abs(peak.value - ref_peak) < 1e-5);
}

TEST_CASE("find_peak boundary cases")
{
    ModelParams p;
    p.beta = 2;
    p.nu = 1;
    p.n_total = 1;
    Vector initial(2);
    initial << 0.9, 0.1;  // below the endemic equilibrium 0.5
    const Trajectory traj =
        integrate(ModelKind::SIS, p, {initial, 0}, sampled_config(0, 20, 81));
    const PeakResult peak = find_peak(traj, "I");
    CHECK(peak.boundary);
    CHECK(peak.time == traj.times.back());

    // Constant trajectory peaks at the first sample.
    ModelParams frozen;
    frozen.beta = 0;
    frozen.nu = 0;
    frozen.n_total = 1;
    const Trajectory flat =
        integrate(ModelKind::SIS, frozen, {initial, 0}, sampled_config(0, 5, 11));
    const PeakResult flat_peak = find_peak(flat, "I");
    CHECK(flat_peak.boundary);
    CHECK(flat_peak.value == 0.1);

    CHECK_THROWS_AS(find_peak(traj, "R"), StructuralError);
}

TEST_CASE("config and state validation")
{
    ModelParams p;
    p.beta = 1;
    p.nu = 1;
    p.n_total = 1;
    Vector initial(2);
    initial << 0.5, 0.5;

    IntegratorConfig bad;
    bad.t_span = {1, 0};
    CHECK_THROWS_AS(integrate(ModelKind::SIS, p, {initial, 0}, bad), ConfigError);

    IntegratorConfig outside = sampled_config(0, 1, 5);
    outside.sample_times.push_back(2.0);
    CHECK_THROWS_AS(integrate(ModelKind::SIS, p, {initial, 0}, outside), ConfigError);

    Vector wrong(3);
    wrong << 1, 0, 0;
    CHECK_THROWS_AS(integrate(ModelKind::SIS, p, {wrong, 0}, sampled_config(0, 1, 5)),
                    StructuralError);

    Vector negative(2);
    negative << 1.5, -0.5;
    CHECK_THROWS_AS(integrate(ModelKind::SIS, p, {negative, 0}, sampled_config(0, 1, 5)),
                    DomainError);
}

TEST_CASE("trajectory CSV layout")
{
    ModelParams p;
    p.beta = 0.5;
    p.nu = 0.1;
    p.n_total = 1;
    Vector initial(3);
    initial << 0.99, 0.01, 0;
    const Trajectory traj = integrate(ModelKind::STR, p, {initial, 0}, sampled_config(0, 1, 3));
    const std::string csv = to_csv(traj);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,S,T,R");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
    }
    CHECK(rows == 3);
    // 15 significant digits survive the round trip.
    CHECK(csv.find("0.99") != std::string::npos);
}
