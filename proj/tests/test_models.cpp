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
#include "memetic/models.hpp"
#include "test_support.hpp"

#include <cmath>
#include <random>

using namespace memetic;

TEST_CASE("compartment catalog")
{
    CHECK(compartment_count(ModelKind::LogisticSI) == 1);
    CHECK(compartment_count(ModelKind::SIS) == 2);
    CHECK(compartment_count(ModelKind::SIR) == 3);
    CHECK(compartment_count(ModelKind::STR) == 3);
    CHECK(compartment_count(ModelKind::SEIZ) == 4);
    CHECK(compartment_names(ModelKind::STR)[1] == "T");
    CHECK(compartment_index(ModelKind::SEIZ, "Z") == 3);
    CHECK_THROWS_AS(compartment_index(ModelKind::SIR, "Z"), StructuralError);
    CHECK(model_kind_from_string("STRZ") == ModelKind::SEIZ);
    CHECK(model_kind_from_string(to_string(ModelKind::SIS)) == ModelKind::SIS);
}

TEST_CASE("parameter validation")
{
    ModelParams p;
    p.beta = 0.4;
    p.nu = 0.1;
    p.n_total = 1;
    CHECK_NOTHROW(p.validate(ModelKind::STR));

    ModelParams seiz_only = p;
    seiz_only.b = 0.2;
    CHECK_THROWS_AS(seiz_only.validate(ModelKind::SIR), DomainError);
    CHECK_NOTHROW(seiz_only.validate(ModelKind::SEIZ));

    ModelParams bad = p;
    bad.l_prob = 1.5;
    CHECK_THROWS_AS(bad.validate(ModelKind::SEIZ), DomainError);
    bad = p;
    bad.n_total = 0;
    CHECK_THROWS_AS(bad.validate(ModelKind::SIS), DomainError);
    bad = p;
    bad.beta = -1;
    CHECK_THROWS_AS(bad.validate(ModelKind::SIS), DomainError);

    CHECK(node_to_node_time(p) == doctest::Approx(2.5));
}

TEST_CASE("rhs: SIS equilibrium")
{
    ModelParams p;
    p.beta = 2;
    p.nu = 1;
    p.n_total = 1000;
    Vector state(2);
    state << 500, 500;
    const Vector d = rhs(ModelKind::SIS, p, {state, 0});
    // -(2/1000)*500*500 + 500 = 0
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
}

TEST_CASE("rhs: disease-free states are stationary")
{
    ModelParams p;
    p.beta = 3;
    p.nu = 0.5;
    p.n_total = 100;
    Vector sir(3);
    sir << 60, 0, 40;
    CHECK(rhs(ModelKind::SIR, p, {sir, 0}).isZero(0));

    ModelParams seiz;
    seiz.beta = 1;
    seiz.b = 0.5;
    seiz.rho = 0.2;
    seiz.epsilon = 0.1;
    seiz.l_prob = 0.3;
    seiz.p_prob = 0.7;
    seiz.n_total = 50;
    Vector virgin(4);
    virgin << 50, 0, 0, 0;
    CHECK(rhs(ModelKind::SEIZ, seiz, {virgin, 0}).isZero(0));
}

TEST_CASE("rhs: errors")
{
    ModelParams p;
    p.beta = 1;
    p.nu = 1;
    p.n_total = 10;
    Vector wrong(3);
    wrong << 5, 5, 0;
    CHECK_THROWS_AS(rhs(ModelKind::SIS, p, {wrong, 0}), StructuralError);
    Vector neg(2);
    neg << 11, -1;
    CHECK_THROWS_AS(rhs(ModelKind::SIS, p, {neg, 0}), DomainError);
    CHECK_NOTHROW(rhs(ModelKind::SIS, p, {neg, 0}, 2.0));
}

TEST_CASE("rhs: closed models conserve the population")
{
    std::mt19937_64 rng(7);
    const ModelKind kinds[] = {ModelKind::SIS, ModelKind::SIR, ModelKind::STR, ModelKind::SEIZ};
    for (ModelKind kind : kinds) {
        for (int trial = 0; trial < 200; ++trial) {
            ModelParams p;
            p.beta = testing::uniform(rng, 0, 5);
            p.nu = testing::uniform(rng, 0, 5);
            p.n_total = testing::uniform(rng, 10, 2000);
            if (kind == ModelKind::SEIZ) {
                p.b = testing::uniform(rng, 0, 5);
                p.rho = testing::uniform(rng, 0, 5);
                p.epsilon = testing::uniform(rng, 0, 5);
                p.l_prob = testing::uniform(rng, 0, 1);
                p.p_prob = testing::uniform(rng, 0, 1);
            }
            const int n = compartment_count(kind);
            Vector state(n);
            ScalarType remaining = p.n_total;
            for (int i = 0; i + 1 < n; ++i) {
                state[i] = testing::uniform(rng, 0, remaining);
                remaining -= state[i];
            }
            state[n - 1] = remaining;
            const Vector d = rhs(kind, p, {state, 0});
            const ScalarType scale = d.cwiseAbs().sum() + p.n_total;
            CHECK(std::abs(d.sum()) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("rhs: SEIZ flux routing")
{
    // With p = l = 1 nothing flows into the delayed pool directly.
    ModelParams p;
    p.beta = 0.8;
    p.b = 0.6;
    p.rho = 0.0;
    p.epsilon = 0.0;
    p.l_prob = 1.0;
    p.p_prob = 1.0;
    p.n_total = 10;
    Vector state(4);
    state << 4, 3, 2, 1;
    const Vector d = rhs(ModelKind::SEIZ, p, {state, 0});
    CHECK(d[2] == 0.0);
    CHECK(d[1] == doctest::Approx(0.8 / 10 * 4 * 3));
    CHECK(d[3] == doctest::Approx(0.6 / 10 * 4 * 1));
}

TEST_CASE("logistic closed form")
{
    ModelParams p;
    p.beta = 0.1;
    p.n_total = 100;
    CHECK(logistic_closed_form(p, 50, 0) == doctest::Approx(50).epsilon(1e-14));
    CHECK(logistic_closed_form(p, 1, 1e4) == doctest::Approx(100).epsilon(1e-12));
    CHECK_THROWS_AS(logistic_closed_form(p, 0, 1), DomainError);
    CHECK_THROWS_AS(logistic_closed_form(p, 100, 1), DomainError);

    // Growth from i0 stays monotone nondecreasing.
    ScalarType prev = 0;
    for (ScalarType t = 0; t <= 2.0; t += 0.05) {
        const ScalarType v = logistic_closed_form(p, 1, t);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("logistic closed form satisfies its ODE")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        ModelParams p;
        p.beta = testing::uniform(rng, 0.01, 0.5);
        p.n_total = testing::uniform(rng, 20, 500);
        const ScalarType i0 = testing::uniform(rng, 0.5, p.n_total / 2);
        const ScalarType t_max = 0.8 * critical_time(p, i0);
        const ScalarType t = testing::uniform(rng, 0, t_max);
        const ScalarType h = 1e-4 / (p.beta * p.n_total);
        const ScalarType fd = (logistic_closed_form(p, i0, t + h) -
                               logistic_closed_form(p, i0, t - h < 0 ? 0 : t - h)) /
                              (t - h < 0 ? t + h : 2 * h);
        const ScalarType i_t = logistic_closed_form(p, i0, t);
        const ScalarType analytic = p.beta * i_t * (p.n_total - i_t);
        CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
    }
}

TEST_CASE("critical time")
{
    ModelParams p;
    p.beta = 0.1;
    p.n_total = 100;
    const ScalarType tc = critical_time(p, 1);
    CHECK(tc == doctest::Approx(std::log(99.0 * 99.0) / 10.0).epsilon(1e-14));
    CHECK(logistic_closed_form(p, 1, tc) == doctest::Approx(99.0).epsilon(1e-12));

    // T_c scales as 1/beta.
    ModelParams p2 = p;
    p2.beta = 0.2;
    CHECK(critical_time(p2, 1) == doctest::Approx(tc / 2).epsilon(1e-14));

    // Nearly saturated start: T_c -> 0.
    CHECK(critical_time(p, 99 - 1e-9) == doctest::Approx(0.0).epsilon(1e-6));

    CHECK_THROWS_AS(critical_time(p, 99.5), DomainError);
    ModelParams small;
    small.beta = 1;
    small.n_total = 2;
    CHECK_THROWS_AS(critical_time(small, 0.5), DomainError);
}

TEST_CASE("critical time agrees with bisection on the closed form")
{
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        ModelParams p;
        p.beta = testing::uniform(rng, 0.01, 1.0);
        p.n_total = testing::uniform(rng, 10, 5000);
        const ScalarType i0 = testing::uniform(rng, 0.1, p.n_total / 2);
        const ScalarType target = p.n_total - 1;

        ScalarType lo = 0, hi = 1 / (p.beta * p.n_total);
        while (logistic_closed_form(p, i0, hi) < target) {
            hi *= 2;
        }
        for (int iter = 0; iter < 200; ++iter) {
            const ScalarType mid = 0.5 * (lo + hi);
            (logistic_closed_form(p, i0, mid) < target ? lo : hi) = mid;
        }
        const ScalarType tc = critical_time(p, i0);
        CHECK(tc == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
        CHECK(std::abs(logistic_closed_form(p, i0, tc) - target) < 1e-9 * p.n_total);
    }
}

TEST_CASE("SIS limits")
{
    ModelParams p;
    p.beta = 2;
    p.nu = 1;
    p.n_total = 1000;
    auto [s_inf, i_inf] = sis_limits(p);
    CHECK(s_inf == doctest::Approx(500.0));
    CHECK(i_inf == doctest::Approx(500.0));

    p.beta = 1;
    p.nu = 1;
    auto boundary = sis_limits(p);
    CHECK(boundary.first == 1000.0);
    CHECK(boundary.second == 0.0);

    p.beta = 1;
    p.nu = 2;
    p.n_total = 300;
    auto eradicated = sis_limits(p);
    CHECK(eradicated.first == 300.0);
    CHECK(eradicated.second == 0.0);
}

TEST_CASE("reproduction number")
{
    ModelParams p;
    p.beta = 1.5;
    p.nu = 1.5;
    p.n_total = 100;
    CHECK(reproduction_number(ModelKind::SIS, p, 0) == doctest::Approx(1.0));

    p.beta = 3;
    p.nu = 2;
    CHECK(reproduction_number(ModelKind::SIR, p, p.n_total) == doctest::Approx(1.5));

    // SIR with s0 = N collapses to the SIS ratio.
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        ModelParams q;
        q.beta = testing::uniform(rng, 0.1, 5);
        q.nu = testing::uniform(rng, 0.1, 5);
        q.n_total = testing::uniform(rng, 1, 1e6);
        CHECK(reproduction_number(ModelKind::SIR, q, q.n_total) ==
              doctest::Approx(reproduction_number(ModelKind::SIS, q, 0)).epsilon(1e-14));
    }

    ModelParams no_cure;
    no_cure.beta = 1;
    no_cure.nu = 0;
    no_cure.n_total = 10;
    CHECK_THROWS_AS(reproduction_number(ModelKind::SIS, no_cure, 0), DomainError);
    CHECK_THROWS_AS(reproduction_number(ModelKind::LogisticSI, p, 1), StructuralError);
}

TEST_CASE("robustness metric")
{
    ModelParams p;
    p.beta = 0.5;
    p.b = 0.2;
    p.p_prob = 0.5;
    p.l_prob = 0.5;
    p.rho = 0.1;
    p.epsilon = 0.15;
    p.n_total = 1;
    CHECK(robustness_metric(p) == doctest::Approx(1.4).epsilon(1e-14));

    ModelParams closed = p;
    closed.p_prob = 1;
    closed.l_prob = 1;
    CHECK(robustness_metric(closed) == 0.0);

    ModelParams stuck = p;
    stuck.rho = 0;
    stuck.epsilon = 0;
    CHECK_THROWS_AS(robustness_metric(stuck), DomainError);

    // Degree-0 homogeneity under joint rate scaling.
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const ScalarType c = testing::uniform(rng, 0.01, 100);
        ModelParams scaled = p;
        scaled.beta *= c;
        scaled.b *= c;
        scaled.rho *= c;
        scaled.epsilon *= c;
        CHECK(robustness_metric(scaled) == doctest::Approx(robustness_metric(p)).epsilon(1e-12));
    }
}
