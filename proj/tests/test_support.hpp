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
#ifndef MEMETIC_TEST_SUPPORT_HPP
#define MEMETIC_TEST_SUPPORT_HPP

#include "memetic/models.hpp"
#include "memetic/types.hpp"

#include <random>
#include <vector>

namespace memetic::testing {

// Fixed-step classical RK4, independent of the adaptive integrator.
// Reference oracle only; no error control.
inline Matrix rk4_fixed(ModelKind kind, const ModelParams& params, const Vector& initial,
                        const std::vector<ScalarType>& sample_times, ScalarType dt)
{
    Matrix out(static_cast<Eigen::Index>(sample_times.size()), initial.size());
    Vector y = initial;
    ScalarType t = sample_times.front();
    out.row(0) = y.transpose();
    for (std::size_t s = 1; s < sample_times.size(); ++s) {
        const ScalarType target = sample_times[s];
        while (t < target) {
            const ScalarType h = std::min(dt, target - t);
            const Vector k1 = rhs_raw(kind, params, y);
            const Vector k2 = rhs_raw(kind, params, y + 0.5 * h * k1);
            const Vector k3 = rhs_raw(kind, params, y + 0.5 * h * k2);
            const Vector k4 = rhs_raw(kind, params, y + h * k3);
            y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
            t += h;
        }
        out.row(static_cast<Eigen::Index>(s)) = y.transpose();
        t = target;
    }
    return out;
}

inline std::vector<ScalarType> linspace(ScalarType lo, ScalarType hi, int n)
{
    std::vector<ScalarType> v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = lo + (hi - lo) * (static_cast<ScalarType>(i) / (n - 1));
    }
    v.front() = lo;
    v.back()  = hi;
    return v;
}

inline ScalarType uniform(std::mt19937_64& rng, ScalarType lo, ScalarType hi)
{
    return lo + (hi - lo) * (static_cast<ScalarType>(rng() >> 11) * 0x1.0p-53);
}

} // namespace memetic::testing

#endif // MEMETIC_TEST_SUPPORT_HPP
