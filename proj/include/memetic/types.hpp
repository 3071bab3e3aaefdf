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
#ifndef MEMETIC_TYPES_HPP
#define MEMETIC_TYPES_HPP

#include <Eigen/Dense>
#include <string>

namespace memetic {

using ScalarType = double;
using Vector     = Eigen::VectorX<ScalarType>;
using Matrix     = Eigen::MatrixX<ScalarType>;

inline constexpr const char* version_string = "0.1.0";

/// Formats a scalar with enough digits to round-trip through text.
std::string format_scalar(ScalarType v);

} // namespace memetic

#endif // MEMETIC_TYPES_HPP
