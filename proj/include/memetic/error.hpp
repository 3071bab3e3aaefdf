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
#ifndef MEMETIC_ERROR_HPP
#define MEMETIC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace memetic {

/// Invalid value in an otherwise well-formed request (bad rate, state, ...).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched shapes, unknown compartments, wrong model for an operation.
class StructuralError : public std::runtime_error {
public:
    explicit StructuralError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Step size collapsed below the resolvable scale of the time span.
class StiffnessError : public std::runtime_error {
public:
    explicit StiffnessError(const std::string& msg) : std::runtime_error(msg) {}
};

/// The integrator produced a state violating a model invariant.
class IntegratorFault : public std::runtime_error {
public:
    explicit IntegratorFault(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid solver or run configuration (stability bound, grid, spans).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A measurement could not be taken from the produced data.
class MeasurementError : public std::runtime_error {
public:
    explicit MeasurementError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unreadable or malformed input data.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An optimization run failed to produce any usable trial point.
class FitFailure : public std::runtime_error {
public:
    explicit FitFailure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace memetic

#endif // MEMETIC_ERROR_HPP
