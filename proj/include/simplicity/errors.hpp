/*
 Copyright 2026 The Simplicity Mechanics Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace simplicity {

// Error taxonomy shared by every module. The CLI maps each family onto an
// exit code (see scenario.hpp).

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition (shape, sign, finiteness).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A coordinate lies outside its quantization range.
class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A bit string does not parse under the expected code.
class DecodeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Step or segment index outside the valid window.
class IndexError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// The requested operation is not defined for this potential or metric.
class CapabilityError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Physics-domain failures: singular forces, turning points, acausal endpoints.
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

class InfeasibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double final_residual)
        : Error(what), final_residual_(final_residual) {}

    double final_residual() const noexcept { return final_residual_; }

private:
    double final_residual_;
};

}  // namespace simplicity
