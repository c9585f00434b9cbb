// Copyright 2026 The SES Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ses {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Projection of a full-space state whose single-excitation weight vanishes.
class DegenerateProjection : public Error {
public:
    using Error::Error;
};

/// Raised when a coupling tensor breaks one of the conditions needed for a
/// real SES Hamiltonian.
class CouplingConditionViolated : public Error {
public:
    enum class Condition { ExchangeComponent, SymmetricXY };

    CouplingConditionViolated(Condition which, const std::string& what)
        : Error(what), which_(which) {}

    Condition which() const noexcept { return which_; }

private:
    Condition which_;
};

class InfeasibleBounds : public Error {
public:
    using Error::Error;
};

class AsymmetricInput : public Error {
public:
    using Error::Error;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// Full-space problem too large for the 2^n memory guard.
class SizeLimitError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Configuration document that does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace ses
