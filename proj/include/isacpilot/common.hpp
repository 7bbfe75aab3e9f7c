// SPDX-License-Identifier: Apache-2.0
//
// isacpilot - mutual-information pilot design for integrated sensing and communication
// Copyright (C) 2026 The isacpilot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace isacpilot
{

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * pi / 180.0; }

// Error hierarchy. The CLI maps these onto exit codes; everything numeric
// (NumericError and subclasses) becomes exit 3.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error
{
  public:
    using Error::Error;
};

class DimensionError : public Error
{
  public:
    using Error::Error;
};

class UnsupportedModel : public Error
{
  public:
    using Error::Error;
};

class NumericError : public Error
{
  public:
    using Error::Error;
};

class SingularityError : public NumericError
{
  public:
    using NumericError::NumericError;
};

// Raised when a closed-form surrogate leaves its domain (e.g. the argument of
// a logarithm becomes non-positive). Carries the offending value.
class DomainError : public NumericError
{
  public:
    DomainError(const std::string& what, double value)
        : NumericError(what + " (value " + std::to_string(value) + ")"), value_(value)
    {
    }
    /// Same value, message prefixed with `context`.
    DomainError(const std::string& context, const DomainError& inner)
        : NumericError(context + inner.what()), value_(inner.value_)
    {
    }
    double value() const noexcept { return value_; }

  private:
    double value_;
};

} // namespace isacpilot
