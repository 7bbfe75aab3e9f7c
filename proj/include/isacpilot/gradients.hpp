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

// Closed-form gradients of the pilot-design objectives, in the conjugate
// convention G = df/dP* (see mi_metrics.hpp), and a central-difference
// oracle that checks them.

#include <functional>

#include "isacpilot/mi_metrics.hpp"

namespace isacpilot
{

CMatrix grad_comm_mi_user(const CMatrix& pilot, const GmmUserModel& model);

/// Gradient of the sensing MI in the requested formula (approx by default,
/// the optimized objective). Throws DomainError where the value would.
CMatrix grad_sensing_mi(const CMatrix& pilot, const SensingScene& scene,
                        SensingFormula formula = SensingFormula::approx);

/// rho * sum_k w_k grad_comm_k + (1 - rho) * grad_sense, with the formula
/// taken from the objective.
CMatrix grad_isac(const CMatrix& pilot, const IsacObjective& objective);

using ScalarFunction = std::function<double(const CMatrix&)>;
using GradientFunction = std::function<CMatrix(const CMatrix&)>;

/// Fourth-order central differences over every real and imaginary
/// coordinate, with step `step * max(1, |P_ij|)`. Compares df/dRe = 2 Re G
/// and df/dIm = 2 Im G and returns the largest
/// |analytic - numeric| / max(1e-12, |numeric|).
double finite_diff_check(const ScalarFunction& objective, const GradientFunction& gradient, const CMatrix& pilot,
                         double step = 1e-4);

} // namespace isacpilot
