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

#include "isacpilot/gradients.hpp"

#include <algorithm>
#include <cmath>

namespace isacpilot
{

CMatrix grad_comm_mi_user(const CMatrix& pilot, const GmmUserModel& model)
{
    return CommMiEvaluator(model).value_and_gradient(pilot).gradient;
}

CMatrix grad_sensing_mi(const CMatrix& pilot, const SensingScene& scene, SensingFormula formula)
{
    return SensingMiEvaluator(scene).value_and_gradient(pilot, formula).gradient;
}

CMatrix grad_isac(const CMatrix& pilot, const IsacObjective& objective)
{
    return IsacEvaluator(objective).evaluate(pilot, true).gradient;
}

double finite_diff_check(const ScalarFunction& objective, const GradientFunction& gradient, const CMatrix& pilot,
                         double step)
{
    if (!(step > 0.0))
        throw InvalidParameter("finite_diff_check: step must be > 0");
    const CMatrix analytic = gradient(pilot);
    if (analytic.rows() != pilot.rows() || analytic.cols() != pilot.cols())
        throw DimensionError("finite_diff_check: gradient shape differs from the pilot");

    const auto derivative = [&](Eigen::Index i, Eigen::Index j, cd direction) {
        const double h = step * std::max(1.0, std::abs(pilot(i, j)));
        CMatrix x = pilot;
        const auto eval = [&](double t) {
            x(i, j) = pilot(i, j) + t * direction;
            return objective(x);
        };
        const double fp2 = eval(2.0 * h);
        const double fp1 = eval(h);
        const double fm1 = eval(-h);
        const double fm2 = eval(-2.0 * h);
        return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    };

    double worst = 0.0;
    for (Eigen::Index j = 0; j < pilot.cols(); ++j)
    {
        for (Eigen::Index i = 0; i < pilot.rows(); ++i)
        {
            const double num_re = derivative(i, j, cd(1.0, 0.0));
            const double num_im = derivative(i, j, cd(0.0, 1.0));
            const double ana_re = 2.0 * analytic(i, j).real();
            const double ana_im = 2.0 * analytic(i, j).imag();
            worst = std::max(worst, std::abs(ana_re - num_re) / std::max(1e-12, std::abs(num_re)));
            worst = std::max(worst, std::abs(ana_im - num_im) / std::max(1e-12, std::abs(num_im)));
        }
    }
    return worst;
}

} // namespace isacpilot
