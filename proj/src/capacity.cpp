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

#include <algorithm>
#include <cmath>

#include "isacpilot/mi_metrics.hpp"
#include "isacpilot/montecarlo.hpp"
#include "isacpilot/parallel.hpp"

namespace isacpilot
{

double c_worst_estimate(const CMatrix& pilot, const std::vector<GmmUserModel>& users, int block_len, int trials,
                        const RngStream& rng)
{
    if (trials < 1)
        throw InvalidParameter("c_worst_estimate: trials must be >= 1");
    if (users.empty())
        throw InvalidParameter("c_worst_estimate: at least one user required");
    const double prefactor = training_prefactor(block_len, static_cast<int>(pilot.rows()));
    const auto k_users = static_cast<Eigen::Index>(users.size());
    const auto n_tx = pilot.cols();

    std::vector<ChannelSampler> samplers;
    std::vector<GmmMmseEstimator> estimators;
    for (const auto& u : users)
    {
        samplers.emplace_back(u);
        estimators.emplace_back(pilot, u);
    }

    const auto n = static_cast<std::size_t>(trials);
    std::vector<CMatrix> estimates(n);
    std::vector<double> err(n);
    std::vector<double> energy(n);
    parallel_for(n, [&](std::size_t t) {
        const RngStream trial = rng.substream(t);
        CMatrix h_hat(k_users, n_tx);
        double e = 0.0;
        double p = 0.0;
        for (Eigen::Index k = 0; k < k_users; ++k)
        {
            const auto ku = static_cast<std::size_t>(k);
            RngStream s = trial.substream(ku);
            const CVector h = samplers[ku].sample(s);
            const CVector y = simulate_pilot_rx(pilot, h, users[ku].noise_std, s);
            const CVector est = estimators[ku].estimate(y);
            e += (h - est).squaredNorm();
            p += h.squaredNorm();
            h_hat.row(k) = est.transpose();
        }
        estimates[t] = std::move(h_hat);
        err[t] = e;
        energy[t] = p;
    });

    const double total_energy = ordered_sum(energy);
    if (!(total_energy > 0.0))
        throw NumericError("c_worst_estimate: all channel draws have zero energy");
    const double error_variance = ordered_sum(err) / total_energy;
    // An error variance above 1 would make the effective SNR negative; the
    // link then carries nothing.
    const double snr = std::max(0.0, effective_snr(error_variance));

    std::vector<double> capacity(n);
    parallel_for(n, [&](std::size_t t) {
        const CMatrix& h_hat = estimates[t];
        const double power = h_hat.squaredNorm() / static_cast<double>(k_users * n_tx);
        if (!(power > 0.0))
        {
            capacity[t] = 0.0;
            return;
        }
        const CMatrix normalized = h_hat / std::sqrt(power);
        CMatrix m = CMatrix::Identity(k_users, k_users);
        m.noalias() += (snr / static_cast<double>(n_tx)) * (normalized.conjugate() * normalized.transpose());
        Eigen::LLT<CMatrix> llt(m);
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < k_users; ++i)
            log_det += 2.0 * std::log(llt.matrixLLT()(i, i).real());
        capacity[t] = log_det;
    });
    return prefactor * ordered_sum(capacity) / static_cast<double>(n);
}

} // namespace isacpilot
