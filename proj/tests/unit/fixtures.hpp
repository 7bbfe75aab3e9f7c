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

// Small random instances shared by the unit tests.

#include <vector>

#include "isacpilot/array_channel.hpp"
#include "isacpilot/mi_metrics.hpp"
#include "isacpilot/stiefel.hpp"

namespace fixtures
{

using namespace isacpilot;

/// Random GMM with N_k components: Dirichlet-ish weights, random means and
/// random low-rank-plus-ridge covariances.
inline GmmUserModel random_gmm(int n_tx, int n_k, double noise_std, RngStream& rng)
{
    GmmUserModel m;
    m.noise_std = noise_std;
    m.weights.resize(n_k);
    for (int n = 0; n < n_k; ++n)
    {
        m.weights(n) = 0.2 + rng.uniform();
        m.means.push_back(rng.complex_normal_vector(n_tx));
        const CMatrix f = rng.complex_normal_matrix(n_tx, 2);
        CMatrix r = f * f.adjoint();
        r.diagonal().array() += 0.05;
        m.covariances.push_back(0.5 * (r + r.adjoint()));
    }
    m.weights /= m.weights.sum();
    return m;
}

inline SensingScene random_scene(int n_tx, int n_rx, int q, RngStream& rng)
{
    SensingScene s;
    s.geometry = ArrayGeometry{n_tx, n_rx, 0.5, 0.5};
    s.target_angle_deg = -60.0 + 120.0 * rng.uniform();
    s.target_power = 0.5 + rng.uniform();
    s.radar_noise_std = 0.7 + 0.6 * rng.uniform();
    for (int i = 0; i < q; ++i)
        s.clutter.push_back(ClutterSource{-80.0 + 160.0 * rng.uniform(), 0.5 + rng.uniform()});
    return s;
}

inline CMatrix random_unitary(int n, RngStream& rng)
{
    Eigen::HouseholderQR<CMatrix> qr(rng.complex_normal_matrix(n, n));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

inline IsacObjective random_objective(int n_tx, int n_rx, int k, int n_k, int q, double rho, RngStream& rng)
{
    IsacObjective obj;
    obj.rho = rho;
    for (int i = 0; i < k; ++i)
        obj.users.push_back(random_gmm(n_tx, n_k, 0.5 + 0.5 * rng.uniform(), rng));
    obj.user_weights = RVector::Constant(k, 1.0 / k);
    obj.scene = random_scene(n_tx, n_rx, q, rng);
    return obj;
}

} // namespace fixtures
