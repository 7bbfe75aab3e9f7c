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

#include <string>
#include <vector>

#include "isacpilot/common.hpp"
#include "isacpilot/rng.hpp"

namespace isacpilot
{

// ---- Array geometry ---------------------------------------------------------

/// Uniform linear transmit/receive arrays; spacings in wavelengths.
struct ArrayGeometry
{
    int n_tx = 1;
    int n_rx = 1;
    double spacing_tx = 0.5;
    double spacing_rx = 0.5;

    void validate() const;
};

/// ULA response: entry m is exp(j 2 pi spacing m sin(theta)).
CVector steering_vector(int n, double spacing_wavelengths, double theta_deg);

// ---- GMM channel prior ------------------------------------------------------

/// Per-user Gaussian mixture channel prior h ~ sum_n w_n CN(mu_n, R_n).
struct GmmUserModel
{
    RVector weights;
    std::vector<CVector> means;
    std::vector<CMatrix> covariances;
    double noise_std = 1.0;
    double mean_aoa_deg = 0.0;
    double azimuth_spread_deg = 0.0;

    int n_tx() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
    int n_components() const { return static_cast<int>(weights.size()); }

    /// Checks the probability vector, Hermitian/PSD covariances and shapes.
    void validate() const;
};

enum class MeanPolicyKind
{
    zero,
    steering,
};

/// How GMM component means are chosen: all zero, or scale * a(theta_center).
struct MeanPolicy
{
    MeanPolicyKind kind = MeanPolicyKind::steering;
    double scale = 1.0;

    std::string describe() const;
};

/// Laplacian angular weights evaluated on `grid_deg` and renormalized to sum 1.
RVector laplacian_weights(double mean_aoa_deg, double spread_deg, const std::vector<double>& grid_deg);

/// Midpoint-rule approximation of the integral of a(theta) a(theta)^H over
/// [lo, hi]; the measure is in radians, so every diagonal entry equals the
/// region width in radians.
CMatrix region_covariance(const ArrayGeometry& geometry, double region_lo_deg, double region_hi_deg,
                          int quadrature_points);

/// Splits [-90, 90] degrees into `n_components` equal regions and builds the
/// mixture: Laplacian weights at region centers, region covariances, and
/// means per `mean_policy`.
GmmUserModel build_user_model(const ArrayGeometry& geometry, double mean_aoa_deg, double spread_deg,
                              int n_components, double noise_std, const MeanPolicy& mean_policy,
                              int quadrature_points = 8);

/// Factor F with F F^H = R from a Hermitian eigendecomposition; tiny negative
/// eigenvalues are clamped, anything below -1e-8 is a NumericError.
CMatrix covariance_factor(const CMatrix& covariance);

/// As covariance_factor, keeping only eigen-directions above
/// rel_tol * (largest eigenvalue); N_t x r with r possibly 0.
CMatrix low_rank_factor(const CMatrix& covariance, double rel_tol = 1e-13);

/// Draws one channel: picks component n with probability w_n, then adds
/// CN(0, R_n) to mu_n.
CVector sample_channel(const GmmUserModel& model, RngStream& rng);

/// Same distribution as sample_channel, with all covariance factors computed
/// once up front. Use in Monte Carlo loops.
class ChannelSampler
{
  public:
    explicit ChannelSampler(const GmmUserModel& model);

    CVector sample(RngStream& rng) const;
    /// Also reports which mixture component was drawn.
    CVector sample(RngStream& rng, int& component) const;

  private:
    const GmmUserModel* model_;
    std::vector<CMatrix> factors_;
};

int draw_component(const RVector& weights, RngStream& rng);

// ---- Sensing scene ----------------------------------------------------------

struct ClutterSource
{
    double angle_deg = 0.0;
    double power = 0.0;
};

/// Monostatic radar scene: one target look direction plus point clutter.
struct SensingScene
{
    double target_angle_deg = 0.0;
    double target_power = 0.0;
    std::vector<ClutterSource> clutter;
    double radar_noise_std = 1.0;
    ArrayGeometry geometry;

    void validate() const;
};

// ---- Pilot matrix -----------------------------------------------------------

/// || P P^H - I ||_F.
double stiefel_residual(const CMatrix& pilot);

/// L x N_t pilot with orthonormal rows (unit per-slot power), L < N_t.
class PilotMatrix
{
  public:
    static constexpr double feasibility_tol = 1e-8;

    /// Throws DimensionError if L >= N_t, InvalidParameter if the rows are not
    /// orthonormal within feasibility_tol.
    explicit PilotMatrix(CMatrix entries);

    const CMatrix& matrix() const noexcept { return entries_; }
    Eigen::Index length() const noexcept { return entries_.rows(); }
    Eigen::Index n_tx() const noexcept { return entries_.cols(); }
    double residual() const { return stiefel_residual(entries_); }

  private:
    CMatrix entries_;
};

/// y = P h + n, n ~ CN(0, noise_std^2 I).
CVector simulate_pilot_rx(const CMatrix& pilot, const CVector& channel, double noise_std, RngStream& rng);

} // namespace isacpilot
