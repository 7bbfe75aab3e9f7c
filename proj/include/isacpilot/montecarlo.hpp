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

// Monte Carlo evaluation of designed pilots. Every experiment derives trial t
// from rng.substream(t), so results do not depend on the worker count.

#include <cstdint>
#include <vector>

#include "isacpilot/mi_metrics.hpp"

namespace isacpilot
{

// ---- Radar detection ----------------------------------------------------------

enum class Hypothesis
{
    h0, ///< clutter plus noise
    h1, ///< target plus clutter plus noise
};

/// Swerling-I frame: sum_i gamma_i mu_i + n, gamma_i ~ CN(0, nu_i), with the
/// target term present only under H1. Draw order: target gain (H1 only),
/// clutter gains in scene order, then the noise vector.
CVector simulate_radar_frame(const CMatrix& pilot, const SensingScene& scene, Hypothesis hypothesis, RngStream& rng);

/// Clairvoyant estimator-correlator T = |mu_0^H C^{-1} y|^2 with
/// C = sum_i nu_i mu_i mu_i^H + sigma_r^2 I from the true scene.
class RadarDetector
{
  public:
    RadarDetector(const CMatrix& pilot, const SensingScene& scene);

    double statistic(const CVector& y) const;
    const CVector& filter() const noexcept { return filter_; }

  private:
    CVector filter_;
};

double detector_statistic(const CVector& y, const CMatrix& pilot, const SensingScene& scene);

struct RocPoint
{
    double p_fa_target = 0.0;
    double threshold = 0.0;
    double p_fa = 0.0;          ///< empirical H0 exceedance rate at the threshold
    double p_d = 0.0;
    bool under_resolved = false; ///< target below 1 / n_trials
};

struct RocCurve
{
    std::vector<RocPoint> points; ///< sorted by p_fa_target
};

/// Trial t draws H0 from rng.substream(t).substream(0) and H1 from
/// rng.substream(t).substream(1). The threshold for target p is the k-th
/// largest H0 statistic with k = floor(p n) + 1, so exactly floor(p n) H0
/// statistics exceed it (ties aside); p_d counts H1 statistics strictly above.
RocCurve roc_curve(const CMatrix& pilot, const SensingScene& scene, int n_trials, std::vector<double> p_fa_grid,
                   const RngStream& rng);

// ---- GMM-MMSE channel estimation -----------------------------------------------

/// Per-component posterior-mean terms for one (pilot, model) pair, computed
/// once and reused across observations.
class GmmMmseEstimator
{
  public:
    GmmMmseEstimator(const CMatrix& pilot, const GmmUserModel& model);

    /// sum_n p_n (mu_n + R_n P^H S_n^{-1} (y - P mu_n)). If `responsibilities`
    /// is non-null it receives p (length N_k).
    CVector estimate(const CVector& y, RVector* responsibilities = nullptr) const;

  private:
    const GmmUserModel* model_;
    std::vector<int> active_;                    ///< components with nonzero weight
    std::vector<Eigen::LLT<CMatrix>> sigma_llt_;
    std::vector<CMatrix> gain_;                  ///< R_n P^H, applied after the solve
    std::vector<CVector> projected_mean_;        ///< P mu_n
    std::vector<double> log_norm_;               ///< log w_n - log det S_n
};

CVector gmm_mmse_estimate(const CVector& y, const CMatrix& pilot, const GmmUserModel& model);

struct NmseResult
{
    std::vector<double> per_user; ///< mean of ||h - h_hat||^2 / ||h||^2 per user
    double pooled = 0.0;          ///< mean over all users and trials
    int skipped = 0;              ///< zero-norm channel draws left out
};

/// Trial t, user k uses rng.substream(t).substream(k).
NmseResult nmse_experiment(const CMatrix& pilot, const std::vector<GmmUserModel>& users, int n_trials,
                           const RngStream& rng);

// ---- Data link ----------------------------------------------------------------

/// Gray-labeled square 64-QAM with unit average energy. Bits 5..3 select the
/// in-phase level and bits 2..0 the quadrature level.
cd qam64_map(unsigned label);
unsigned qam64_demap(cd symbol);

/// W = H^H (H H^H)^{-1} with unit-norm columns, for estimates H (K x N_t).
/// Throws SingularityError if H H^H is not positive definite.
CMatrix zf_precode(const CMatrix& channel_estimates);

struct SerPoint
{
    double snr_db = 0.0;
    double ser = 0.0;
    std::int64_t errors = 0;
    std::int64_t symbols = 0;
};

/// ceil(n_symbols / block_len) channel blocks; block b uses
/// rng.substream(b). Per block: draw every user's channel, estimate it from
/// the pilot observation, precode with ZF on the estimates, send block_len
/// 64-QAM symbols per user through the true channels and hard-decide after
/// equalizing by the estimated gain h_hat_k^T w_k. Noise variance is
/// 10^(-snr/10) per receive sample with unit-norm precoder columns; the same
/// channels, symbols and unit noise draws are reused at every SNR point.
std::vector<SerPoint> ser_experiment(const CMatrix& pilot, const std::vector<GmmUserModel>& users,
                                     const std::vector<double>& snr_grid_db, int n_symbols, int block_len,
                                     const RngStream& rng);

// ---- Statistics ------------------------------------------------------------------

/// Spearman rank correlation with average ranks for ties. Throws
/// InvalidParameter for mismatched lengths or fewer than two points; returns 0
/// when either sample is constant.
double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

// ---- Baseline pilots ------------------------------------------------------------

/// First L rows of the unitary N_t-point DFT matrix.
CMatrix dft_pilot(int l, int n_tx);

/// Top-L eigenvectors U_L of the user-averaged channel covariance
/// (1/K) sum_k Cov(h_k), returned as U_L^H.
CMatrix eigen_pilot(int l, const std::vector<GmmUserModel>& users);

} // namespace isacpilot
