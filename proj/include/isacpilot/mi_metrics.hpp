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

// Mutual-information objectives for pilot design.
//
// All values are in nats. Gradients use the conjugate (Wirtinger) convention
// G = df/dP*, so a real perturbation E of the pilot changes f by
// 2 Re tr(G^H E) to first order. The real-coordinate steepest-ascent
// direction is therefore 2 G.
//
// The communication metric is a Taylor-linearized entropy surrogate and
// includes its pilot-independent constant -L log(e sigma^2); it can be
// negative.

#include <optional>
#include <vector>

#include "isacpilot/array_channel.hpp"

namespace isacpilot
{

enum class SensingFormula
{
    approx, ///< diagonal (large-N_r) Woodbury form; the optimized objective
    exact,  ///< exact quadratic form through the clutter-plus-noise inverse
};

/// Weighted-sum ISAC objective rho * sum_k w_k M_k + (1 - rho) * M_sense.
struct IsacObjective
{
    double rho = 0.5;
    RVector user_weights;
    std::vector<GmmUserModel> users;
    SensingScene scene;
    SensingFormula sensing_formula = SensingFormula::approx;

    void validate() const;
};

inline double nats_to_bits(double nats) { return nats / std::numbers::ln2; }

// ---- Evaluators -------------------------------------------------------------
//
// The evaluators precompute everything that does not depend on the pilot
// (low-rank covariance factors, steering vectors) so that repeated
// value/gradient evaluation inside the optimizer stays cheap. Each call is
// self-contained and const: safe to share across threads.

struct ValueAndGradient
{
    double value = 0.0;
    CMatrix gradient;
};

class CommMiEvaluator
{
  public:
    explicit CommMiEvaluator(const GmmUserModel& model);

    double value(const CMatrix& pilot) const;
    ValueAndGradient value_and_gradient(const CMatrix& pilot) const;

    const GmmUserModel& model() const noexcept { return *model_; }
    /// Truncated factors F_n with F_n F_n^H = R_n.
    const std::vector<CMatrix>& factors() const noexcept { return factors_; }

  private:
    ValueAndGradient evaluate(const CMatrix& pilot, bool with_gradient) const;

    const GmmUserModel* model_;
    std::vector<CMatrix> factors_;
    CMatrix centered_means_; ///< column n is sum_n' w_n' mu_n' - mu_n
};

class SensingMiEvaluator
{
  public:
    explicit SensingMiEvaluator(const SensingScene& scene);

    double value(const CMatrix& pilot, SensingFormula formula) const;
    ValueAndGradient value_and_gradient(const CMatrix& pilot, SensingFormula formula) const;

    /// nu_0 mu_0^H (sum_i nu_i mu_i mu_i^H + sigma_r^2 I)^{-1} mu_0, exactly.
    double target_quadratic_form(const CMatrix& pilot) const;

    /// Whitened matched filter w = (R_cc + sigma_r^2 I)^{-1} mu_0, length N_r L.
    CVector whitened_target(const CMatrix& pilot) const;

    const SensingScene& scene() const noexcept { return *scene_; }

  private:
    ValueAndGradient evaluate(const CMatrix& pilot, SensingFormula formula, bool with_gradient) const;

    const SensingScene* scene_;
    std::vector<double> angles_;  ///< target first, then clutter with nonzero power
    std::vector<double> powers_;
    CMatrix tx_steering_;         ///< N_t x (1 + Q') columns a_t(theta_i)
    CMatrix rx_gram_;             ///< c_ij = a_r(theta_i)^H a_r(theta_j)
};

struct IsacEvaluation
{
    double objective = 0.0;
    double comm = 0.0;           ///< weighted communication MI
    double sense = 0.0;
    std::vector<double> comm_per_user;
    CMatrix gradient;            ///< empty unless requested
};

class IsacEvaluator
{
  public:
    explicit IsacEvaluator(const IsacObjective& objective);

    IsacEvaluation evaluate(const CMatrix& pilot, bool with_gradient) const;

    const IsacObjective& objective() const noexcept { return *objective_; }

  private:
    const IsacObjective* objective_;
    std::vector<CommMiEvaluator> comm_;
    SensingMiEvaluator sense_;
};

// ---- Free-function metrics --------------------------------------------------

/// Communication MI surrogate of one user, log-sum-exp evaluated.
double comm_mi_user(const CMatrix& pilot, const GmmUserModel& model);

double comm_mi_weighted(const CMatrix& pilot, const IsacObjective& objective);

/// vec() of the N_r x L noiseless echo a_r(theta) a_t(theta)^T P^T, stacked
/// column-major; equals kron(P a_t(theta), a_r(theta)).
CVector sensing_mu(const CMatrix& pilot, const ArrayGeometry& geometry, double theta_deg);

/// log(1 + nu_0 mu_0^H (sum_i nu_i mu_i mu_i^H + sigma_r^2 I)^{-1} mu_0).
double sensing_mi_exact(const CMatrix& pilot, const SensingScene& scene);

/// Diagonal-Gram approximation; exact for at most one clutter source.
/// Throws DomainError if the log argument is not positive.
double sensing_mi_approx(const CMatrix& pilot, const SensingScene& scene);

double sensing_mi(const CMatrix& pilot, const SensingScene& scene, SensingFormula formula);

double isac_objective(const CMatrix& pilot, const IsacObjective& objective);

struct KlAndG
{
    double kl = 0.0; ///< D(H0 || H1) of the whitened detection problem
    double g = 0.0;  ///< x / (1 + x)
};

/// Closed form through the exact sensing MI: kl = M_exact - g.
KlAndG sense_kl_and_g(const CMatrix& pilot, const SensingScene& scene);

/// Dense evaluation ln det(I + A) - tr(I - (I + A)^{-1}) with A the whitened
/// target covariance; for cross-checking the closed form.
double sense_kl_direct(const CMatrix& pilot, const SensingScene& scene);

/// Lower bound on the communication MI for a single-component (Gaussian)
/// prior: ln det(pi e R) - N_t ln(pi e) - N_t ln(trace_mse / N_t).
double comm_mi_lower_bound_gaussian(const CMatrix& pilot, const GmmUserModel& model, double trace_mse);

/// 2 / (1 + err) - 1: effective SNR of an MMSE-trained link.
double effective_snr(double error_variance);

/// B / (B + L).
double training_prefactor(int block_len, int pilot_length);

/// Monte Carlo estimate of the training-aware worst-case capacity (nats per
/// channel use): MMSE-estimate every user's channel in each trial, pool the
/// normalized error variance over all trials, and average
/// (B/(B+L)) log det(I + snr_eff Hb^* Hb^T / N_t) with Hb the estimate
/// normalized to unit average entry power.
double c_worst_estimate(const CMatrix& pilot, const std::vector<GmmUserModel>& users, int block_len, int trials,
                        const RngStream& rng);

} // namespace isacpilot
