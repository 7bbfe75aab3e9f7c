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

#include "isacpilot/mi_metrics.hpp"

#include <cmath>
#include <limits>

namespace isacpilot
{

void IsacObjective::validate() const
{
    if (!(rho >= 0.0 && rho <= 1.0))
        throw InvalidParameter("objective: rho must lie in [0, 1]");
    if (users.empty())
        throw InvalidParameter("objective: at least one user required");
    if (user_weights.size() != static_cast<Eigen::Index>(users.size()))
        throw DimensionError("objective: one weight per user required");
    if ((user_weights.array() < 0.0).any() || std::abs(user_weights.sum() - 1.0) > 1e-12)
        throw InvalidParameter("objective: user weights must be nonnegative and sum to 1");
    for (const auto& u : users)
        u.validate();
    scene.validate();
    if (users.front().n_tx() != scene.geometry.n_tx)
        throw DimensionError("objective: user models and scene disagree on N_t");
}

// ---- Communication ------------------------------------------------------------

CommMiEvaluator::CommMiEvaluator(const GmmUserModel& model) : model_(&model)
{
    model.validate();
    const auto nk = model.n_components();
    const auto nt = model.n_tx();
    factors_.reserve(static_cast<std::size_t>(nk));
    for (const auto& r : model.covariances)
        factors_.push_back(low_rank_factor(r));

    CVector mixture_mean = CVector::Zero(nt);
    for (int n = 0; n < nk; ++n)
        mixture_mean += model.weights(n) * model.means[static_cast<std::size_t>(n)];
    centered_means_.resize(nt, nk);
    for (int n = 0; n < nk; ++n)
        centered_means_.col(n) = mixture_mean - model.means[static_cast<std::size_t>(n)];
}

double CommMiEvaluator::value(const CMatrix& pilot) const { return evaluate(pilot, false).value; }

ValueAndGradient CommMiEvaluator::value_and_gradient(const CMatrix& pilot) const { return evaluate(pilot, true); }

ValueAndGradient CommMiEvaluator::evaluate(const CMatrix& pilot, bool with_gradient) const
{
    const auto& model = *model_;
    if (pilot.cols() != model.n_tx())
        throw DimensionError("comm MI: pilot has wrong number of columns");
    const auto l = pilot.rows();
    const auto nk = model.n_components();
    const double noise_var = model.noise_std * model.noise_std;

    // Per component n:
    //   S_n = P R_n P^H + s^2 I,  v_n = P mubar_n,  beta_n = v_n^H S_n^{-1} v_n,
    //   t_n = log w_n - beta_n - log det S_n,  M = -logsumexp(t) + cnst.
    const CMatrix projected_means = pilot * centered_means_;
    std::vector<double> terms(static_cast<std::size_t>(nk), -std::numeric_limits<double>::infinity());
    std::vector<CMatrix> solved_factors; // S_n^{-1} P F_n
    std::vector<CMatrix> pilot_factors;  // P F_n
    std::vector<CVector> solved_means;   // S_n^{-1} v_n
    if (with_gradient)
    {
        solved_factors.resize(static_cast<std::size_t>(nk));
        pilot_factors.resize(static_cast<std::size_t>(nk));
        solved_means.resize(static_cast<std::size_t>(nk));
    }

    double max_term = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < nk; ++n)
    {
        const auto idx = static_cast<std::size_t>(n);
        if (!(model.weights(n) > 0.0))
            continue;
        CMatrix pf = pilot * factors_[idx];
        CMatrix cov = pf * pf.adjoint();
        cov.diagonal().array() += noise_var;
        Eigen::LLT<CMatrix> llt(cov);
        if (llt.info() != Eigen::Success)
            throw NumericError("comm MI: received-signal covariance is not positive definite");
        const auto diag = llt.matrixLLT().diagonal();
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < l; ++i)
            log_det += 2.0 * std::log(diag(i).real());
        CVector u = llt.solve(projected_means.col(n));
        const double beta = projected_means.col(n).dot(u).real();
        terms[idx] = std::log(model.weights(n)) - beta - log_det;
        max_term = std::max(max_term, terms[idx]);
        if (with_gradient)
        {
            solved_factors[idx] = llt.solve(pf);
            pilot_factors[idx] = std::move(pf);
            solved_means[idx] = std::move(u);
        }
    }
    if (!std::isfinite(max_term))
        throw NumericError("comm MI: mixture sum is not finite");

    double scaled_sum = 0.0;
    for (double t : terms)
        if (std::isfinite(t))
            scaled_sum += std::exp(t - max_term);
    const double log_sum = max_term + std::log(scaled_sum);
    const double cnst = -static_cast<double>(l) * (std::log(noise_var) + 1.0);

    ValueAndGradient out;
    out.value = -log_sum + cnst;
    if (!with_gradient)
        return out;

    // dM/dP* = sum_n p_n [ (S_n^{-1} - u_n u_n^H) P R_n + u_n mubar_n^H ]
    // with p_n the normalized mixture terms and u_n = S_n^{-1} v_n.
    out.gradient = CMatrix::Zero(l, pilot.cols());
    for (int n = 0; n < nk; ++n)
    {
        const auto idx = static_cast<std::size_t>(n);
        if (!std::isfinite(terms[idx]))
            continue;
        const double p = std::exp(terms[idx] - log_sum);
        if (p == 0.0)
            continue;
        const CVector& u = solved_means[idx];
        CMatrix left = solved_factors[idx];
        left.noalias() -= u * (u.adjoint() * pilot_factors[idx]);
        out.gradient.noalias() += p * (left * factors_[idx].adjoint());
        out.gradient.noalias() += p * (u * centered_means_.col(n).adjoint());
    }
    return out;
}

// ---- Sensing ------------------------------------------------------------------

SensingMiEvaluator::SensingMiEvaluator(const SensingScene& scene) : scene_(&scene)
{
    scene.validate();
    angles_.push_back(scene.target_angle_deg);
    powers_.push_back(scene.target_power);
    for (const auto& c : scene.clutter)
    {
        // A zero-power source contributes nothing to the interference covariance.
        if (c.power > 0.0)
        {
            angles_.push_back(c.angle_deg);
            powers_.push_back(c.power);
        }
    }
    const auto& g = scene.geometry;
    const auto count = static_cast<Eigen::Index>(angles_.size());
    tx_steering_.resize(g.n_tx, count);
    CMatrix rx(g.n_rx, count);
    for (Eigen::Index i = 0; i < count; ++i)
    {
        tx_steering_.col(i) = steering_vector(g.n_tx, g.spacing_tx, angles_[static_cast<std::size_t>(i)]);
        rx.col(i) = steering_vector(g.n_rx, g.spacing_rx, angles_[static_cast<std::size_t>(i)]);
    }
    rx_gram_ = rx.adjoint() * rx;
}

namespace
{

struct SensingTerms
{
    CMatrix echo_gram;    // Gamma_ij = mu_i^H mu_j
    CMatrix pilot_steer;  // columns P a_t(theta_i)
    CVector q;            // K^{-1} p
    double g = 0.0;       // Gamma_00 - p^H K^{-1} p
};

SensingTerms sensing_terms(const CMatrix& pilot, const CMatrix& tx_steering, const CMatrix& rx_gram,
                           const std::vector<double>& powers, double noise_var, SensingFormula formula)
{
    SensingTerms t;
    t.pilot_steer = pilot * tx_steering;
    t.echo_gram = rx_gram.cwiseProduct(t.pilot_steer.adjoint() * t.pilot_steer);
    const auto q_count = t.echo_gram.rows() - 1;
    t.g = t.echo_gram(0, 0).real();
    if (q_count == 0)
        return t;

    const CVector p = t.echo_gram.col(0).tail(q_count);
    if (formula == SensingFormula::exact)
    {
        CMatrix k = t.echo_gram.bottomRightCorner(q_count, q_count);
        for (Eigen::Index i = 0; i < q_count; ++i)
            k(i, i) += noise_var / powers[static_cast<std::size_t>(i + 1)];
        Eigen::LLT<CMatrix> llt(k);
        if (llt.info() != Eigen::Success)
            throw NumericError("sensing MI: clutter Gram system is not positive definite");
        t.q = llt.solve(p);
    }
    else
    {
        t.q.resize(q_count);
        for (Eigen::Index i = 0; i < q_count; ++i)
        {
            const double kii = t.echo_gram(i + 1, i + 1).real() + noise_var / powers[static_cast<std::size_t>(i + 1)];
            t.q(i) = p(i) / kii;
        }
    }
    t.g -= p.dot(t.q).real();
    return t;
}

} // namespace

ValueAndGradient SensingMiEvaluator::evaluate(const CMatrix& pilot, SensingFormula formula, bool with_gradient) const
{
    if (pilot.cols() != tx_steering_.rows())
        throw DimensionError("sensing MI: pilot has wrong number of columns");
    ValueAndGradient out;
    const double nu0 = powers_.front();
    if (nu0 == 0.0)
    {
        if (with_gradient)
            out.gradient = CMatrix::Zero(pilot.rows(), pilot.cols());
        return out;
    }
    const double noise_var = scene_->radar_noise_std * scene_->radar_noise_std;
    const SensingTerms t = sensing_terms(pilot, tx_steering_, rx_gram_, powers_, noise_var, formula);
    const double x = nu0 / noise_var * t.g;
    if (!(1.0 + x > 0.0))
        throw DomainError("sensing MI: logarithm argument is not positive", 1.0 + x);
    out.value = std::log1p(x);
    if (!with_gradient)
        return out;

    // dg/dGamma_ij assembled into W, then
    //   dM/dP* = (nu0 / s^2) / (1 + x) * sum_ij W_ij c_ij b_j a_i^H
    //          = coef * B (W o C)^T A^H.
    const auto n = t.echo_gram.rows();
    CMatrix w = CMatrix::Zero(n, n);
    w(0, 0) = 1.0;
    for (Eigen::Index i = 1; i < n; ++i)
    {
        w(0, i) = -t.q(i - 1);
        w(i, 0) = -std::conj(t.q(i - 1));
    }
    if (formula == SensingFormula::exact)
        w.bottomRightCorner(n - 1, n - 1) = t.q.conjugate() * t.q.transpose();
    else
        for (Eigen::Index i = 1; i < n; ++i)
            w(i, i) = std::norm(t.q(i - 1));
    const double coef = nu0 / noise_var / (1.0 + x);
    const CMatrix weighted = w.cwiseProduct(rx_gram_);
    out.gradient = coef * (t.pilot_steer * weighted.transpose() * tx_steering_.adjoint());
    return out;
}

double SensingMiEvaluator::value(const CMatrix& pilot, SensingFormula formula) const
{
    return evaluate(pilot, formula, false).value;
}

ValueAndGradient SensingMiEvaluator::value_and_gradient(const CMatrix& pilot, SensingFormula formula) const
{
    return evaluate(pilot, formula, true);
}

double SensingMiEvaluator::target_quadratic_form(const CMatrix& pilot) const
{
    const double noise_var = scene_->radar_noise_std * scene_->radar_noise_std;
    const SensingTerms t = sensing_terms(pilot, tx_steering_, rx_gram_, powers_, noise_var, SensingFormula::exact);
    return powers_.front() / noise_var * t.g;
}

CVector SensingMiEvaluator::whitened_target(const CMatrix& pilot) const
{
    // (R_cc + s^2 I)^{-1} mu_0 = (mu_0 - sum_i q_i mu_i) / s^2 with q from the
    // exact clutter Gram system.
    const double noise_var = scene_->radar_noise_std * scene_->radar_noise_std;
    const SensingTerms t = sensing_terms(pilot, tx_steering_, rx_gram_, powers_, noise_var, SensingFormula::exact);
    const auto& g = scene_->geometry;
    const auto count = static_cast<Eigen::Index>(angles_.size());
    CVector w = sensing_mu(pilot, g, angles_.front());
    for (Eigen::Index i = 1; i < count; ++i)
        w -= t.q(i - 1) * sensing_mu(pilot, g, angles_[static_cast<std::size_t>(i)]);
    return w / noise_var;
}

// ---- ISAC ---------------------------------------------------------------------

IsacEvaluator::IsacEvaluator(const IsacObjective& objective) : objective_(&objective), sense_(objective.scene)
{
    objective.validate();
    comm_.reserve(objective.users.size());
    for (const auto& u : objective.users)
        comm_.emplace_back(u);
}

IsacEvaluation IsacEvaluator::evaluate(const CMatrix& pilot, bool with_gradient) const
{
    const auto& obj = *objective_;
    IsacEvaluation out;
    if (with_gradient)
        out.gradient = CMatrix::Zero(pilot.rows(), pilot.cols());
    out.comm_per_user.reserve(comm_.size());
    for (std::size_t k = 0; k < comm_.size(); ++k)
    {
        const double wk = obj.user_weights(static_cast<Eigen::Index>(k));
        if (with_gradient)
        {
            auto vg = comm_[k].value_and_gradient(pilot);
            out.comm_per_user.push_back(vg.value);
            out.gradient += (obj.rho * wk) * vg.gradient;
        }
        else
        {
            out.comm_per_user.push_back(comm_[k].value(pilot));
        }
        out.comm += wk * out.comm_per_user.back();
    }
    if (with_gradient)
    {
        auto vg = sense_.value_and_gradient(pilot, obj.sensing_formula);
        out.sense = vg.value;
        out.gradient += (1.0 - obj.rho) * vg.gradient;
    }
    else
    {
        out.sense = sense_.value(pilot, obj.sensing_formula);
    }
    out.objective = obj.rho * out.comm + (1.0 - obj.rho) * out.sense;
    return out;
}

// ---- Free functions -------------------------------------------------------------

double comm_mi_user(const CMatrix& pilot, const GmmUserModel& model) { return CommMiEvaluator(model).value(pilot); }

double comm_mi_weighted(const CMatrix& pilot, const IsacObjective& objective)
{
    objective.validate();
    double total = 0.0;
    for (std::size_t k = 0; k < objective.users.size(); ++k)
        total += objective.user_weights(static_cast<Eigen::Index>(k)) * comm_mi_user(pilot, objective.users[k]);
    return total;
}

CVector sensing_mu(const CMatrix& pilot, const ArrayGeometry& geometry, double theta_deg)
{
    geometry.validate();
    if (pilot.cols() != geometry.n_tx)
        throw DimensionError("sensing_mu: pilot has wrong number of columns");
    const CVector b = pilot * steering_vector(geometry.n_tx, geometry.spacing_tx, theta_deg);
    const CVector ar = steering_vector(geometry.n_rx, geometry.spacing_rx, theta_deg);
    CVector mu(b.size() * ar.size());
    for (Eigen::Index l = 0; l < b.size(); ++l)
        mu.segment(l * ar.size(), ar.size()) = b(l) * ar;
    return mu;
}

double sensing_mi_exact(const CMatrix& pilot, const SensingScene& scene)
{
    return SensingMiEvaluator(scene).value(pilot, SensingFormula::exact);
}

double sensing_mi_approx(const CMatrix& pilot, const SensingScene& scene)
{
    return SensingMiEvaluator(scene).value(pilot, SensingFormula::approx);
}

double sensing_mi(const CMatrix& pilot, const SensingScene& scene, SensingFormula formula)
{
    return SensingMiEvaluator(scene).value(pilot, formula);
}

double isac_objective(const CMatrix& pilot, const IsacObjective& objective)
{
    return IsacEvaluator(objective).evaluate(pilot, false).objective;
}

KlAndG sense_kl_and_g(const CMatrix& pilot, const SensingScene& scene)
{
    const SensingMiEvaluator eval(scene);
    const double x = eval.target_quadratic_form(pilot);
    KlAndG out;
    out.g = x / (1.0 + x);
    out.kl = std::log1p(x) - out.g;
    return out;
}

double sense_kl_direct(const CMatrix& pilot, const SensingScene& scene)
{
    scene.validate();
    const auto& geo = scene.geometry;
    const CVector mu0 = sensing_mu(pilot, geo, scene.target_angle_deg);
    const auto n = mu0.size();
    CMatrix cov = CMatrix::Identity(n, n) * (scene.radar_noise_std * scene.radar_noise_std);
    for (const auto& c : scene.clutter)
    {
        const CVector mu = sensing_mu(pilot, geo, c.angle_deg);
        cov.noalias() += c.power * (mu * mu.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cov);
    const CMatrix inv_sqrt = es.operatorInverseSqrt();
    const CVector white = inv_sqrt * mu0;
    const CMatrix a = scene.target_power * (white * white.adjoint());
    const CMatrix i_plus_a = CMatrix::Identity(n, n) + a;
    Eigen::LLT<CMatrix> llt(i_plus_a);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        log_det += 2.0 * std::log(llt.matrixLLT()(i, i).real());
    const CMatrix inv = llt.solve(CMatrix::Identity(n, n));
    const double trace_term = (CMatrix::Identity(n, n) - inv).trace().real();
    return log_det - trace_term;
}

double comm_mi_lower_bound_gaussian(const CMatrix& pilot, const GmmUserModel& model, double trace_mse)
{
    model.validate();
    if (model.n_components() != 1)
        throw UnsupportedModel("lower bound: prior entropy is closed-form only for a single Gaussian component");
    if (pilot.cols() != model.n_tx())
        throw DimensionError("lower bound: pilot has wrong number of columns");
    if (!(trace_mse > 0.0))
        throw InvalidParameter("lower bound: trace_mse must be > 0");
    const auto nt = static_cast<double>(model.n_tx());
    Eigen::LLT<CMatrix> llt(model.covariances.front());
    if (llt.info() != Eigen::Success)
        throw NumericError("lower bound: prior covariance is singular (entropy is -inf)");
    double log_det_r = 0.0;
    for (Eigen::Index i = 0; i < llt.matrixLLT().rows(); ++i)
        log_det_r += 2.0 * std::log(llt.matrixLLT()(i, i).real());
    const double log_pie = std::log(pi * std::numbers::e);
    const double prior_entropy = nt * log_pie + log_det_r;
    return prior_entropy - nt * log_pie - nt * std::log(trace_mse / nt);
}

double effective_snr(double error_variance) { return 2.0 / (1.0 + error_variance) - 1.0; }

double training_prefactor(int block_len, int pilot_length)
{
    if (block_len < 1)
        throw InvalidParameter("block length must be >= 1");
    return static_cast<double>(block_len) / static_cast<double>(block_len + pilot_length);
}

} // namespace isacpilot
