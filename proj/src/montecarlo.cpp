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

#include "isacpilot/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "isacpilot/parallel.hpp"
#include "isacpilot/stiefel.hpp"

namespace isacpilot
{

// ---- Radar detection ----------------------------------------------------------

CVector simulate_radar_frame(const CMatrix& pilot, const SensingScene& scene, Hypothesis hypothesis, RngStream& rng)
{
    scene.validate();
    const auto& geo = scene.geometry;
    CVector y = CVector::Zero(static_cast<Eigen::Index>(geo.n_rx) * pilot.rows());
    if (hypothesis == Hypothesis::h1)
        y += rng.complex_normal(scene.target_power) * sensing_mu(pilot, geo, scene.target_angle_deg);
    for (const auto& c : scene.clutter)
        y += rng.complex_normal(c.power) * sensing_mu(pilot, geo, c.angle_deg);
    y += rng.complex_normal_vector(y.size(), scene.radar_noise_std * scene.radar_noise_std);
    return y;
}

RadarDetector::RadarDetector(const CMatrix& pilot, const SensingScene& scene)
    : filter_(SensingMiEvaluator(scene).whitened_target(pilot))
{
}

double RadarDetector::statistic(const CVector& y) const
{
    if (y.size() != filter_.size())
        throw DimensionError("detector: frame length mismatch");
    return std::norm(filter_.dot(y));
}

double detector_statistic(const CVector& y, const CMatrix& pilot, const SensingScene& scene)
{
    return RadarDetector(pilot, scene).statistic(y);
}

RocCurve roc_curve(const CMatrix& pilot, const SensingScene& scene, int n_trials, std::vector<double> p_fa_grid,
                   const RngStream& rng)
{
    if (n_trials < 1)
        throw InvalidParameter("roc_curve: n_trials must be >= 1");
    for (double p : p_fa_grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw InvalidParameter("roc_curve: p_fa values must lie in [0, 1]");

    const RadarDetector detector(pilot, scene);
    const auto n = static_cast<std::size_t>(n_trials);
    std::vector<double> t0(n);
    std::vector<double> t1(n);
    parallel_for(n, [&](std::size_t i) {
        const RngStream trial = rng.substream(i);
        RngStream s0 = trial.substream(0);
        RngStream s1 = trial.substream(1);
        t0[i] = detector.statistic(simulate_radar_frame(pilot, scene, Hypothesis::h0, s0));
        t1[i] = detector.statistic(simulate_radar_frame(pilot, scene, Hypothesis::h1, s1));
    });
    std::sort(t0.begin(), t0.end(), std::greater<>());
    std::sort(t1.begin(), t1.end(), std::greater<>());

    const auto exceed = [](const std::vector<double>& desc, double thr) {
        // Count of entries strictly above thr in a descending vector.
        return static_cast<double>(std::partition_point(desc.begin(), desc.end(), [thr](double v) { return v > thr; }) -
                                   desc.begin());
    };

    std::sort(p_fa_grid.begin(), p_fa_grid.end());
    RocCurve curve;
    for (double p : p_fa_grid)
    {
        RocPoint pt;
        pt.p_fa_target = p;
        const auto k = static_cast<std::size_t>(std::floor(p * static_cast<double>(n)));
        pt.under_resolved = k == 0 && p > 0.0;
        pt.threshold = k >= n ? -std::numeric_limits<double>::infinity() : t0[k];
        pt.p_fa = exceed(t0, pt.threshold) / static_cast<double>(n);
        pt.p_d = exceed(t1, pt.threshold) / static_cast<double>(n);
        curve.points.push_back(pt);
    }
    return curve;
}

// ---- GMM-MMSE -----------------------------------------------------------------

GmmMmseEstimator::GmmMmseEstimator(const CMatrix& pilot, const GmmUserModel& model) : model_(&model)
{
    model.validate();
    if (pilot.cols() != model.n_tx())
        throw DimensionError("MMSE: pilot has wrong number of columns");
    const double noise_var = model.noise_std * model.noise_std;
    const auto l = pilot.rows();
    for (int n = 0; n < model.n_components(); ++n)
    {
        if (!(model.weights(n) > 0.0))
            continue;
        const auto idx = static_cast<std::size_t>(n);
        CMatrix gain = model.covariances[idx] * pilot.adjoint();
        CMatrix sigma = pilot * gain;
        sigma = 0.5 * (sigma + sigma.adjoint()).eval();
        sigma.diagonal().array() += noise_var;
        Eigen::LLT<CMatrix> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw NumericError("MMSE: observation covariance is not positive definite");
        double log_det = 0.0;
        for (Eigen::Index i = 0; i < l; ++i)
            log_det += 2.0 * std::log(llt.matrixLLT()(i, i).real());
        active_.push_back(n);
        sigma_llt_.push_back(std::move(llt));
        gain_.push_back(std::move(gain));
        projected_mean_.push_back(pilot * model.means[idx]);
        log_norm_.push_back(std::log(model.weights(n)) - log_det);
    }
}

CVector GmmMmseEstimator::estimate(const CVector& y, RVector* responsibilities) const
{
    const auto& model = *model_;
    const std::size_t m = active_.size();
    std::vector<CVector> solved(m);
    std::vector<double> log_post(m);
    double max_lp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
    {
        const CVector r = y - projected_mean_[i];
        solved[i] = sigma_llt_[i].solve(r);
        log_post[i] = log_norm_[i] - r.dot(solved[i]).real();
        max_lp = std::max(max_lp, log_post[i]);
    }
    double total = 0.0;
    for (double& lp : log_post)
    {
        lp = std::exp(lp - max_lp);
        total += lp;
    }

    CVector h = CVector::Zero(model.n_tx());
    if (responsibilities)
        *responsibilities = RVector::Zero(model.n_components());
    for (std::size_t i = 0; i < m; ++i)
    {
        const double p = log_post[i] / total;
        if (responsibilities)
            (*responsibilities)(active_[i]) = p;
        if (p == 0.0)
            continue;
        h += p * (model.means[static_cast<std::size_t>(active_[i])] + gain_[i] * solved[i]);
    }
    return h;
}

CVector gmm_mmse_estimate(const CVector& y, const CMatrix& pilot, const GmmUserModel& model)
{
    return GmmMmseEstimator(pilot, model).estimate(y);
}

NmseResult nmse_experiment(const CMatrix& pilot, const std::vector<GmmUserModel>& users, int n_trials,
                           const RngStream& rng)
{
    if (n_trials < 1)
        throw InvalidParameter("nmse_experiment: n_trials must be >= 1");
    if (users.empty())
        throw InvalidParameter("nmse_experiment: at least one user required");
    const std::size_t k_users = users.size();
    std::vector<ChannelSampler> samplers;
    std::vector<GmmMmseEstimator> estimators;
    for (const auto& u : users)
    {
        samplers.emplace_back(u);
        estimators.emplace_back(pilot, u);
    }

    const auto n = static_cast<std::size_t>(n_trials);
    // NaN marks a skipped draw.
    std::vector<double> ratios(n * k_users);
    parallel_for(n, [&](std::size_t t) {
        const RngStream trial = rng.substream(t);
        for (std::size_t k = 0; k < k_users; ++k)
        {
            RngStream s = trial.substream(k);
            const CVector h = samplers[k].sample(s);
            const CVector y = simulate_pilot_rx(pilot, h, users[k].noise_std, s);
            const CVector h_hat = estimators[k].estimate(y);
            const double energy = h.squaredNorm();
            ratios[t * k_users + k] =
                energy > 0.0 ? (h - h_hat).squaredNorm() / energy : std::numeric_limits<double>::quiet_NaN();
        }
    });

    NmseResult out;
    std::vector<double> all;
    all.reserve(ratios.size());
    for (std::size_t k = 0; k < k_users; ++k)
    {
        std::vector<double> mine;
        mine.reserve(n);
        for (std::size_t t = 0; t < n; ++t)
        {
            const double r = ratios[t * k_users + k];
            if (std::isnan(r))
                ++out.skipped;
            else
                mine.push_back(r);
        }
        out.per_user.push_back(mine.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : ordered_sum(mine) / static_cast<double>(mine.size()));
    }
    for (double r : ratios)
        if (!std::isnan(r))
            all.push_back(r);
    out.pooled = all.empty() ? std::numeric_limits<double>::quiet_NaN()
                             : ordered_sum(all) / static_cast<double>(all.size());
    return out;
}

// ---- Data link ----------------------------------------------------------------

namespace
{

const double qam_scale = 1.0 / std::sqrt(42.0);

// Gray label of each amplitude index 0..7 (amplitude -7 + 2 i).
unsigned gray(unsigned i) { return i ^ (i >> 1); }

unsigned gray_inverse(unsigned g) { return g ^ (g >> 1) ^ (g >> 2); }

double level(unsigned label3) { return -7.0 + 2.0 * static_cast<double>(gray_inverse(label3)); }

unsigned nearest_label(double amplitude)
{
    const double idx = std::round((amplitude / qam_scale + 7.0) / 2.0);
    return gray(static_cast<unsigned>(std::clamp(idx, 0.0, 7.0)));
}

} // namespace

cd qam64_map(unsigned label)
{
    if (label > 63)
        throw InvalidParameter("qam64_map: label must be < 64");
    return qam_scale * cd(level((label >> 3) & 7u), level(label & 7u));
}

unsigned qam64_demap(cd symbol) { return (nearest_label(symbol.real()) << 3) | nearest_label(symbol.imag()); }

CMatrix zf_precode(const CMatrix& channel_estimates)
{
    const auto k = channel_estimates.rows();
    if (k < 1 || k > channel_estimates.cols())
        throw DimensionError("zf_precode: need 1 <= K <= N_t");
    const CMatrix gram = channel_estimates * channel_estimates.adjoint();
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw SingularityError("zf_precode: channel estimates are rank deficient");
    CMatrix w = channel_estimates.adjoint() * llt.solve(CMatrix::Identity(k, k));
    for (Eigen::Index j = 0; j < k; ++j)
    {
        const double norm = w.col(j).norm();
        if (!(norm > 0.0))
            throw SingularityError("zf_precode: zero precoder column");
        w.col(j) /= norm;
    }
    return w;
}

std::vector<SerPoint> ser_experiment(const CMatrix& pilot, const std::vector<GmmUserModel>& users,
                                     const std::vector<double>& snr_grid_db, int n_symbols, int block_len,
                                     const RngStream& rng)
{
    if (n_symbols < 1 || block_len < 1)
        throw InvalidParameter("ser_experiment: n_symbols and block_len must be >= 1");
    if (users.empty())
        throw InvalidParameter("ser_experiment: at least one user required");
    const auto k_users = static_cast<Eigen::Index>(users.size());
    const auto n_tx = pilot.cols();
    std::vector<ChannelSampler> samplers;
    std::vector<GmmMmseEstimator> estimators;
    for (const auto& u : users)
    {
        samplers.emplace_back(u);
        estimators.emplace_back(pilot, u);
    }

    const std::size_t n_snr = snr_grid_db.size();
    std::vector<double> noise_std(n_snr);
    for (std::size_t s = 0; s < n_snr; ++s)
        noise_std[s] = std::sqrt(std::pow(10.0, -snr_grid_db[s] / 10.0));

    const auto n_blocks = static_cast<std::size_t>((n_symbols + block_len - 1) / block_len);
    std::vector<std::int64_t> errors(n_blocks * n_snr, 0);
    parallel_for(n_blocks, [&](std::size_t b) {
        RngStream s = rng.substream(b);
        CMatrix h(k_users, n_tx);
        CMatrix h_hat(k_users, n_tx);
        for (Eigen::Index k = 0; k < k_users; ++k)
        {
            const auto ku = static_cast<std::size_t>(k);
            const CVector hk = samplers[ku].sample(s);
            const CVector y = simulate_pilot_rx(pilot, hk, users[ku].noise_std, s);
            h.row(k) = hk.transpose();
            h_hat.row(k) = estimators[ku].estimate(y).transpose();
        }
        const CMatrix w = zf_precode(h_hat);
        const CMatrix effective = h * w;          // true K x K link
        const CVector est_gain = (h_hat * w).diagonal();

        std::vector<unsigned> labels(static_cast<std::size_t>(k_users));
        CVector symbols(k_users);
        for (int t = 0; t < block_len; ++t)
        {
            for (Eigen::Index k = 0; k < k_users; ++k)
            {
                labels[static_cast<std::size_t>(k)] = static_cast<unsigned>(s.engine()() >> 58);
                symbols(k) = qam64_map(labels[static_cast<std::size_t>(k)]);
            }
            const CVector noise = s.complex_normal_vector(k_users);
            const CVector clean = effective * symbols;
            for (std::size_t p = 0; p < n_snr; ++p)
            {
                for (Eigen::Index k = 0; k < k_users; ++k)
                {
                    const cd r = clean(k) + noise_std[p] * noise(k);
                    if (qam64_demap(r / est_gain(k)) != labels[static_cast<std::size_t>(k)])
                        ++errors[b * n_snr + p];
                }
            }
        }
    });

    const std::int64_t total = static_cast<std::int64_t>(n_blocks) * block_len * k_users;
    std::vector<SerPoint> out(n_snr);
    for (std::size_t p = 0; p < n_snr; ++p)
    {
        std::int64_t e = 0;
        for (std::size_t b = 0; b < n_blocks; ++b)
            e += errors[b * n_snr + p];
        out[p].snr_db = snr_grid_db[p];
        out[p].errors = e;
        out[p].symbols = total;
        out[p].ser = static_cast<double>(e) / static_cast<double>(total);
    }
    return out;
}

// ---- Baselines ----------------------------------------------------------------

CMatrix dft_pilot(int l, int n_tx)
{
    if (l < 1 || l >= n_tx)
        throw DimensionError("dft_pilot: need 1 <= L < N_t");
    CMatrix p(l, n_tx);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (int r = 0; r < l; ++r)
        for (int c = 0; c < n_tx; ++c)
            p(r, c) = scale * std::polar(1.0, -2.0 * pi * static_cast<double>((r * c) % n_tx) / n_tx);
    return p;
}

CMatrix eigen_pilot(int l, const std::vector<GmmUserModel>& users)
{
    if (users.empty())
        throw InvalidParameter("eigen_pilot: at least one user required");
    const int n_tx = users.front().n_tx();
    if (l < 1 || l >= n_tx)
        throw DimensionError("eigen_pilot: need 1 <= L < N_t");
    CMatrix pooled = CMatrix::Zero(n_tx, n_tx);
    for (const auto& u : users)
    {
        u.validate();
        if (u.n_tx() != n_tx)
            throw DimensionError("eigen_pilot: users disagree on N_t");
        // Cov(h) = sum_n w_n (R_n + mu_n mu_n^H) - m m^H.
        CVector m = CVector::Zero(n_tx);
        CMatrix second = CMatrix::Zero(n_tx, n_tx);
        for (int n = 0; n < u.n_components(); ++n)
        {
            const auto idx = static_cast<std::size_t>(n);
            m += u.weights(n) * u.means[idx];
            second += u.weights(n) * (u.covariances[idx] + u.means[idx] * u.means[idx].adjoint());
        }
        pooled += second - m * m.adjoint();
    }
    pooled /= static_cast<double>(users.size());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (pooled + pooled.adjoint()));
    if (es.info() != Eigen::Success)
        throw NumericError("eigen_pilot: eigendecomposition failed");
    // Eigenvalues ascend; take the last L columns, largest first.
    CMatrix top = es.eigenvectors().rightCols(l).rowwise().reverse();
    return project_stiefel(top.adjoint());
}

namespace
{

std::vector<double> average_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();)
    {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

} // namespace

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw InvalidParameter("spearman_correlation: need two equal-length samples of size >= 2");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = 0.5 * (n + 1.0);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace isacpilot
