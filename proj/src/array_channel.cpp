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

#include "isacpilot/array_channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isacpilot
{

void ArrayGeometry::validate() const
{
    if (n_tx < 1 || n_rx < 1)
        throw InvalidParameter("array geometry: antenna counts must be >= 1");
    if (!(spacing_tx > 0.0) || !(spacing_rx > 0.0))
        throw InvalidParameter("array geometry: element spacings must be > 0");
}

CVector steering_vector(int n, double spacing_wavelengths, double theta_deg)
{
    if (n < 1)
        throw InvalidParameter("steering_vector: n must be >= 1");
    const double phase_step = 2.0 * pi * spacing_wavelengths * std::sin(deg2rad(theta_deg));
    CVector a(n);
    for (int m = 0; m < n; ++m)
        a(m) = std::polar(1.0, phase_step * m);
    return a;
}

// ---- GMM --------------------------------------------------------------------

void GmmUserModel::validate() const
{
    const auto nk = weights.size();
    if (nk < 1)
        throw InvalidParameter("GMM: at least one component required");
    if (static_cast<Eigen::Index>(means.size()) != nk || static_cast<Eigen::Index>(covariances.size()) != nk)
        throw DimensionError("GMM: weights, means and covariances must have equal length");
    if (!(noise_std > 0.0))
        throw InvalidParameter("GMM: noise_std must be > 0");
    if ((weights.array() < 0.0).any())
        throw InvalidParameter("GMM: weights must be nonnegative");
    if (std::abs(weights.sum() - 1.0) > 1e-12)
        throw InvalidParameter("GMM: weights must sum to 1");
    const auto nt = means.front().size();
    for (Eigen::Index n = 0; n < nk; ++n)
    {
        const auto& r = covariances[n];
        if (means[n].size() != nt || r.rows() != nt || r.cols() != nt)
            throw DimensionError("GMM: inconsistent component dimensions");
        if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidParameter("GMM: covariance is not Hermitian");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw InvalidParameter("GMM: covariance is not positive semidefinite");
    }
}

std::string MeanPolicy::describe() const
{
    if (kind == MeanPolicyKind::zero)
        return "zero";
    std::ostringstream os;
    os.precision(17);
    os << "steering(scale=" << scale << ")";
    return os.str();
}

RVector laplacian_weights(double mean_aoa_deg, double spread_deg, const std::vector<double>& grid_deg)
{
    if (!(spread_deg > 0.0))
        throw InvalidParameter("laplacian_weights: azimuth spread must be > 0");
    if (grid_deg.empty())
        throw InvalidParameter("laplacian_weights: empty grid");

    // The 1/(sqrt(2) sigma) prefactor cancels in the normalization; work with
    // exponents shifted by their maximum so narrow spreads cannot underflow.
    const auto n = static_cast<Eigen::Index>(grid_deg.size());
    RVector expo(n);
    for (Eigen::Index i = 0; i < n; ++i)
        expo(i) = -std::sqrt(2.0) * std::abs(grid_deg[i] - mean_aoa_deg) / spread_deg;
    RVector w = (expo.array() - expo.maxCoeff()).exp();
    return w / w.sum();
}

CMatrix region_covariance(const ArrayGeometry& geometry, double region_lo_deg, double region_hi_deg,
                          int quadrature_points)
{
    geometry.validate();
    if (!(region_lo_deg < region_hi_deg))
        throw InvalidParameter("region_covariance: invalid region (lo >= hi)");
    if (quadrature_points < 1)
        throw InvalidParameter("region_covariance: quadrature_points must be >= 1");

    const double width_deg = region_hi_deg - region_lo_deg;
    const double step_rad = deg2rad(width_deg) / quadrature_points;
    CMatrix r = CMatrix::Zero(geometry.n_tx, geometry.n_tx);
    for (int q = 0; q < quadrature_points; ++q)
    {
        const double theta = region_lo_deg + (q + 0.5) * width_deg / quadrature_points;
        const CVector a = steering_vector(geometry.n_tx, geometry.spacing_tx, theta);
        r.noalias() += step_rad * (a * a.adjoint());
    }
    // Exact Hermitian symmetry.
    return 0.5 * (r + r.adjoint());
}

GmmUserModel build_user_model(const ArrayGeometry& geometry, double mean_aoa_deg, double spread_deg,
                              int n_components, double noise_std, const MeanPolicy& mean_policy,
                              int quadrature_points)
{
    geometry.validate();
    if (n_components < 1)
        throw InvalidParameter("build_user_model: n_components must be >= 1");
    if (!(noise_std > 0.0))
        throw InvalidParameter("build_user_model: noise_std must be > 0");

    const double width = 180.0 / n_components;
    std::vector<double> centers(static_cast<std::size_t>(n_components));
    for (int n = 0; n < n_components; ++n)
        centers[static_cast<std::size_t>(n)] = -90.0 + (n + 0.5) * width;

    GmmUserModel model;
    model.weights = laplacian_weights(mean_aoa_deg, spread_deg, centers);
    model.noise_std = noise_std;
    model.mean_aoa_deg = mean_aoa_deg;
    model.azimuth_spread_deg = spread_deg;
    model.means.reserve(centers.size());
    model.covariances.reserve(centers.size());
    for (int n = 0; n < n_components; ++n)
    {
        const double lo = -90.0 + n * width;
        const double hi = (n + 1 == n_components) ? 90.0 : -90.0 + (n + 1) * width;
        model.covariances.push_back(region_covariance(geometry, lo, hi, quadrature_points));
        if (mean_policy.kind == MeanPolicyKind::zero)
            model.means.push_back(CVector::Zero(geometry.n_tx));
        else
            model.means.push_back(mean_policy.scale *
                                  steering_vector(geometry.n_tx, geometry.spacing_tx, centers[static_cast<std::size_t>(n)]));
    }
    return model;
}

CMatrix covariance_factor(const CMatrix& covariance)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(covariance);
    if (es.info() != Eigen::Success)
        throw NumericError("covariance factorization failed");
    const RVector& lambda = es.eigenvalues();
    if (lambda.size() > 0 && lambda.minCoeff() < -1e-8)
        throw NumericError("covariance factorization: matrix is not positive semidefinite");
    const RVector root = lambda.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal();
}

CMatrix low_rank_factor(const CMatrix& covariance, double rel_tol)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(covariance);
    if (es.info() != Eigen::Success)
        throw NumericError("covariance factorization failed");
    const RVector& lambda = es.eigenvalues();
    const auto n = lambda.size();
    if (n > 0 && lambda.minCoeff() < -1e-8)
        throw NumericError("covariance factorization: matrix is not positive semidefinite");
    const double cutoff = (n > 0 ? std::max(lambda.maxCoeff(), 0.0) : 0.0) * rel_tol;
    // Eigenvalues come sorted ascending.
    Eigen::Index first = 0;
    while (first < n && !(lambda(first) > cutoff))
        ++first;
    const Eigen::Index rank = n - first;
    return es.eigenvectors().rightCols(rank) * lambda.tail(rank).cwiseSqrt().asDiagonal();
}

int draw_component(const RVector& weights, RngStream& rng)
{
    const double u = rng.uniform();
    double acc = 0.0;
    const auto n = static_cast<int>(weights.size());
    for (int i = 0; i < n; ++i)
    {
        acc += weights(i);
        if (u < acc)
            return i;
    }
    // Rounding left a sliver above the last partial sum: take the last
    // component with nonzero weight.
    for (int i = n - 1; i >= 0; --i)
        if (weights(i) > 0.0)
            return i;
    return n - 1;
}

CVector sample_channel(const GmmUserModel& model, RngStream& rng)
{
    const int n = draw_component(model.weights, rng);
    const auto& mean = model.means[static_cast<std::size_t>(n)];
    const CMatrix factor = low_rank_factor(model.covariances[static_cast<std::size_t>(n)]);
    return mean + factor * rng.complex_normal_vector(factor.cols());
}

ChannelSampler::ChannelSampler(const GmmUserModel& model) : model_(&model)
{
    factors_.reserve(model.covariances.size());
    for (const auto& r : model.covariances)
        factors_.push_back(low_rank_factor(r));
}

CVector ChannelSampler::sample(RngStream& rng) const
{
    int component = 0;
    return sample(rng, component);
}

CVector ChannelSampler::sample(RngStream& rng, int& component) const
{
    component = draw_component(model_->weights, rng);
    const auto idx = static_cast<std::size_t>(component);
    const auto& mean = model_->means[idx];
    return mean + factors_[idx] * rng.complex_normal_vector(factors_[idx].cols());
}

// ---- Scene / pilot ------------------------------------------------------------

void SensingScene::validate() const
{
    geometry.validate();
    if (!(target_power >= 0.0))
        throw InvalidParameter("scene: target power must be >= 0");
    if (!(radar_noise_std > 0.0))
        throw InvalidParameter("scene: radar_noise_std must be > 0");
    for (const auto& c : clutter)
        if (!(c.power >= 0.0))
            throw InvalidParameter("scene: clutter powers must be >= 0");
}

double stiefel_residual(const CMatrix& pilot)
{
    const CMatrix gram = pilot * pilot.adjoint();
    return (gram - CMatrix::Identity(pilot.rows(), pilot.rows())).norm();
}

PilotMatrix::PilotMatrix(CMatrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() < 1 || entries_.rows() >= entries_.cols())
        throw DimensionError("pilot matrix must satisfy 1 <= L < N_t");
    if (!(stiefel_residual(entries_) <= feasibility_tol))
        throw InvalidParameter("pilot matrix rows are not orthonormal");
}

CVector simulate_pilot_rx(const CMatrix& pilot, const CVector& channel, double noise_std, RngStream& rng)
{
    if (pilot.cols() != channel.size())
        throw DimensionError("simulate_pilot_rx: pilot/channel dimension mismatch");
    CVector y = pilot * channel;
    if (noise_std > 0.0)
        y += rng.complex_normal_vector(y.size(), noise_std * noise_std);
    return y;
}

} // namespace isacpilot
