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

#include <cstdint>
#include <vector>

#include "isacpilot/mi_metrics.hpp"

namespace isacpilot
{

struct OptimizerConfig
{
    double step_size = 0.1;
    int max_iters = 200;
    double rel_tol = 1e-8;
    bool early_stop = true;
    int window = 10;

    void validate() const;
};

/// One recorded iterate; iteration 0 is the initializer.
struct TraceRecord
{
    int iteration = 0;
    double objective = 0.0;
    double comm = 0.0;
    double sense = 0.0;
    double residual = 0.0;
};

struct OptimizationTrace
{
    std::vector<TraceRecord> records;
    CMatrix final_pilot;
    bool stopped_early = false;

    int iterations() const { return records.empty() ? 0 : records.back().iteration; }
};

/// Complex Gaussian L x N_t draw projected onto the manifold.
CMatrix random_stiefel(int l, int n_tx, RngStream& rng);

/// Closest matrix with orthonormal rows, U V^H from the thin SVD of Z.
/// Throws SingularityError when the smallest singular value is <= 1e-12.
CMatrix project_stiefel(const CMatrix& z);

/// Projected gradient ascent P <- proj(P + gamma * 2 df/dP*). The factor 2
/// makes the step the real-coordinate gradient, so gamma is the step length
/// along the ordinary (real) gradient.
///
/// With early_stop, iteration ends once
/// |f_t - f_{t-window}| <= rel_tol * |f_t|.
OptimizationTrace optimize_pgd(const CMatrix& init, const IsacObjective& objective, const OptimizerConfig& config);

struct SweepPoint
{
    double rho = 0.0;
    double comm = 0.0;
    double sense = 0.0;
    double objective = 0.0;
    int iterations = 0;
    double residual = 0.0;
    CMatrix pilot;
};

/// One optimize_pgd run per rho from the shared initializer; the other
/// fields of `objective_template` are kept. Runs execute through
/// parallel_for and are returned in input order.
std::vector<SweepPoint> rho_sweep(const IsacObjective& objective_template, const std::vector<double>& rho_values,
                                  const CMatrix& shared_init, const OptimizerConfig& config);

/// (sense, comm) pair, both to be maximized.
struct MiPoint
{
    double sense = 0.0;
    double comm = 0.0;
};

/// True when b >= a component-wise with at least one strict inequality.
bool dominates(const MiPoint& b, const MiPoint& a);

/// Indices of the points not dominated by any other point, in input order.
/// Exact duplicates do not dominate each other, so both survive.
std::vector<std::size_t> pareto_indices(const std::vector<MiPoint>& points);
std::vector<MiPoint> pareto_filter(const std::vector<MiPoint>& points);

/// Sensing and weighted communication MI of n_samples random_stiefel pilots;
/// sample i uses rng.substream(i).
std::vector<MiPoint> sample_feasible_cloud(int n_samples, int l, const IsacObjective& objective,
                                           const RngStream& rng);

} // namespace isacpilot
