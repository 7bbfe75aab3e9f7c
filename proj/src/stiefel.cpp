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

#include "isacpilot/stiefel.hpp"

#include <cmath>
#include <string>

#include "isacpilot/parallel.hpp"

namespace isacpilot
{

void OptimizerConfig::validate() const
{
    if (!(step_size > 0.0))
        throw InvalidParameter("optimizer: step_size must be > 0");
    if (max_iters < 0)
        throw InvalidParameter("optimizer: max_iters must be >= 0");
    if (!(rel_tol >= 0.0))
        throw InvalidParameter("optimizer: rel_tol must be >= 0");
    if (window < 1)
        throw InvalidParameter("optimizer: window must be >= 1");
}

CMatrix project_stiefel(const CMatrix& z)
{
    if (z.rows() < 1 || z.rows() > z.cols())
        throw DimensionError("project_stiefel: need 1 <= L <= N_t");
    Eigen::JacobiSVD<CMatrix> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-12))
        throw SingularityError("project_stiefel: input is rank deficient, projection is not unique");
    return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix random_stiefel(int l, int n_tx, RngStream& rng)
{
    if (l < 1 || l >= n_tx)
        throw DimensionError("random_stiefel: need 1 <= L < N_t");
    return project_stiefel(rng.complex_normal_matrix(l, n_tx));
}

OptimizationTrace optimize_pgd(const CMatrix& init, const IsacObjective& objective, const OptimizerConfig& config)
{
    config.validate();
    PilotMatrix checked(init);
    const IsacEvaluator evaluator(objective);

    OptimizationTrace trace;
    trace.records.reserve(static_cast<std::size_t>(config.max_iters) + 1);
    CMatrix pilot = checked.matrix();

    for (int t = 0;; ++t)
    {
        IsacEvaluation ev;
        try
        {
            ev = evaluator.evaluate(pilot, t < config.max_iters);
        }
        catch (const DomainError& e)
        {
            throw DomainError("iteration " + std::to_string(t) + ": ", e);
        }
        TraceRecord rec;
        rec.iteration = t;
        rec.objective = ev.objective;
        rec.comm = ev.comm;
        rec.sense = ev.sense;
        rec.residual = stiefel_residual(pilot);
        trace.records.push_back(rec);

        if (t >= config.max_iters)
            break;
        if (config.early_stop && t >= config.window)
        {
            const double past = trace.records[static_cast<std::size_t>(t - config.window)].objective;
            if (std::abs(ev.objective - past) <= config.rel_tol * std::abs(ev.objective))
            {
                trace.stopped_early = true;
                break;
            }
        }
        pilot = project_stiefel(pilot + (2.0 * config.step_size) * ev.gradient);
    }
    trace.final_pilot = std::move(pilot);
    return trace;
}

std::vector<SweepPoint> rho_sweep(const IsacObjective& objective_template, const std::vector<double>& rho_values,
                                  const CMatrix& shared_init, const OptimizerConfig& config)
{
    for (double rho : rho_values)
        if (!(rho >= 0.0 && rho <= 1.0))
            throw InvalidParameter("rho_sweep: rho values must lie in [0, 1]");
    std::vector<SweepPoint> out(rho_values.size());
    parallel_for(rho_values.size(), [&](std::size_t i) {
        IsacObjective obj = objective_template;
        obj.rho = rho_values[i];
        const OptimizationTrace trace = optimize_pgd(shared_init, obj, config);
        const TraceRecord& last = trace.records.back();
        SweepPoint& p = out[i];
        p.rho = obj.rho;
        p.comm = last.comm;
        p.sense = last.sense;
        p.objective = last.objective;
        p.iterations = last.iteration;
        p.residual = last.residual;
        p.pilot = trace.final_pilot;
    });
    return out;
}

bool dominates(const MiPoint& b, const MiPoint& a)
{
    return b.sense >= a.sense && b.comm >= a.comm && (b.sense > a.sense || b.comm > a.comm);
}

std::vector<std::size_t> pareto_indices(const std::vector<MiPoint>& points)
{
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j)
            dominated = j != i && dominates(points[j], points[i]);
        if (!dominated)
            keep.push_back(i);
    }
    return keep;
}

std::vector<MiPoint> pareto_filter(const std::vector<MiPoint>& points)
{
    std::vector<MiPoint> out;
    for (std::size_t i : pareto_indices(points))
        out.push_back(points[i]);
    return out;
}

std::vector<MiPoint> sample_feasible_cloud(int n_samples, int l, const IsacObjective& objective, const RngStream& rng)
{
    if (n_samples < 1)
        throw InvalidParameter("sample_feasible_cloud: n_samples must be >= 1");
    const IsacEvaluator evaluator(objective);
    const int n_tx = objective.scene.geometry.n_tx;
    std::vector<MiPoint> out(static_cast<std::size_t>(n_samples));
    parallel_for(out.size(), [&](std::size_t i) {
        RngStream sub = rng.substream(i);
        const CMatrix pilot = random_stiefel(l, n_tx, sub);
        const IsacEvaluation ev = evaluator.evaluate(pilot, false);
        out[i] = MiPoint{ev.sense, ev.comm};
    });
    return out;
}

} // namespace isacpilot
