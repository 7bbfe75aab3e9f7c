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

#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "isacpilot/parallel.hpp"

using namespace isacpilot;

namespace
{

/// Polar factor through the Hermitian inverse square root (Z Z^H)^{-1/2} Z,
/// independent of the SVD used by project_stiefel.
CMatrix polar_oracle(const CMatrix& z)
{
    Eigen::SelfAdjointEigenSolver<CMatrix> es(z * z.adjoint());
    const RVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    return es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint() * z;
}

struct ThreadGuard
{
    unsigned saved = worker_threads();
    ~ThreadGuard() { set_worker_threads(saved); }
};

} // namespace

TEST_CASE("random_stiefel is feasible and seed-determined")
{
    RngStream a(11);
    RngStream b(11);
    for (int i = 0; i < 10; ++i)
    {
        const CMatrix p = random_stiefel(3 + i % 4, 12, a);
        CHECK(stiefel_residual(p) <= 1e-12);
        CHECK(p == random_stiefel(3 + i % 4, 12, b));
    }
    CHECK_THROWS_AS(random_stiefel(5, 5, a), DimensionError);
    CHECK_THROWS_AS(random_stiefel(0, 5, a), DimensionError);
}

TEST_CASE("stiefel projection")
{
    RngStream rng(12);
    for (int i = 0; i < 20; ++i)
    {
        const CMatrix z = rng.complex_normal_matrix(4, 9);
        const CMatrix p = project_stiefel(z);
        CHECK(stiefel_residual(p) <= 1e-12);
        CHECK((p - polar_oracle(z)).norm() <= 1e-10);
        // Idempotent on the manifold.
        CHECK((project_stiefel(p) - p).norm() <= 1e-12);
        // Nearest point: no other feasible matrix is closer to z.
        const CMatrix other = random_stiefel(4, 9, rng);
        CHECK((z - p).norm() <= (z - other).norm() + 1e-12);
        // Equivariance under left unitaries.
        const CMatrix u = fixtures::random_unitary(4, rng);
        CHECK((project_stiefel(u * z) - u * p).norm() <= 1e-10);
    }

    CMatrix rank_deficient = rng.complex_normal_matrix(3, 8);
    rank_deficient.row(2) = rank_deficient.row(0);
    CHECK_THROWS_AS(project_stiefel(rank_deficient), SingularityError);
}

TEST_CASE("optimizer config validation")
{
    OptimizerConfig c;
    CHECK_NOTHROW(c.validate());
    c.step_size = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = OptimizerConfig{};
    c.max_iters = -1;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
    c = OptimizerConfig{};
    c.rel_tol = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("projected gradient ascent")
{
    RngStream rng(13);
    const auto objective = fixtures::random_objective(8, 3, 2, 4, 1, 0.5, rng);
    const CMatrix init = random_stiefel(3, 8, rng);

    OptimizerConfig config;
    config.early_stop = false;
    config.max_iters = 60;
    const auto trace = optimize_pgd(init, objective, config);
    REQUIRE(trace.records.size() == 61);
    CHECK(trace.records.front().iteration == 0);
    CHECK(trace.iterations() == 60);
    CHECK_FALSE(trace.stopped_early);
    for (const auto& r : trace.records)
    {
        CHECK(r.residual <= 1e-8);
        CHECK(r.objective == doctest::Approx(objective.rho * r.comm + (1 - objective.rho) * r.sense).epsilon(1e-12));
    }
    CHECK(trace.records.back().objective > trace.records.front().objective);
    CHECK(trace.records.front().objective == doctest::Approx(isac_objective(init, objective)).epsilon(1e-13));
    CHECK(trace.final_pilot.isApprox(project_stiefel(trace.final_pilot), 1e-12));

    // Early stopping fires on a converged run and never before the window.
    config.early_stop = true;
    config.max_iters = 2000;
    config.rel_tol = 1e-6;
    const auto stopped = optimize_pgd(init, objective, config);
    CHECK(stopped.stopped_early);
    CHECK(stopped.iterations() >= config.window);
    CHECK(stopped.iterations() < 2000);
    const auto& recs = stopped.records;
    const double last = recs.back().objective;
    const double earlier = recs[recs.size() - 1 - static_cast<std::size_t>(config.window)].objective;
    CHECK(std::abs(last - earlier) <= config.rel_tol * std::abs(last));

    CHECK_THROWS_AS(optimize_pgd(CMatrix::Identity(3, 3), objective, config), DimensionError);
    CHECK_THROWS_AS(optimize_pgd(2.0 * init, objective, config), InvalidParameter);
}

TEST_CASE("rho sweep matches independent runs regardless of thread count")
{
    ThreadGuard guard;
    RngStream rng(14);
    const auto objective = fixtures::random_objective(6, 2, 1, 3, 0, 0.0, rng);
    const CMatrix init = random_stiefel(2, 6, rng);
    OptimizerConfig config;
    config.max_iters = 30;
    const std::vector<double> rhos = {0.0, 0.5, 1.0};

    set_worker_threads(1);
    const auto serial = rho_sweep(objective, rhos, init, config);
    set_worker_threads(3);
    const auto threaded = rho_sweep(objective, rhos, init, config);
    REQUIRE(serial.size() == 3);
    for (std::size_t i = 0; i < rhos.size(); ++i)
    {
        auto single_obj = objective;
        single_obj.rho = rhos[i];
        const auto single = optimize_pgd(init, single_obj, config);
        CHECK(serial[i].rho == rhos[i]);
        CHECK(serial[i].pilot == single.final_pilot);
        CHECK(serial[i].objective == single.records.back().objective);
        CHECK(serial[i].iterations == single.iterations());
        CHECK(threaded[i].pilot == serial[i].pilot);
        CHECK(threaded[i].comm == serial[i].comm);
    }
    // The endpoints optimize their own term at least as well as the other end.
    CHECK(serial.back().comm >= serial.front().comm);
    CHECK(serial.front().sense >= serial.back().sense);
}

TEST_CASE("pareto dominance")
{
    CHECK(dominates({2, 2}, {1, 1}));
    CHECK(dominates({2, 1}, {1, 1}));
    CHECK_FALSE(dominates({1, 1}, {1, 1}));
    CHECK_FALSE(dominates({2, 0}, {1, 1}));

    const std::vector<MiPoint> pts = {{1, 5}, {2, 4}, {1.5, 3}, {3, 1}, {2, 4}, {0.5, 0.5}};
    const auto idx = pareto_indices(pts);
    CHECK(idx == std::vector<std::size_t>{0, 1, 3, 4});
    CHECK(pareto_filter(pts).size() == 4);
    CHECK(pareto_indices({{1, 1}}) == std::vector<std::size_t>{0});
    CHECK(pareto_indices({}).empty());

    // Property: kept points are mutually non-dominated; every dropped point
    // is dominated by a kept one.
    RngStream rng(15);
    std::vector<MiPoint> cloud;
    for (int i = 0; i < 300; ++i)
    {
        const double t = rng.uniform();
        cloud.push_back({std::sqrt(1 - t * t) * rng.uniform(), t * rng.uniform()});
    }
    const auto front = pareto_indices(cloud);
    std::vector<bool> kept(cloud.size(), false);
    for (auto i : front)
        kept[i] = true;
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        bool dominated = false;
        for (auto j : front)
            dominated = dominated || dominates(cloud[j], cloud[i]);
        CHECK(dominated != kept[i]);
    }
}

TEST_CASE("feasible cloud")
{
    RngStream rng(16);
    const auto objective = fixtures::random_objective(6, 3, 2, 3, 1, 0.5, rng);
    const RngStream base(77);
    const auto cloud = sample_feasible_cloud(25, 2, objective, base);
    REQUIRE(cloud.size() == 25);
    for (std::size_t i = 0; i < cloud.size(); ++i)
    {
        CHECK(std::isfinite(cloud[i].comm));
        CHECK(std::isfinite(cloud[i].sense));
        RngStream s = base.substream(i);
        const CMatrix p = random_stiefel(2, 6, s);
        CHECK(cloud[i].comm == doctest::Approx(comm_mi_weighted(p, objective)).epsilon(1e-13));
        CHECK(cloud[i].sense == doctest::Approx(sensing_mi(p, objective.scene, objective.sensing_formula)).epsilon(1e-13));
    }
    CHECK(sample_feasible_cloud(1, 2, objective, base).size() == 1);
    CHECK(pareto_filter(sample_feasible_cloud(1, 2, objective, base)).size() == 1);
}
