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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Seeds derive from a single fixed master seed; criterion c,
// repetition i uses master.substream(c).substream(i).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "isacpilot/experiment.hpp"
#include "isacpilot/gradients.hpp"
#include "isacpilot/montecarlo.hpp"
#include "isacpilot/parallel.hpp"

using namespace isacpilot;
namespace fs = std::filesystem;

namespace
{

constexpr std::uint64_t master_seed = 20261019;

RngStream stream(int criterion, int rep)
{
    return RngStream(master_seed).substream(static_cast<std::uint64_t>(criterion)).substream(static_cast<std::uint64_t>(rep));
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* pattern, ...)
{
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

// ---- Scenarios ----------------------------------------------------------------

IsacObjective single_user(int n_tx, int n_rx, double noise_std, double target_deg, double target_power,
                          double radar_noise, double rho)
{
    IsacObjective o;
    o.rho = rho;
    o.users = {build_user_model({n_tx, n_rx}, 70.0, 6.0, 180, noise_std, MeanPolicy{})};
    o.user_weights = RVector::Ones(1);
    o.scene.geometry = {n_tx, n_rx};
    o.scene.target_angle_deg = target_deg;
    o.scene.target_power = target_power;
    o.scene.radar_noise_std = radar_noise;
    return o;
}

/// N_t = 20, N_r = 5, user around 70 deg with 6 deg spread, sigma = 0.1,
/// target at 60 deg, sigma_r = 2.
IsacObjective baseline_scenario(double rho) { return single_user(20, 5, 0.1, 60.0, 0.5, 2.0, rho); }

/// L = 2 trade-off scenario: target at -20 deg, away from the user.
IsacObjective tradeoff_scenario() { return single_user(20, 5, 0.2, -20.0, 1.0, 0.1, 0.0); }

/// K = 4 users at 70, 23, -23, -70 deg with 4 deg spread.
IsacObjective multi_user(double rho)
{
    IsacObjective o;
    o.rho = rho;
    for (double aoa : {70.0, 23.0, -23.0, -70.0})
        o.users.push_back(build_user_model({20, 5}, aoa, 4.0, 180, 0.1, MeanPolicy{}));
    o.user_weights = RVector::Constant(4, 0.25);
    o.scene.geometry = {20, 5};
    o.scene.target_angle_deg = -20.0;
    o.scene.target_power = 1.0;
    o.scene.radar_noise_std = 1.0;
    return o;
}

SensingScene random_scene(int n_tx, int n_rx, int q, RngStream& rng)
{
    SensingScene s;
    s.geometry = {n_tx, n_rx};
    s.target_angle_deg = -60.0 + 120.0 * rng.uniform();
    s.target_power = 0.5 + rng.uniform();
    s.radar_noise_std = 0.7 + 0.6 * rng.uniform();
    for (int i = 0; i < q; ++i)
        s.clutter.push_back({-80.0 + 160.0 * rng.uniform(), 0.5 + rng.uniform()});
    return s;
}

// ---- Criteria -----------------------------------------------------------------

Outcome gradient_oracle()
{
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        RngStream rng = stream(1, i);
        IsacObjective o;
        o.rho = rng.uniform();
        for (int k = 0; k < 2; ++k)
            o.users.push_back(build_user_model({8, 4}, -60.0 + 120.0 * rng.uniform(), 3.0 + 12.0 * rng.uniform(), 5,
                                               0.3 + 0.7 * rng.uniform(), MeanPolicy{}));
        o.user_weights = RVector::Constant(2, 0.5);
        o.scene = random_scene(8, 4, 2, rng);
        const CMatrix pilot = random_stiefel(3, 8, rng);
        for (const auto& u : o.users)
            worst = std::max(worst, finite_diff_check([&](const CMatrix& p) { return comm_mi_user(p, u); },
                                                      [&](const CMatrix& p) { return grad_comm_mi_user(p, u); }, pilot));
        for (auto f : {SensingFormula::approx, SensingFormula::exact})
        {
            worst = std::max(worst, finite_diff_check([&](const CMatrix& p) { return sensing_mi(p, o.scene, f); },
                                                      [&](const CMatrix& p) { return grad_sensing_mi(p, o.scene, f); },
                                                      pilot));
            o.sensing_formula = f;
            worst = std::max(worst, finite_diff_check([&](const CMatrix& p) { return isac_objective(p, o); },
                                                      [&](const CMatrix& p) { return grad_isac(p, o); }, pilot));
        }
    }
    return {worst <= 1e-5, fmt("max relative error %.3g over 20 instances (limit 1e-5)", worst)};
}

Outcome feasibility()
{
    OptimizerConfig c;
    c.early_stop = false;
    c.max_iters = 200;
    RngStream rng = stream(2, 0);
    const auto trace = optimize_pgd(random_stiefel(9, 20, rng), baseline_scenario(0.8), c);
    double worst = 0.0;
    for (const auto& r : trace.records)
        worst = std::max(worst, r.residual);
    const bool ok = trace.records.size() == 201 && worst <= 1e-8;
    return {ok, fmt("max ||PP^H - I||_F %.3g over %zu iterates (limit 1e-8)", worst, trace.records.size())};
}

Outcome sensing_oracle()
{
    double worst_low_q = 0.0;
    for (int i = 0; i < 40; ++i)
    {
        RngStream rng = stream(3, i);
        const int q = i % 2;
        const SensingScene s = random_scene(8, 1 + i % 6, q, rng);
        const CMatrix p = random_stiefel(3, 8, rng);
        worst_low_q = std::max(worst_low_q, std::abs(sensing_mi_approx(p, s) - sensing_mi_exact(p, s)));
    }
    int shrinking = 0;
    for (int i = 0; i < 20; ++i)
    {
        RngStream rng = stream(3, 100 + i);
        SensingScene s = random_scene(8, 4, 2, rng);
        const CMatrix p = random_stiefel(3, 8, rng);
        const double gap4 = std::abs(sensing_mi_approx(p, s) - sensing_mi_exact(p, s));
        s.geometry.n_rx = 64;
        const double gap64 = std::abs(sensing_mi_approx(p, s) - sensing_mi_exact(p, s));
        shrinking += gap64 < gap4;
    }
    return {worst_low_q <= 1e-10 && shrinking >= 18,
            fmt("Q<=1 max |approx-exact| %.3g (limit 1e-10); Q=2 gap smaller at N_r=64 in %d/20 (need 18)",
                worst_low_q, shrinking)};
}

Outcome unitary_invariance()
{
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        RngStream rng = stream(4, i);
        const auto user = build_user_model({8, 4}, -60.0 + 120.0 * rng.uniform(), 3.0 + 10.0 * rng.uniform(), 12,
                                           0.3 + 0.7 * rng.uniform(), MeanPolicy{});
        const SensingScene s = random_scene(8, 4, i % 3, rng);
        const CMatrix p = random_stiefel(3, 8, rng);
        Eigen::HouseholderQR<CMatrix> qr(rng.complex_normal_matrix(3, 3));
        const CMatrix u = qr.householderQ() * CMatrix::Identity(3, 3);
        const CMatrix up = u * p;
        worst = std::max(worst, std::abs(comm_mi_user(up, user) - comm_mi_user(p, user)));
        worst = std::max(worst, std::abs(sensing_mi_exact(up, s) - sensing_mi_exact(p, s)));
        worst = std::max(worst, std::abs(sensing_mi_approx(up, s) - sensing_mi_approx(p, s)));
    }
    return {worst <= 1e-9, fmt("max |M(UP) - M(P)| %.3g over 20 seeds (limit 1e-9)", worst)};
}

const std::vector<double> sweep_rhos = {0.0, 0.25, 0.5, 0.75, 1.0};

Outcome tradeoff_ordering()
{
    const auto objective = tradeoff_scenario();
    std::vector<std::vector<double>> comm(sweep_rhos.size()), sense(sweep_rhos.size());
    int intact = 0;
    for (int i = 0; i < 5; ++i)
    {
        RngStream rng = stream(5, i);
        const auto pts = rho_sweep(objective, sweep_rhos, random_stiefel(2, 20, rng), OptimizerConfig{});
        std::vector<MiPoint> ends;
        for (std::size_t j = 0; j < pts.size(); ++j)
        {
            comm[j].push_back(pts[j].comm);
            sense[j].push_back(pts[j].sense);
            ends.push_back({pts[j].sense, pts[j].comm});
        }
        intact += pareto_indices(ends).size() == ends.size();
    }
    bool monotone = true;
    std::string path;
    for (std::size_t j = 0; j < sweep_rhos.size(); ++j)
    {
        if (j > 0)
            monotone = monotone && median(comm[j]) >= median(comm[j - 1]) && median(sense[j]) <= median(sense[j - 1]);
        path += fmt(" (%.2f,%.2f)", nats_to_bits(median(sense[j])), nats_to_bits(median(comm[j])));
    }
    const bool gaps = median(comm.back()) > median(comm.front()) && median(sense.front()) > median(sense.back());
    return {monotone && gaps && intact >= 4,
            fmt("median (sense,comm) bits by rho:%s; monotone=%d gaps=%d; Pareto keeps all 5 in %d/5 seeds (need 4)",
                path.c_str(), monotone, gaps, intact)};
}

Outcome frontier_dominance()
{
    const auto objective = tradeoff_scenario();
    int good = 0;
    for (int i = 0; i < 10; ++i)
    {
        RngStream rng = stream(6, i);
        const auto pts = rho_sweep(objective, sweep_rhos, random_stiefel(2, 20, rng), OptimizerConfig{});
        const auto cloud = sample_feasible_cloud(1000, 2, objective, rng.substream(1));
        bool all = true;
        for (const auto& p : pts)
        {
            const MiPoint e{p.sense, p.comm};
            all = all && std::none_of(cloud.begin(), cloud.end(), [&](const MiPoint& c) { return dominates(c, e); });
        }
        good += all;
    }
    return {good >= 9, fmt("all 5 endpoints undominated by 1000 random pilots in %d/10 seeds (need 9)", good)};
}

Outcome roc_ordering()
{
    int wins = 0;
    std::vector<double> gains;
    std::vector<double> h0;
    for (int i = 0; i < 10; ++i)
    {
        RngStream rng = stream(7, i);
        const CMatrix init = random_stiefel(9, 20, rng);
        const auto objective = baseline_scenario(0.8);
        const CMatrix opt = optimize_pgd(init, objective, OptimizerConfig{}).final_pilot;
        const RngStream eval = rng.substream(1);
        const double pd_opt = roc_curve(opt, objective.scene, 100000, {1e-2}, eval).points[0].p_d;
        const double pd_rand = roc_curve(init, objective.scene, 100000, {1e-2}, eval).points[0].p_d;
        gains.push_back(pd_opt - pd_rand);
        wins += pd_opt - pd_rand >= 0.02;

        if (i == 0)
        {
            // Q = 0: T / (sigma_r^2 ||w||^2) is Exp(1) under H0.
            const RadarDetector det(opt, objective.scene);
            const double scale = std::pow(objective.scene.radar_noise_std, 2) * det.filter().squaredNorm();
            for (int t = 0; t < 100000; ++t)
            {
                RngStream trial = eval.substream(static_cast<std::uint64_t>(t)).substream(0);
                h0.push_back(det.statistic(simulate_radar_frame(opt, objective.scene, Hypothesis::h0, trial)) / scale);
            }
        }
    }
    std::sort(h0.begin(), h0.end());
    double ks = 0.0;
    const double n = static_cast<double>(h0.size());
    for (std::size_t k = 0; k < h0.size(); ++k)
    {
        const double f = 1.0 - std::exp(-h0[k]);
        ks = std::max({ks, (static_cast<double>(k) + 1.0) / n - f, f - static_cast<double>(k) / n});
    }
    const double ks_crit = 1.628 / std::sqrt(n);
    return {wins >= 9 && ks < ks_crit,
            fmt("P_d gain >= 0.02 at p_fa=1e-2 in %d/10 seeds (need 9), median gain %.3f; H0 KS %.4f < %.4f",
                wins, median(gains), ks, ks_crit)};
}

/// Optimized (rho = 1) multi-user pilots and their shared initializers,
/// reused by the NMSE and SER criteria.
struct MultiUserPilots
{
    std::vector<CMatrix> init;
    std::vector<CMatrix> optimized;
};

const MultiUserPilots& multi_user_pilots()
{
    static const MultiUserPilots pilots = [] {
        MultiUserPilots p;
        const auto objective = multi_user(1.0);
        for (int i = 0; i < 10; ++i)
        {
            RngStream rng = stream(8, i);
            p.init.push_back(random_stiefel(9, 20, rng));
            p.optimized.push_back(optimize_pgd(p.init.back(), objective, OptimizerConfig{}).final_pilot);
        }
        return p;
    }();
    return pilots;
}

Outcome nmse_ordering()
{
    const auto objective = multi_user(1.0);
    const auto& pilots = multi_user_pilots();
    const CMatrix dft = dft_pilot(9, 20);
    const CMatrix eig = eigen_pilot(9, objective.users);
    std::vector<double> opt, rnd, eg, df;
    for (int i = 0; i < 10; ++i)
    {
        const RngStream eval = stream(8, i).substream(1);
        opt.push_back(nmse_experiment(pilots.optimized[static_cast<std::size_t>(i)], objective.users, 1000, eval).pooled);
        rnd.push_back(nmse_experiment(pilots.init[static_cast<std::size_t>(i)], objective.users, 1000, eval).pooled);
        eg.push_back(nmse_experiment(eig, objective.users, 1000, eval).pooled);
        df.push_back(nmse_experiment(dft, objective.users, 1000, eval).pooled);
    }
    const double mo = median(opt), mr = median(rnd), me = median(eg), md = median(df);
    const bool ok = mo <= mr && mo <= me && md >= mr && md >= me && md >= mo;
    const auto db = [](double x) { return 10.0 * std::log10(x); };
    return {ok, fmt("median pooled NMSE dB: optimized %.2f, random %.2f, eigen %.2f, dft %.2f", db(mo), db(mr), db(me),
                    db(md))};
}

Outcome ser_ordering()
{
    const auto objective = multi_user(1.0);
    const auto& pilots = multi_user_pilots();
    std::vector<double> opt, rnd;
    for (int i = 0; i < 5; ++i)
    {
        const RngStream eval = stream(9, i);
        opt.push_back(ser_experiment(pilots.optimized[static_cast<std::size_t>(i)], objective.users, {10.0}, 100000, 100, eval)[0].ser);
        rnd.push_back(ser_experiment(pilots.init[static_cast<std::size_t>(i)], objective.users, {10.0}, 100000, 100, eval)[0].ser);
    }
    return {median(opt) < median(rnd),
            fmt("median SER at 10 dB, K=4, 1e5 symbols: optimized %.5f < random %.5f", median(opt), median(rnd))};
}

Outcome convergence_stability()
{
    double worst_spread = 0.0;
    int fast = 0;
    const auto objective = baseline_scenario(0.8);
    for (int i = 0; i < 5; ++i)
    {
        RngStream rng = stream(10, i);
        const CMatrix init = random_stiefel(9, 20, rng);
        OptimizerConfig c;
        c.early_stop = false;
        const auto slow = optimize_pgd(init, objective, c);
        double lo = slow.records.back().objective, hi = lo;
        for (std::size_t t = slow.records.size() - 20; t < slow.records.size(); ++t)
        {
            lo = std::min(lo, slow.records[t].objective);
            hi = std::max(hi, slow.records[t].objective);
        }
        worst_spread = std::max(worst_spread, (hi - lo) / std::abs(slow.records.back().objective));

        c.step_size = 0.5;
        const auto quick = optimize_pgd(init, objective, c);
        const double final_value = quick.records.back().objective;
        fast += std::abs(quick.records[60].objective - final_value) <= 1e-3 * std::abs(final_value);
    }
    return {worst_spread <= 1e-4 && fast >= 4,
            fmt("gamma=0.1 worst relative spread over last 20 of 200: %.3g (limit 1e-4); gamma=0.5 within 1e-3 by "
                "iteration 60 in %d/5 (need 4)",
                worst_spread, fast)};
}

Outcome mmse_identity()
{
    double worst_lin = 0.0;
    double worst_sum = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        RngStream rng = stream(11, i);
        const auto m1 = build_user_model({8, 1}, -60.0 + 120.0 * rng.uniform(), 5.0, 1, 0.2 + rng.uniform(), MeanPolicy{});
        const CMatrix p = random_stiefel(3, 8, rng);
        const CVector y = simulate_pilot_rx(p, sample_channel(m1, rng), m1.noise_std, rng);
        const CMatrix& r = m1.covariances[0];
        const CMatrix s = p * r * p.adjoint() + m1.noise_std * m1.noise_std * CMatrix::Identity(3, 3);
        const CVector lmmse = m1.means[0] + r * p.adjoint() * s.ldlt().solve(y - p * m1.means[0]);
        worst_lin = std::max(worst_lin, (gmm_mmse_estimate(y, p, m1) - lmmse).norm() / std::max(1.0, lmmse.norm()));

        const auto m = build_user_model({8, 1}, -60.0 + 120.0 * rng.uniform(), 6.0, 180, 0.1, MeanPolicy{});
        const GmmMmseEstimator est(p, m);
        for (int t = 0; t < 50; ++t)
        {
            RVector resp;
            est.estimate(simulate_pilot_rx(p, sample_channel(m, rng), m.noise_std, rng), &resp);
            worst_sum = std::max(worst_sum, std::abs(resp.sum() - 1.0));
        }
    }
    return {worst_lin <= 1e-10 && worst_sum <= 1e-12,
            fmt("N_k=1 vs linear MMSE %.3g (limit 1e-10); |sum p - 1| %.3g (limit 1e-12)", worst_lin, worst_sum)};
}

Outcome kl_identities()
{
    double worst = 0.0;
    double g_min = 1.0, g_max = 0.0;
    for (int i = 0; i < 40; ++i)
    {
        RngStream rng = stream(12, i);
        const SensingScene s = random_scene(8, 1 + i % 5, i % 3, rng);
        const CMatrix p = random_stiefel(3, 8, rng);
        const auto kg = sense_kl_and_g(p, s);
        worst = std::max(worst, std::abs(kg.kl - sense_kl_direct(p, s)));
        g_min = std::min(g_min, kg.g);
        g_max = std::max(g_max, kg.g);
    }
    RngStream rng = stream(12, 1000);
    SensingScene loud = random_scene(8, 4, 1, rng);
    loud.target_power = 1e6;
    const double g_loud = sense_kl_and_g(random_stiefel(3, 8, rng), loud).g;
    const bool ok = worst <= 1e-10 && g_min >= 0.0 && g_max < 1.0 && std::abs(g_loud - 1.0) <= 1e-3;
    return {ok, fmt("max |closed - direct| %.3g (limit 1e-10); g in [%.4f, %.4f]; |g-1| at nu0=1e6: %.3g", worst, g_min,
                    g_max, std::abs(g_loud - 1.0))};
}

Outcome diagnostic_trend()
{
    const auto objective = single_user(20, 5, 0.1, 60.0, 0.5, 2.0, 1.0);
    const RngStream eval = stream(13, 1000);
    std::vector<double> comm, cworst;
    for (int i = 0; i < 50; ++i)
    {
        RngStream rng = stream(13, i);
        const CMatrix p = random_stiefel(4, 20, rng);
        comm.push_back(comm_mi_user(p, objective.users[0]));
        cworst.push_back(c_worst_estimate(p, objective.users, 100, 1000, eval));
    }
    const double rs = spearman_correlation(comm, cworst);
    return {rs > 0.5, fmt("Spearman(comm MI, C_worst) = %.3f over 50 random pilots, L=4, 1e3 trials (need > 0.5)", rs)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism()
{
    const fs::path dir = fs::temp_directory_path() / "isacpilot_acceptance_determinism";
    fs::remove_all(dir);
    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(ISACPILOT_CONFIG_DIR))
        if (e.path().extension() == ".json")
            configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());

    const unsigned saved = worker_threads();
    int identical = 0;
    int files = 0;
    std::string failures;
    for (const auto& cfg : configs)
    {
        const auto config = load_config(cfg.string());
        const Task task = config.task.value_or(Task::gradcheck);
        const fs::path a = dir / cfg.stem() / "threads1";
        const fs::path b = dir / cfg.stem() / "threads2";
        set_worker_threads(1);
        const int ra = run_config(task, cfg.string(), RunOptions{std::nullopt, a.string()});
        set_worker_threads(2);
        const int rb = run_config(task, cfg.string(), RunOptions{std::nullopt, b.string()});
        bool same = ra == 0 && rb == 0;
        for (const auto& f : fs::directory_iterator(a))
        {
            ++files;
            same = same && fs::exists(b / f.path().filename()) && slurp(f.path()) == slurp(b / f.path().filename());
        }
        identical += same;
        if (!same)
            failures += " " + cfg.stem().string();
    }
    set_worker_threads(saved);
    const int n = static_cast<int>(configs.size());
    return {n > 0 && identical == n,
            fmt("%d/%d bundled configs byte-identical across two runs (--threads 1 vs 2), %d files%s", identical, n,
                files, failures.empty() ? "" : (", differing:" + failures).c_str())};
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double time_limit_s; ///< 0: no runtime bound
    };
    const std::vector<Criterion> criteria = {
        {1, "gradient oracle", gradient_oracle, 60},
        {2, "feasibility", feasibility, 60},
        {3, "sensing-MI oracle", sensing_oracle, 0},
        {4, "unitary invariance", unitary_invariance, 0},
        {5, "trade-off ordering", tradeoff_ordering, 600},
        {6, "frontier dominance", frontier_dominance, 0},
        {7, "ROC ordering", roc_ordering, 600},
        {8, "NMSE ordering", nmse_ordering, 0},
        {9, "SER ordering", ser_ordering, 900},
        {10, "convergence stability", convergence_stability, 0},
        {11, "MMSE identity", mmse_identity, 0},
        {12, "KL/Stein identities", kl_identities, 0},
        {13, "diagnostic trend", diagnostic_trend, 0},
        {14, "determinism", determinism, 0},
    };

    int failed = 0;
    for (const auto& c : criteria)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit_s > 0 && secs > c.time_limit_s)
        {
            o.pass = false;
            o.detail += fmt("; runtime %.0f s exceeds %.0f s", secs, c.time_limit_s);
        }
        failed += !o.pass;
        std::printf("%s [%2d] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
