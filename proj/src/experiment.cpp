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

#include "isacpilot/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "isacpilot/gradients.hpp"
#include "isacpilot/montecarlo.hpp"
#include "isacpilot/parallel.hpp"

namespace isacpilot
{

namespace fs = std::filesystem;

// ---- Tables -------------------------------------------------------------------

namespace
{

std::string format_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string format_table(const ResultTable& table)
{
    std::string out;
    for (const auto& [key, value] : table.metadata)
        out += "# " + key + ": " + value + "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out += (c ? "," : "") + table.columns[c];
    out += "\n";
    for (const auto& row : table.rows)
    {
        if (row.size() != table.columns.size())
            throw InvalidParameter("format_table: row width does not match the column count in '" + table.name + "'");
        for (std::size_t c = 0; c < row.size(); ++c)
            out += (c ? "," : "") + format_real(row[c]);
        out += "\n";
    }
    return out;
}

namespace
{

std::string temp_path_for(const std::string& path) { return path + ".tmp"; }

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError("write to '" + path + "' failed");
}

void rename_into_place(const std::string& from, const std::string& to)
{
    std::error_code ec;
    fs::rename(from, to, ec);
    if (ec)
        throw IoError("cannot rename '" + from + "' to '" + to + "': " + ec.message());
}

} // namespace

void emit_table(const ResultTable& table, const std::string& path)
{
    const std::string content = format_table(table);
    const std::string tmp = temp_path_for(path);
    try
    {
        write_file(tmp, content);
        rename_into_place(tmp, path);
    }
    catch (...)
    {
        std::error_code ec;
        fs::remove(tmp, ec);
        throw;
    }
}

// ---- Tasks --------------------------------------------------------------------

namespace
{

// Master-seed substreams, one per purpose, so adding a task never shifts the
// random numbers of another.
enum Stream : std::uint64_t
{
    stream_init = 0,     ///< shared initializer; also the random baseline pilot
    stream_eval = 1,     ///< Monte Carlo evaluation, common to all pilots
    stream_cloud = 2,
    stream_gradcheck = 3,
    stream_diagnostics = 4,
};

constexpr double gradcheck_rho = 0.5;

double bits(double nats) { return nats_to_bits(nats); }

struct Context
{
    const ExperimentConfig& config;
    RngStream master;
    CMatrix shared_init;

    explicit Context(const ExperimentConfig& c) : config(c), master(c.seed)
    {
        RngStream init = master.substream(stream_init);
        shared_init = random_stiefel(c.pilot_length, c.scenario.geometry.n_tx, init);
    }

    std::vector<std::pair<std::string, std::string>> metadata(Task task) const
    {
        std::vector<std::pair<std::string, std::string>> m = {
            {"config_hash", config.hash},
            {"seed", std::to_string(config.seed)},
            {"version", version_string},
            {"task", task_name(task)},
            {"units", "MI in bits"},
            {"mean_policy", config.scenario.mean_policy.describe()},
            {"sensing_formula", config.sensing_formula == SensingFormula::approx ? "approx" : "exact"},
        };
        if (config.scenario.carrier_frequency_hz)
            m.emplace_back("carrier_frequency_hz", format_real(*config.scenario.carrier_frequency_hz));
        return m;
    }

    CMatrix pilot(const PilotSpec& spec) const
    {
        const int l = config.pilot_length;
        switch (spec.kind)
        {
        case PilotKind::optimized:
            return optimize_pgd(shared_init, build_objective(config, spec.rho), config.optimizer).final_pilot;
        case PilotKind::random: return shared_init;
        case PilotKind::dft: return dft_pilot(l, config.scenario.geometry.n_tx);
        case PilotKind::eigen: return eigen_pilot(l, build_users(config.scenario));
        }
        throw InvalidParameter("unknown pilot kind");
    }
};

template <class T>
const T& section(const std::optional<T>& s, Task task)
{
    if (!s)
    {
        std::string key = task_name(task);
        std::replace(key.begin(), key.end(), '-', '_');
        throw ConfigError("task '" + task_name(task) + "' requires a '" + key + "' section", 0, 0);
    }
    return *s;
}

void add_pilot_labels(ResultTable& t, const std::vector<PilotSpec>& pilots)
{
    for (std::size_t i = 0; i < pilots.size(); ++i)
        t.metadata.emplace_back("pilot_" + std::to_string(i), pilots[i].label());
}

std::string fmt(const char* pattern, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

RunResult run_optimize(const Context& ctx)
{
    const auto& sec = section(ctx.config.optimize, Task::optimize);
    const auto objective = build_objective(ctx.config, sec.rho);
    const auto trace = optimize_pgd(ctx.shared_init, objective, ctx.config.optimizer);

    ResultTable t{"trace", ctx.metadata(Task::optimize), {"iteration", "objective_bits", "comm_mi_bits", "sense_mi_bits", "residual"}, {}};
    t.metadata.emplace_back("rho", format_real(sec.rho));
    t.metadata.emplace_back("stopped_early", trace.stopped_early ? "true" : "false");
    for (const auto& r : trace.records)
        t.rows.push_back({double(r.iteration), bits(r.objective), bits(r.comm), bits(r.sense), r.residual});

    ResultTable p{"pilot", ctx.metadata(Task::optimize), {"row", "col", "re", "im"}, {}};
    for (Eigen::Index r = 0; r < trace.final_pilot.rows(); ++r)
        for (Eigen::Index c = 0; c < trace.final_pilot.cols(); ++c)
            p.rows.push_back({double(r), double(c), trace.final_pilot(r, c).real(), trace.final_pilot(r, c).imag()});

    const auto& last = trace.records.back();
    RunResult out{{std::move(t), std::move(p)}, {}, true};
    out.summary = "optimize: " + std::to_string(trace.iterations()) + " iterations, objective " +
                  fmt("%.6g", bits(last.objective)) + " bits, comm " + fmt("%.6g", bits(last.comm)) + " bits, sense " +
                  fmt("%.6g", bits(last.sense)) + " bits, residual " + fmt("%.3g", last.residual);
    return out;
}

ResultTable frontier_table(const Context& ctx, Task task, const std::vector<SweepPoint>& points)
{
    ResultTable t{"frontier", ctx.metadata(task), {"rho", "comm_mi_bits", "sense_mi_bits", "objective_bits", "iters", "residual"}, {}};
    for (const auto& p : points)
        t.rows.push_back({p.rho, bits(p.comm), bits(p.sense), bits(p.objective), double(p.iterations), p.residual});
    return t;
}

RunResult run_sweep(const Context& ctx)
{
    const auto& sec = section(ctx.config.sweep, Task::sweep);
    const auto points = rho_sweep(build_objective(ctx.config, 0.0), sec.rho_values, ctx.shared_init, ctx.config.optimizer);
    RunResult out{{frontier_table(ctx, Task::sweep, points)}, {}, true};
    out.summary = "sweep: " + std::to_string(points.size()) + " rho values, comm " +
                  fmt("%.6g", bits(points.front().comm)) + " -> " + fmt("%.6g", bits(points.back().comm)) +
                  " bits, sense " + fmt("%.6g", bits(points.front().sense)) + " -> " +
                  fmt("%.6g", bits(points.back().sense)) + " bits";
    return out;
}

RunResult run_pareto_cloud(const Context& ctx)
{
    const auto& sec = section(ctx.config.pareto_cloud, Task::pareto_cloud);
    const auto objective = build_objective(ctx.config, 0.0);
    const auto points = rho_sweep(objective, sec.rho_values, ctx.shared_init, ctx.config.optimizer);
    const auto cloud = sample_feasible_cloud(sec.n_samples, ctx.config.pilot_length, objective,
                                             ctx.master.substream(stream_cloud));

    const auto cloud_front = pareto_indices(cloud);
    std::vector<double> on_front(cloud.size(), 0.0);
    for (auto i : cloud_front)
        on_front[i] = 1.0;

    ResultTable c{"cloud", ctx.metadata(Task::pareto_cloud), {"sample", "comm_mi_bits", "sense_mi_bits", "on_frontier"}, {}};
    for (std::size_t i = 0; i < cloud.size(); ++i)
        c.rows.push_back({double(i), bits(cloud[i].comm), bits(cloud[i].sense), on_front[i]});

    int undominated = 0;
    for (const auto& p : points)
    {
        const MiPoint e{p.sense, p.comm};
        undominated += std::none_of(cloud.begin(), cloud.end(), [&](const MiPoint& q) { return dominates(q, e); });
    }
    RunResult out{{frontier_table(ctx, Task::pareto_cloud, points), std::move(c)}, {}, true};
    out.summary = "pareto-cloud: " + std::to_string(undominated) + "/" + std::to_string(points.size()) +
                  " sweep endpoints undominated by " + std::to_string(cloud.size()) + " random pilots (" +
                  std::to_string(cloud_front.size()) + " cloud points on the cloud frontier)";
    return out;
}

RunResult run_roc(const Context& ctx)
{
    const auto& sec = section(ctx.config.roc, Task::roc);
    ResultTable t{"roc", ctx.metadata(Task::roc), {"pilot", "p_fa_target", "threshold", "p_fa", "p_d", "under_resolved"}, {}};
    t.metadata.emplace_back("n_trials", std::to_string(sec.n_trials));
    add_pilot_labels(t, sec.pilots);
    const RngStream eval = ctx.master.substream(stream_eval);
    std::string summary = "roc:";
    for (std::size_t i = 0; i < sec.pilots.size(); ++i)
    {
        const auto curve = roc_curve(ctx.pilot(sec.pilots[i]), ctx.config.scenario.scene, sec.n_trials, sec.p_fa_grid, eval);
        for (const auto& p : curve.points)
            t.rows.push_back({double(i), p.p_fa_target, p.threshold, p.p_fa, p.p_d, p.under_resolved ? 1.0 : 0.0});
        const auto& first = curve.points.front();
        summary += " " + sec.pilots[i].label() + " p_d=" + fmt("%.4f", first.p_d) + "@" + fmt("%g", first.p_fa_target);
    }
    return {{std::move(t)}, summary, true};
}

RunResult run_nmse(const Context& ctx)
{
    const auto& sec = section(ctx.config.nmse, Task::nmse);
    const auto users = build_users(ctx.config.scenario);
    std::vector<std::string> cols = {"pilot", "pooled_nmse", "pooled_nmse_db", "skipped"};
    for (std::size_t k = 0; k < users.size(); ++k)
        cols.push_back("user_" + std::to_string(k) + "_nmse");
    ResultTable t{"nmse", ctx.metadata(Task::nmse), cols, {}};
    t.metadata.emplace_back("n_trials", std::to_string(sec.n_trials));
    add_pilot_labels(t, sec.pilots);
    const RngStream eval = ctx.master.substream(stream_eval);
    std::string summary = "nmse:";
    for (std::size_t i = 0; i < sec.pilots.size(); ++i)
    {
        const auto r = nmse_experiment(ctx.pilot(sec.pilots[i]), users, sec.n_trials, eval);
        std::vector<double> row = {double(i), r.pooled, 10.0 * std::log10(r.pooled), double(r.skipped)};
        row.insert(row.end(), r.per_user.begin(), r.per_user.end());
        t.rows.push_back(std::move(row));
        summary += " " + sec.pilots[i].label() + "=" + fmt("%.2f", 10.0 * std::log10(r.pooled)) + "dB";
    }
    return {{std::move(t)}, summary, true};
}

RunResult run_ser(const Context& ctx)
{
    const auto& sec = section(ctx.config.ser, Task::ser);
    const auto users = build_users(ctx.config.scenario);
    ResultTable t{"ser", ctx.metadata(Task::ser), {"pilot", "snr_db", "ser", "errors", "symbols"}, {}};
    t.metadata.emplace_back("block_len", std::to_string(sec.block_len));
    t.metadata.emplace_back("snr_definition",
                            "10 log10(1 / noise variance) per receive sample, unit-norm ZF columns, unit-energy 64-QAM");
    add_pilot_labels(t, sec.pilots);
    const RngStream eval = ctx.master.substream(stream_eval);
    std::string summary = "ser:";
    for (std::size_t i = 0; i < sec.pilots.size(); ++i)
    {
        const auto pts = ser_experiment(ctx.pilot(sec.pilots[i]), users, sec.snr_grid_db, sec.n_symbols, sec.block_len, eval);
        for (const auto& p : pts)
            t.rows.push_back({double(i), p.snr_db, p.ser, double(p.errors), double(p.symbols)});
        const auto& mid = pts[pts.size() / 2];
        summary += " " + sec.pilots[i].label() + "=" + fmt("%.4g", mid.ser) + "@" + fmt("%g", mid.snr_db) + "dB";
    }
    return {{std::move(t)}, summary, true};
}

RunResult run_gradcheck(const Context& ctx)
{
    const auto& sec = section(ctx.config.gradcheck, Task::gradcheck);
    const auto objective = build_objective(ctx.config, gradcheck_rho);
    const int l = ctx.config.pilot_length;
    const int n_tx = ctx.config.scenario.geometry.n_tx;
    const SensingFormula formula = ctx.config.sensing_formula;

    std::vector<std::vector<double>> rows(static_cast<std::size_t>(sec.instances));
    const RngStream base = ctx.master.substream(stream_gradcheck);
    parallel_for(rows.size(), [&](std::size_t i) {
        RngStream rng = base.substream(i);
        const CMatrix pilot = random_stiefel(l, n_tx, rng);
        double comm = 0.0;
        for (const auto& u : objective.users)
            comm = std::max(comm, finite_diff_check([&](const CMatrix& p) { return comm_mi_user(p, u); },
                                                    [&](const CMatrix& p) { return grad_comm_mi_user(p, u); }, pilot,
                                                    sec.step));
        const double sense = finite_diff_check(
            [&](const CMatrix& p) { return sensing_mi(p, objective.scene, formula); },
            [&](const CMatrix& p) { return grad_sensing_mi(p, objective.scene, formula); }, pilot, sec.step);
        const double isac = finite_diff_check([&](const CMatrix& p) { return isac_objective(p, objective); },
                                              [&](const CMatrix& p) { return grad_isac(p, objective); }, pilot, sec.step);
        rows[i] = {double(i), comm, sense, isac};
    });

    ResultTable t{"gradcheck", ctx.metadata(Task::gradcheck), {"instance", "comm_rel_err", "sense_rel_err", "isac_rel_err"}, std::move(rows)};
    t.metadata.emplace_back("isac_rho", format_real(gradcheck_rho));
    t.metadata.emplace_back("fd_step", format_real(sec.step));
    t.metadata.emplace_back("tolerance", format_real(sec.tolerance));
    double worst = 0.0;
    for (const auto& r : t.rows)
        worst = std::max({worst, r[1], r[2], r[3]});
    const bool ok = worst <= sec.tolerance;
    const std::string summary = "gradcheck: max relative error " + fmt("%.3g", worst) + " over " +
                                std::to_string(sec.instances) + " instances (tolerance " + fmt("%g", sec.tolerance) +
                                ") " + (ok ? "PASS" : "FAIL");
    return {{std::move(t)}, summary, ok};
}

RunResult run_diagnostics(const Context& ctx)
{
    const auto& sec = section(ctx.config.diagnostics, Task::diagnostics);
    const auto objective = build_objective(ctx.config, 1.0);
    const int l = ctx.config.pilot_length;
    const int n_tx = ctx.config.scenario.geometry.n_tx;
    const RngStream base = ctx.master.substream(stream_diagnostics);
    const RngStream eval = ctx.master.substream(stream_eval);
    const IsacEvaluator evaluator(objective);

    std::vector<std::vector<double>> rows;
    std::vector<double> comm;
    std::vector<double> cworst;
    for (int i = 0; i < sec.n_pilots; ++i)
    {
        RngStream rng = base.substream(static_cast<std::uint64_t>(i));
        const CMatrix pilot = random_stiefel(l, n_tx, rng);
        const auto e = evaluator.evaluate(pilot, false);
        const auto kg = sense_kl_and_g(pilot, objective.scene);
        // Common random numbers: every pilot sees the same channel draws.
        const double c = c_worst_estimate(pilot, objective.users, sec.block_len, sec.trials, eval);
        comm.push_back(e.comm);
        cworst.push_back(c);
        rows.push_back({double(i), bits(e.comm), bits(e.sense), bits(c), kg.kl, kg.g});
    }
    const double rs = spearman_correlation(comm, cworst);
    ResultTable t{"diagnostics", ctx.metadata(Task::diagnostics), {"pilot", "comm_mi_bits", "sense_mi_bits", "c_worst_bits", "kl_nats", "g"}, std::move(rows)};
    t.metadata.emplace_back("block_len", std::to_string(sec.block_len));
    t.metadata.emplace_back("trials", std::to_string(sec.trials));
    t.metadata.emplace_back("spearman_comm_cworst", format_real(rs));
    return {{std::move(t)}, "diagnostics: Spearman(comm MI, C_worst) = " + fmt("%.4f", rs) + " over " +
                                std::to_string(sec.n_pilots) + " random pilots", true};
}

} // namespace

RunResult run_task(Task task, const ExperimentConfig& config)
{
    const Context ctx(config);
    switch (task)
    {
    case Task::optimize: return run_optimize(ctx);
    case Task::sweep: return run_sweep(ctx);
    case Task::pareto_cloud: return run_pareto_cloud(ctx);
    case Task::roc: return run_roc(ctx);
    case Task::nmse: return run_nmse(ctx);
    case Task::ser: return run_ser(ctx);
    case Task::gradcheck: return run_gradcheck(ctx);
    case Task::diagnostics: return run_diagnostics(ctx);
    }
    throw InvalidParameter("unknown task");
}

// ---- Driver -------------------------------------------------------------------

namespace
{

std::string located(const std::string& file, const ConfigError& e)
{
    if (e.line() > 0)
        return file + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what();
    return file + ": " + e.what();
}

/// All tables go to temporary files first; only when every write succeeded
/// are they renamed into place.
void write_all(const std::vector<ResultTable>& tables, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::pair<std::string, std::string>> staged;
    try
    {
        for (const auto& t : tables)
        {
            const std::string final_path = (dir / (t.name + ".csv")).string();
            const std::string tmp = temp_path_for(final_path);
            staged.emplace_back(tmp, final_path);
            write_file(tmp, format_table(t));
        }
    }
    catch (...)
    {
        for (const auto& [tmp, dest] : staged)
            fs::remove(tmp, ec);
        throw;
    }
    for (const auto& [tmp, dest] : staged)
        rename_into_place(tmp, dest);
}

} // namespace

int run_config(Task task, const std::string& config_path, const RunOptions& options)
{
    ExperimentConfig config;
    try
    {
        config = load_config(config_path);
        if (config.task && *config.task != task)
            throw ConfigError("config is for task '" + task_name(*config.task) + "' but '" + task_name(task) +
                                  "' was requested",
                              0, 0);
        if (options.seed)
            config.seed = *options.seed;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "error: " << located(config_path, e) << "\n";
        return 2;
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }

    RunResult result;
    try
    {
        result = run_task(task, config);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "error: " << located(config_path, e) << "\n";
        return 2;
    }
    catch (const NumericError& e)
    {
        std::cerr << "error: task '" << task_name(task) << "': " << e.what() << "\n";
        return 3;
    }
    catch (const Error& e)
    {
        // Parameter combinations the schema cannot see (e.g. a model that
        // fails validation) are configuration problems.
        std::cerr << "error: task '" << task_name(task) << "': invalid configuration: " << e.what() << "\n";
        return 2;
    }

    const fs::path dir = options.out_dir ? *options.out_dir : config.output_dir.value_or("results");
    try
    {
        write_all(result.tables, dir);
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    std::cout << result.summary << "\n";
    return result.passed ? 0 : 3;
}

int verify_outputs(const std::string& config_path, const std::string& out_dir)
{
    std::string expected;
    try
    {
        expected = load_config(config_path).hash;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "error: " << located(config_path, e) << "\n";
        return 2;
    }
    catch (const IoError& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }

    std::vector<fs::path> files;
    std::error_code ec;
    for (fs::directory_iterator it(out_dir, ec), end; !ec && it != end; it.increment(ec))
        if (it->is_regular_file() && it->path().extension() == ".csv")
            files.push_back(it->path());
    if (ec)
    {
        std::cerr << "error: cannot list '" << out_dir << "': " << ec.message() << "\n";
        return 4;
    }
    std::sort(files.begin(), files.end());

    int mismatches = 0;
    for (const auto& f : files)
    {
        std::ifstream in(f);
        if (!in)
        {
            std::cerr << "error: cannot read '" << f.string() << "'\n";
            return 4;
        }
        std::string line;
        std::string found;
        while (std::getline(in, line) && line.rfind("#", 0) == 0)
            if (line.rfind("# config_hash: ", 0) == 0)
                found = line.substr(15);
        const bool ok = found == expected;
        mismatches += !ok;
        std::cout << (ok ? "ok       " : "MISMATCH ") << f.filename().string() << "\n";
    }
    if (files.empty())
    {
        std::cerr << "error: no CSV files in '" << out_dir << "'\n";
        return 1;
    }
    std::cout << "verify: " << files.size() - mismatches << "/" << files.size() << " files match config hash "
              << expected << "\n";
    return mismatches == 0 ? 0 : 1;
}

} // namespace isacpilot
