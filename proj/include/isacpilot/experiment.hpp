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

// Config-driven experiments and their tabular output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isacpilot/mi_metrics.hpp"
#include "isacpilot/stiefel.hpp"

namespace isacpilot
{

inline constexpr const char* version_string = "0.1.0";

// ---- Errors -------------------------------------------------------------------

/// Malformed or invalid configuration; line and column are 1-based and 0 when
/// the problem has no single location (e.g. a missing key).
class ConfigError : public Error
{
  public:
    ConfigError(const std::string& what, int line, int column);
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

  private:
    int line_;
    int column_;
};

class IoError : public Error
{
  public:
    using Error::Error;
};

// ---- Config -------------------------------------------------------------------

enum class Task
{
    optimize,
    sweep,
    pareto_cloud,
    roc,
    nmse,
    ser,
    gradcheck,
    diagnostics,
};

std::optional<Task> parse_task(const std::string& name);
std::string task_name(Task task);

struct UserSpec
{
    double mean_aoa_deg = 0.0;
    double azimuth_spread_deg = 0.0;
    double noise_std = 0.0;
    double weight = 0.0;
};

struct ScenarioConfig
{
    ArrayGeometry geometry;
    int n_components = 0;
    int quadrature_points = 8;
    MeanPolicy mean_policy;
    std::vector<UserSpec> users;
    SensingScene scene;
    std::optional<double> carrier_frequency_hz; ///< metadata only
};

enum class PilotKind
{
    optimized,
    random,
    dft,
    eigen,
};

struct PilotSpec
{
    PilotKind kind = PilotKind::random;
    double rho = 0.0; ///< optimized pilots only
    std::string label() const;
};

struct OptimizeSection
{
    double rho = 0.5;
};

struct SweepSection
{
    std::vector<double> rho_values;
};

struct CloudSection
{
    int n_samples = 0;
    std::vector<double> rho_values;
};

struct RocSection
{
    int n_trials = 0;
    std::vector<double> p_fa_grid;
    std::vector<PilotSpec> pilots;
};

struct NmseSection
{
    int n_trials = 0;
    std::vector<PilotSpec> pilots;
};

struct SerSection
{
    int n_symbols = 0;
    int block_len = 100;
    std::vector<double> snr_grid_db;
    std::vector<PilotSpec> pilots;
};

struct GradcheckSection
{
    int instances = 0;
    double step = 1e-4;
    double tolerance = 1e-5;
};

struct DiagnosticsSection
{
    int n_pilots = 0;
    int trials = 0;
    int block_len = 100;
};

struct ExperimentConfig
{
    std::optional<Task> task; ///< if present, must match the requested task
    ScenarioConfig scenario;
    int pilot_length = 0;
    SensingFormula sensing_formula = SensingFormula::approx;
    OptimizerConfig optimizer;
    std::uint64_t seed = 0;
    std::optional<std::string> output_dir;

    std::optional<OptimizeSection> optimize;
    std::optional<SweepSection> sweep;
    std::optional<CloudSection> pareto_cloud;
    std::optional<RocSection> roc;
    std::optional<NmseSection> nmse;
    std::optional<SerSection> ser;
    std::optional<GradcheckSection> gradcheck;
    std::optional<DiagnosticsSection> diagnostics;

    std::string hash; ///< FNV-1a 64 of the canonical JSON, 16 hex digits
};

/// Strict JSON parsing: unknown or duplicate keys, wrong types and
/// out-of-range values raise ConfigError with the offending location.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// FNV-1a 64 of the canonical (key-sorted, compact) serialization.
std::string config_hash(const std::string& text);

/// Builds the mixture models of all users.
std::vector<GmmUserModel> build_users(const ScenarioConfig& scenario);

/// Objective for the scenario with the given rho and equal or configured
/// user weights.
IsacObjective build_objective(const ExperimentConfig& config, double rho);

// ---- Tables -------------------------------------------------------------------

struct ResultTable
{
    std::string name; ///< file stem
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// CSV text: '# key: value' metadata lines, a header row, then rows with
/// %.17g reals; newline-terminated.
std::string format_table(const ResultTable& table);

/// Writes format_table(table) to `path` through a temporary file and rename.
/// Throws IoError.
void emit_table(const ResultTable& table, const std::string& path);

// ---- Running ------------------------------------------------------------------

struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

struct RunResult
{
    std::vector<ResultTable> tables;
    std::string summary; ///< one line
    bool passed = true;  ///< false when a self-check (gradcheck) fails
};

/// Executes `task`; no files are touched.
RunResult run_task(Task task, const ExperimentConfig& config);

/// Loads, runs and writes every table into the output directory. Returns the
/// process exit code: 0 ok, 2 config error, 3 numeric error, 4 I/O error.
int run_config(Task task, const std::string& config_path, const RunOptions& options);

/// Re-hashes the config and checks the config_hash header of every CSV in
/// `out_dir`. Returns 0 when all match and at least one file was checked,
/// 1 on mismatch, 2 on config errors, 4 on I/O errors.
int verify_outputs(const std::string& config_path, const std::string& out_dir);

} // namespace isacpilot
