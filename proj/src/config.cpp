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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "isacpilot/experiment.hpp"

namespace isacpilot
{

using nlohmann::json;

ConfigError::ConfigError(const std::string& what, int line, int column)
    : Error(what), line_(line), column_(column)
{
}

std::optional<Task> parse_task(const std::string& name)
{
    static const std::map<std::string, Task> names = {
        {"optimize", Task::optimize}, {"sweep", Task::sweep},         {"pareto-cloud", Task::pareto_cloud},
        {"roc", Task::roc},           {"nmse", Task::nmse},           {"ser", Task::ser},
        {"gradcheck", Task::gradcheck}, {"diagnostics", Task::diagnostics},
    };
    const auto it = names.find(name);
    if (it == names.end())
        return std::nullopt;
    return it->second;
}

std::string task_name(Task task)
{
    switch (task)
    {
    case Task::optimize: return "optimize";
    case Task::sweep: return "sweep";
    case Task::pareto_cloud: return "pareto-cloud";
    case Task::roc: return "roc";
    case Task::nmse: return "nmse";
    case Task::ser: return "ser";
    case Task::gradcheck: return "gradcheck";
    case Task::diagnostics: return "diagnostics";
    }
    return "unknown";
}

std::string PilotSpec::label() const
{
    switch (kind)
    {
    case PilotKind::optimized: {
        char buf[32];
        const auto end = std::to_chars(buf, buf + sizeof buf, rho).ptr; // shortest round-trip
        return "optimized(rho=" + std::string(buf, end) + ")";
    }
    case PilotKind::random: return "random";
    case PilotKind::dft: return "dft";
    case PilotKind::eigen: return "eigen";
    }
    return "unknown";
}

namespace
{

// ---- Source locations -----------------------------------------------------------
//
// The vendored JSON library does not keep source positions, so a second pass
// over the (already syntax-checked) text maps every member and array element
// to the byte offset where it starts. Paths use '/'-separated raw keys; the
// same spelling is produced by the schema walker below.

class Locator
{
  public:
    explicit Locator(const std::string& text) : s_(text) {}

    std::map<std::string, std::size_t> run()
    {
        value("");
        return std::move(out_);
    }

  private:
    void ws()
    {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r'))
            ++i_;
    }

    std::string string_token()
    {
        std::string r;
        ++i_; // opening quote
        while (i_ < s_.size() && s_[i_] != '"')
        {
            if (s_[i_] == '\\' && i_ + 1 < s_.size())
                r.push_back(s_[i_++]);
            r.push_back(s_[i_++]);
        }
        ++i_;
        return r;
    }

    void value(const std::string& path)
    {
        ws();
        if (i_ >= s_.size())
            return;
        const char c = s_[i_];
        if (c == '{')
            object(path);
        else if (c == '[')
            array(path);
        else if (c == '"')
            string_token();
        else
            while (i_ < s_.size() && std::string_view(",]} \t\n\r").find(s_[i_]) == std::string_view::npos)
                ++i_;
    }

    void object(const std::string& path)
    {
        ++i_;
        ws();
        if (s_[i_] == '}')
        {
            ++i_;
            return;
        }
        while (true)
        {
            ws();
            const std::size_t at = i_;
            const std::string member = path + "/" + string_token();
            if (!out_.emplace(member, at).second)
                duplicates_.push_back({member, at});
            ws();
            ++i_; // ':'
            value(member);
            ws();
            if (s_[i_++] != ',')
                return;
        }
    }

    void array(const std::string& path)
    {
        ++i_;
        ws();
        if (s_[i_] == ']')
        {
            ++i_;
            return;
        }
        for (std::size_t idx = 0;; ++idx)
        {
            ws();
            const std::string element = path + "/" + std::to_string(idx);
            out_.emplace(element, i_);
            value(element);
            ws();
            if (s_[i_++] != ',')
                return;
        }
    }

  public:
    std::vector<std::pair<std::string, std::size_t>> duplicates_;

  private:
    const std::string& s_;
    std::size_t i_ = 0;
    std::map<std::string, std::size_t> out_;
};

std::pair<int, int> line_column(const std::string& text, std::size_t offset)
{
    int line = 1;
    int column = 1;
    for (std::size_t k = 0; k < offset && k < text.size(); ++k)
    {
        if (text[k] == '\n')
        {
            ++line;
            column = 1;
        }
        else
            ++column;
    }
    return {line, column};
}

// ---- Schema walker --------------------------------------------------------------

class Schema
{
  public:
    Schema(const std::string& text, std::map<std::string, std::size_t> locations)
        : text_(text), loc_(std::move(locations))
    {
    }

    /// Reports at the closest located ancestor of `path`.
    [[noreturn]] void fail(const std::string& path, const std::string& message) const
    {
        std::string p = path;
        while (!p.empty())
        {
            const auto it = loc_.find(p);
            if (it != loc_.end())
            {
                const auto [line, column] = line_column(text_, it->second);
                throw ConfigError(message, line, column);
            }
            p = p.substr(0, p.rfind('/'));
        }
        throw ConfigError(message, 0, 0);
    }

    static std::string show(const std::string& path) { return path.empty() ? "/" : path; }

    void expect_object(const json& node, const std::string& path) const
    {
        if (!node.is_object())
            fail(path, "expected an object at " + show(path));
    }

    void allow(const json& node, const std::string& path, std::initializer_list<const char*> keys) const
    {
        expect_object(node, path);
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : node.items())
            if (!allowed.count(key))
                fail(path + "/" + key, "unknown key '" + key + "' in " + show(path));
    }

    const json* find(const json& node, const char* key) const
    {
        const auto it = node.find(key);
        return it == node.end() ? nullptr : &*it;
    }

    const json& require(const json& node, const std::string& path, const char* key) const
    {
        const json* v = find(node, key);
        if (!v)
            fail(path, "missing required key '" + std::string(key) + "' in " + show(path));
        return *v;
    }

    double number(const json& v, const std::string& path) const
    {
        if (!v.is_number())
            fail(path, "expected a number at " + path);
        const double x = v.get<double>();
        if (!std::isfinite(x))
            fail(path, "non-finite number at " + path);
        return x;
    }

    long long integer(const json& v, const std::string& path) const
    {
        if (!v.is_number_integer())
            fail(path, "expected an integer at " + path);
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT32_MAX))
            fail(path, "integer out of range at " + path);
        return v.get<long long>();
    }

    double number_in(const json& node, const std::string& path, const char* key, double lo, double hi) const
    {
        const std::string p = path + "/" + key;
        const double x = number(require(node, path, key), p);
        check_range(x, p, lo, hi);
        return x;
    }

    double number_or(const json& node, const std::string& path, const char* key, double fallback, double lo,
                     double hi) const
    {
        if (!find(node, key))
            return fallback;
        return number_in(node, path, key, lo, hi);
    }

    int int_in(const json& node, const std::string& path, const char* key, long long lo, long long hi) const
    {
        const std::string p = path + "/" + key;
        const long long x = integer(require(node, path, key), p);
        if (x < lo || x > hi)
            fail(p, key + std::string(" must be in [") + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(x);
    }

    int int_or(const json& node, const std::string& path, const char* key, int fallback, long long lo,
               long long hi) const
    {
        if (!find(node, key))
            return fallback;
        return int_in(node, path, key, lo, hi);
    }

    std::string string_of(const json& v, const std::string& path) const
    {
        if (!v.is_string())
            fail(path, "expected a string at " + path);
        return v.get<std::string>();
    }

    const json& array_of(const json& node, const std::string& path, const char* key, bool allow_empty) const
    {
        const json& v = require(node, path, key);
        const std::string p = path + "/" + key;
        if (!v.is_array())
            fail(p, "expected an array at " + p);
        if (!allow_empty && v.empty())
            fail(p, "array at " + p + " must not be empty");
        return v;
    }

    std::vector<double> numbers(const json& node, const std::string& path, const char* key, double lo,
                                double hi) const
    {
        const json& arr = array_of(node, path, key, false);
        std::vector<double> out;
        for (std::size_t i = 0; i < arr.size(); ++i)
        {
            const std::string p = path + "/" + key + "/" + std::to_string(i);
            const double x = number(arr[i], p);
            check_range(x, p, lo, hi);
            out.push_back(x);
        }
        return out;
    }

    void check_range(double x, const std::string& path, double lo, double hi) const
    {
        if (!(x >= lo && x <= hi))
        {
            char buf[160];
            std::snprintf(buf, sizeof buf, "value %.17g at %s must be in [%.17g, %.17g]", x, path.c_str(), lo, hi);
            fail(path, buf);
        }
    }

    /// (0, inf): exclusive lower bound.
    void check_positive(double x, const std::string& path) const
    {
        if (!(x > 0.0))
            fail(path, "value at " + path + " must be positive");
    }

  private:
    const std::string& text_;
    std::map<std::string, std::size_t> loc_;
};

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr long long int_max = INT32_MAX;

ArrayGeometry parse_geometry(const Schema& s, const json& node, const std::string& path)
{
    s.allow(node, path, {"n_tx", "n_rx", "spacing_tx", "spacing_rx"});
    ArrayGeometry g;
    g.n_tx = s.int_in(node, path, "n_tx", 2, 4096);
    g.n_rx = s.int_in(node, path, "n_rx", 1, 4096);
    g.spacing_tx = s.number_in(node, path, "spacing_tx", 0.0, inf);
    s.check_positive(g.spacing_tx, path + "/spacing_tx");
    g.spacing_rx = s.number_in(node, path, "spacing_rx", 0.0, inf);
    s.check_positive(g.spacing_rx, path + "/spacing_rx");
    return g;
}

MeanPolicy parse_mean_policy(const Schema& s, const json& node, const std::string& path)
{
    s.allow(node, path, {"kind", "scale"});
    MeanPolicy m;
    const std::string kind = s.string_of(s.require(node, path, "kind"), path + "/kind");
    if (kind == "zero")
    {
        m.kind = MeanPolicyKind::zero;
        m.scale = s.number_or(node, path, "scale", 0.0, -inf, inf);
    }
    else if (kind == "steering")
    {
        m.kind = MeanPolicyKind::steering;
        m.scale = s.number_in(node, path, "scale", 0.0, inf);
    }
    else
        s.fail(path + "/kind", "mean_policy kind must be 'zero' or 'steering'");
    return m;
}

SensingScene parse_scene(const Schema& s, const json& node, const std::string& path, const ArrayGeometry& geometry)
{
    s.allow(node, path, {"target_angle_deg", "target_power", "radar_noise_std", "clutter"});
    SensingScene scene;
    scene.geometry = geometry;
    scene.target_angle_deg = s.number_in(node, path, "target_angle_deg", -90.0, 90.0);
    scene.target_power = s.number_in(node, path, "target_power", 0.0, inf);
    scene.radar_noise_std = s.number_in(node, path, "radar_noise_std", 0.0, inf);
    s.check_positive(scene.radar_noise_std, path + "/radar_noise_std");
    const json& clutter = s.array_of(node, path, "clutter", true);
    for (std::size_t i = 0; i < clutter.size(); ++i)
    {
        const std::string p = path + "/clutter/" + std::to_string(i);
        s.allow(clutter[i], p, {"angle_deg", "power"});
        scene.clutter.push_back(
            {s.number_in(clutter[i], p, "angle_deg", -90.0, 90.0), s.number_in(clutter[i], p, "power", 0.0, inf)});
    }
    return scene;
}

ScenarioConfig parse_scenario(const Schema& s, const json& node, const std::string& path)
{
    s.allow(node, path,
            {"geometry", "n_components", "quadrature_points", "mean_policy", "users", "scene", "carrier_frequency_hz"});
    ScenarioConfig sc;
    sc.geometry = parse_geometry(s, s.require(node, path, "geometry"), path + "/geometry");
    sc.n_components = s.int_in(node, path, "n_components", 1, 100000);
    sc.quadrature_points = s.int_or(node, path, "quadrature_points", 8, 1, 100000);
    sc.mean_policy = parse_mean_policy(s, s.require(node, path, "mean_policy"), path + "/mean_policy");
    if (s.find(node, "carrier_frequency_hz"))
    {
        sc.carrier_frequency_hz = s.number_in(node, path, "carrier_frequency_hz", 0.0, inf);
        s.check_positive(*sc.carrier_frequency_hz, path + "/carrier_frequency_hz");
    }

    const json& users = s.array_of(node, path, "users", false);
    int with_weight = 0;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i)
    {
        const std::string p = path + "/users/" + std::to_string(i);
        s.allow(users[i], p, {"mean_aoa_deg", "azimuth_spread_deg", "noise_std", "weight"});
        UserSpec u;
        u.mean_aoa_deg = s.number_in(users[i], p, "mean_aoa_deg", -90.0, 90.0);
        u.azimuth_spread_deg = s.number_in(users[i], p, "azimuth_spread_deg", 0.0, 180.0);
        s.check_positive(u.azimuth_spread_deg, p + "/azimuth_spread_deg");
        u.noise_std = s.number_in(users[i], p, "noise_std", 0.0, inf);
        s.check_positive(u.noise_std, p + "/noise_std");
        if (s.find(users[i], "weight"))
        {
            u.weight = s.number_in(users[i], p, "weight", 0.0, 1.0);
            ++with_weight;
            weight_sum += u.weight;
        }
        sc.users.push_back(u);
    }
    const int k = static_cast<int>(users.size());
    if (with_weight == 0)
        for (auto& u : sc.users)
            u.weight = 1.0 / k;
    else if (with_weight != k)
        s.fail(path + "/users", "either every user or no user must set 'weight'");
    else if (std::abs(weight_sum - 1.0) > 1e-9)
        s.fail(path + "/users", "user weights must sum to 1");

    sc.scene = parse_scene(s, s.require(node, path, "scene"), path + "/scene", sc.geometry);
    return sc;
}

std::vector<PilotSpec> parse_pilots(const Schema& s, const json& node, const std::string& path)
{
    const json& arr = s.array_of(node, path, "pilots", false);
    std::vector<PilotSpec> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
    {
        const std::string p = path + "/pilots/" + std::to_string(i);
        s.allow(arr[i], p, {"kind", "rho"});
        const std::string kind = s.string_of(s.require(arr[i], p, "kind"), p + "/kind");
        PilotSpec spec;
        if (kind == "optimized")
        {
            spec.kind = PilotKind::optimized;
            spec.rho = s.number_in(arr[i], p, "rho", 0.0, 1.0);
        }
        else
        {
            if (kind == "random")
                spec.kind = PilotKind::random;
            else if (kind == "dft")
                spec.kind = PilotKind::dft;
            else if (kind == "eigen")
                spec.kind = PilotKind::eigen;
            else
                s.fail(p + "/kind", "pilot kind must be one of optimized, random, dft, eigen");
            if (s.find(arr[i], "rho"))
                s.fail(p + "/rho", "'rho' applies to optimized pilots only");
        }
        out.push_back(spec);
    }
    return out;
}

OptimizerConfig parse_optimizer(const Schema& s, const json& node, const std::string& path)
{
    s.allow(node, path, {"step_size", "max_iters", "rel_tol", "early_stop", "window"});
    OptimizerConfig c;
    c.step_size = s.number_or(node, path, "step_size", c.step_size, 0.0, inf);
    s.check_positive(c.step_size, path + "/step_size");
    c.max_iters = s.int_or(node, path, "max_iters", c.max_iters, 1, int_max);
    c.rel_tol = s.number_or(node, path, "rel_tol", c.rel_tol, 0.0, inf);
    c.window = s.int_or(node, path, "window", c.window, 1, int_max);
    if (const json* v = s.find(node, "early_stop"))
    {
        if (!v->is_boolean())
            s.fail(path + "/early_stop", "expected true or false at " + path + "/early_stop");
        c.early_stop = v->get<bool>();
    }
    return c;
}

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json parse_json(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        // byte is 1-based and points at the last character read.
        const std::size_t offset = e.byte == 0 ? 0 : e.byte - 1;
        const auto [line, column] = line_column(text, offset);
        // what() reads "[json.exception...] parse error at line L, column C: detail".
        std::string msg = e.what();
        const auto detail = msg.find(": ");
        if (detail != std::string::npos)
            msg = msg.substr(detail + 2);
        throw ConfigError("invalid JSON: " + msg, line, column);
    }
}

} // namespace

std::string config_hash(const std::string& text)
{
    return hex16(fnv1a64(parse_json(text).dump()));
}

ExperimentConfig parse_config(const std::string& text)
{
    const json root = parse_json(text);
    Locator locator(text);
    auto locations = locator.run();
    if (!locator.duplicates_.empty())
    {
        const auto& [path, at] = locator.duplicates_.front();
        const auto [line, column] = line_column(text, at);
        throw ConfigError("duplicate key " + path, line, column);
    }
    const Schema s(text, std::move(locations));

    s.allow(root, "",
            {"task", "scenario", "pilot_length", "sensing_formula", "optimizer", "seed", "output_dir", "optimize",
             "sweep", "pareto_cloud", "roc", "nmse", "ser", "gradcheck", "diagnostics", "description"});

    ExperimentConfig c;
    if (const json* t = s.find(root, "task"))
    {
        const std::string name = s.string_of(*t, "/task");
        c.task = parse_task(name);
        if (!c.task)
            s.fail("/task", "unknown task '" + name + "'");
    }
    if (const json* d = s.find(root, "description"))
        s.string_of(*d, "/description");

    c.scenario = parse_scenario(s, s.require(root, "", "scenario"), "/scenario");
    c.pilot_length = s.int_in(root, "", "pilot_length", 1, c.scenario.geometry.n_tx - 1);

    if (const json* f = s.find(root, "sensing_formula"))
    {
        const std::string name = s.string_of(*f, "/sensing_formula");
        if (name == "approx")
            c.sensing_formula = SensingFormula::approx;
        else if (name == "exact")
            c.sensing_formula = SensingFormula::exact;
        else
            s.fail("/sensing_formula", "sensing_formula must be 'approx' or 'exact'");
    }
    if (const json* o = s.find(root, "optimizer"))
        c.optimizer = parse_optimizer(s, *o, "/optimizer");

    {
        const json& seed = s.require(root, "", "seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
            s.fail("/seed", "seed must be a non-negative integer");
        c.seed = seed.get<std::uint64_t>();
    }
    if (const json* o = s.find(root, "output_dir"))
        c.output_dir = s.string_of(*o, "/output_dir");

    if (const json* n = s.find(root, "optimize"))
    {
        s.allow(*n, "/optimize", {"rho"});
        c.optimize = OptimizeSection{s.number_in(*n, "/optimize", "rho", 0.0, 1.0)};
    }
    if (const json* n = s.find(root, "sweep"))
    {
        s.allow(*n, "/sweep", {"rho_values"});
        c.sweep = SweepSection{s.numbers(*n, "/sweep", "rho_values", 0.0, 1.0)};
    }
    if (const json* n = s.find(root, "pareto_cloud"))
    {
        const std::string p = "/pareto_cloud";
        s.allow(*n, p, {"n_samples", "rho_values"});
        c.pareto_cloud = CloudSection{s.int_in(*n, p, "n_samples", 1, int_max), s.numbers(*n, p, "rho_values", 0.0, 1.0)};
    }
    if (const json* n = s.find(root, "roc"))
    {
        const std::string p = "/roc";
        s.allow(*n, p, {"n_trials", "p_fa_grid", "pilots"});
        RocSection r;
        r.n_trials = s.int_in(*n, p, "n_trials", 1, int_max);
        r.p_fa_grid = s.numbers(*n, p, "p_fa_grid", 0.0, 1.0);
        for (std::size_t i = 0; i < r.p_fa_grid.size(); ++i)
            if (r.p_fa_grid[i] <= 0.0 || r.p_fa_grid[i] >= 1.0)
                s.fail(p + "/p_fa_grid/" + std::to_string(i), "p_fa targets must lie strictly inside (0, 1)");
        r.pilots = parse_pilots(s, *n, p);
        c.roc = r;
    }
    if (const json* n = s.find(root, "nmse"))
    {
        const std::string p = "/nmse";
        s.allow(*n, p, {"n_trials", "pilots"});
        c.nmse = NmseSection{s.int_in(*n, p, "n_trials", 1, int_max), parse_pilots(s, *n, p)};
    }
    if (const json* n = s.find(root, "ser"))
    {
        const std::string p = "/ser";
        s.allow(*n, p, {"n_symbols", "block_len", "snr_grid_db", "pilots"});
        SerSection r;
        r.n_symbols = s.int_in(*n, p, "n_symbols", 1, int_max);
        r.block_len = s.int_or(*n, p, "block_len", r.block_len, 1, int_max);
        r.snr_grid_db = s.numbers(*n, p, "snr_grid_db", -200.0, 200.0);
        r.pilots = parse_pilots(s, *n, p);
        c.ser = r;
    }
    if (const json* n = s.find(root, "gradcheck"))
    {
        const std::string p = "/gradcheck";
        s.allow(*n, p, {"instances", "step", "tolerance"});
        GradcheckSection g;
        g.instances = s.int_in(*n, p, "instances", 1, int_max);
        g.step = s.number_or(*n, p, "step", g.step, 0.0, 1.0);
        s.check_positive(g.step, p + "/step");
        g.tolerance = s.number_or(*n, p, "tolerance", g.tolerance, 0.0, inf);
        s.check_positive(g.tolerance, p + "/tolerance");
        c.gradcheck = g;
    }
    if (const json* n = s.find(root, "diagnostics"))
    {
        const std::string p = "/diagnostics";
        s.allow(*n, p, {"n_pilots", "trials", "block_len"});
        DiagnosticsSection d;
        d.n_pilots = s.int_in(*n, p, "n_pilots", 2, int_max);
        d.trials = s.int_in(*n, p, "trials", 1, int_max);
        d.block_len = s.int_or(*n, p, "block_len", d.block_len, 1, int_max);
        c.diagnostics = d;
    }

    c.hash = hex16(fnv1a64(root.dump()));
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<GmmUserModel> build_users(const ScenarioConfig& scenario)
{
    std::vector<GmmUserModel> users;
    for (const auto& u : scenario.users)
        users.push_back(build_user_model(scenario.geometry, u.mean_aoa_deg, u.azimuth_spread_deg,
                                         scenario.n_components, u.noise_std, scenario.mean_policy,
                                         scenario.quadrature_points));
    return users;
}

IsacObjective build_objective(const ExperimentConfig& config, double rho)
{
    IsacObjective o;
    o.rho = rho;
    o.users = build_users(config.scenario);
    o.user_weights = RVector(static_cast<Eigen::Index>(config.scenario.users.size()));
    for (std::size_t k = 0; k < config.scenario.users.size(); ++k)
        o.user_weights(static_cast<Eigen::Index>(k)) = config.scenario.users[k].weight;
    o.scene = config.scenario.scene;
    o.sensing_formula = config.sensing_formula;
    o.validate();
    return o;
}

} // namespace isacpilot
