// SPDX-License-Identifier: Apache-2.0
//
// beamcast: multiuser mmWave beam-quality prediction and beam/power allocation
// Copyright (C) 2026 The beamcast authors
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

#include "beamcast/config.hpp"
#include "beamcast/errors.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace beamcast
{

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear_amplitude(double db) { return std::pow(10.0, db / 20.0); }
double db_to_linear_power(double db) { return std::pow(10.0, db / 10.0); }

double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        throw DomainError("bandwidth must be positive");
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

UpaGeometry ScenarioConfig::geometry() const
{
    return UpaGeometry::from_frequency(antennas_vertical, antennas_horizontal, carrier_frequency_hz);
}

UpaGeometry ScenarioConfig::lowres_geometry() const
{
    return UpaGeometry::from_frequency(lowres_vertical, lowres_horizontal, carrier_frequency_hz);
}

double ScenarioConfig::max_power_w() const { return dbm_to_watts(max_power_dbm); }
double ScenarioConfig::sweep_power_w() const { return dbm_to_watts(sweep_power_dbm); }

double ScenarioConfig::noise_floor_dbm_value() const
{
    return noise_floor_dbm ? *noise_floor_dbm : thermal_noise_dbm(bandwidth_hz, noise_figure_db);
}

double ScenarioConfig::noise_power_w() const { return dbm_to_watts(noise_floor_dbm_value()); }

// -6 dB maps to g = 0.2512, the factor that enters the path gain directly.
double ScenarioConfig::reflection_gain_linear() const { return db_to_linear_power(reflection_gain_db); }

void ScenarioConfig::validate() const
{
    auto require = [](bool ok, const char *msg)
    {
        if (!ok)
            throw DomainError(msg);
    };
    require(carrier_frequency_hz > 0.0, "carrier_frequency_hz must be positive");
    require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
    require(antennas_vertical >= 1 && antennas_horizontal >= 1, "antenna counts must be >= 1");
    require(lowres_vertical >= 1 && lowres_horizontal >= 1, "low-resolution beam counts must be >= 1");
    require(lowres_vertical <= antennas_vertical && lowres_horizontal <= antennas_horizontal,
            "low-resolution grid must not exceed the antenna grid");
    require(antennas_vertical % lowres_vertical == 0 && antennas_horizontal % lowres_horizontal == 0,
            "antenna grid must be an integer multiple of the low-resolution grid");
    require(users >= 1, "users must be >= 1");
    require(static_cast<std::size_t>(users) <= geometry().size(), "users must not exceed the beam count");
    require(paths >= 1, "paths must be >= 1");
    require(frame_interval_s > 0.0, "frame_interval_s must be positive");
    require(ue_speed_mps >= 0.0, "ue_speed_mps must be nonnegative");
    require(area_x_min <= area_x_max && area_y_min <= area_y_max, "UE area bounds are inverted");
    require(window >= 1, "window must be >= 1");
    require(frames >= window + 1, "frames must be >= window + 1");
    require(top_m >= 1, "top_m must be >= 1");
    for (int m : top_m_sweep)
        require(m >= 1, "top_m_sweep entries must be >= 1");
    require(!seeds.empty(), "seeds must not be empty");
    require(eval_frames >= 1 && eval_frames <= frames - window, "eval_frames must be in [1, frames - window]");
    require(!max_power_sweep_dbm.empty(), "max_power_sweep_dbm must not be empty");
}

std::string to_string(LowResMode mode) { return mode == LowResMode::subsample ? "subsample" : "wide_beam"; }
std::string to_string(InterferenceModel model)
{
    return model == InterferenceModel::own_channel ? "own_channel" : "printed";
}
std::string to_string(SignMode mode) { return mode == SignMode::preserve ? "preserve" : "fidelity"; }

namespace
{

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string &value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

double parse_double(const std::string &v, std::size_t line)
{
    std::size_t used = 0;
    double out = 0.0;
    try
    {
        out = std::stod(v, &used);
    }
    catch (const std::exception &)
    {
        throw ParseError("expected a number, got '" + v + "'", line);
    }
    if (used != v.size() || !std::isfinite(out))
        throw ParseError("expected a number, got '" + v + "'", line);
    return out;
}

long long parse_integer(const std::string &v, std::size_t line)
{
    std::size_t used = 0;
    long long out = 0;
    try
    {
        out = std::stoll(v, &used);
    }
    catch (const std::exception &)
    {
        throw ParseError("expected an integer, got '" + v + "'", line);
    }
    if (used != v.size())
        throw ParseError("expected an integer, got '" + v + "'", line);
    return out;
}

std::uint64_t parse_unsigned(const std::string &v, std::size_t line)
{
    std::size_t used = 0;
    unsigned long long out = 0;
    try
    {
        if (!v.empty() && v.front() == '-')
            throw std::invalid_argument("negative");
        out = std::stoull(v, &used);
    }
    catch (const std::exception &)
    {
        throw ParseError("expected an unsigned integer, got '" + v + "'", line);
    }
    if (used != v.size())
        throw ParseError("expected an unsigned integer, got '" + v + "'", line);
    return out;
}

bool parse_bool(const std::string &v, std::size_t line)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ParseError("expected a boolean, got '" + v + "'", line);
}

using Setter = std::function<void(ScenarioConfig &, const std::string &, std::size_t)>;

Setter number(double ScenarioConfig::*field)
{
    return [field](ScenarioConfig &c, const std::string &v, std::size_t l) { c.*field = parse_double(v, l); };
}

Setter integer(int ScenarioConfig::*field)
{
    return [field](ScenarioConfig &c, const std::string &v, std::size_t l)
    { c.*field = static_cast<int>(parse_integer(v, l)); };
}

const std::map<std::string, Setter, std::less<>> &setters()
{
    static const std::map<std::string, Setter, std::less<>> table = {
        {"carrier_frequency_hz", number(&ScenarioConfig::carrier_frequency_hz)},
        {"bandwidth_hz", number(&ScenarioConfig::bandwidth_hz)},
        {"antennas_vertical", integer(&ScenarioConfig::antennas_vertical)},
        {"antennas_horizontal", integer(&ScenarioConfig::antennas_horizontal)},
        {"lowres_vertical", integer(&ScenarioConfig::lowres_vertical)},
        {"lowres_horizontal", integer(&ScenarioConfig::lowres_horizontal)},
        {"users", integer(&ScenarioConfig::users)},
        {"paths", integer(&ScenarioConfig::paths)},
        {"max_power_dbm", number(&ScenarioConfig::max_power_dbm)},
        {"max_power_sweep_dbm",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             c.max_power_sweep_dbm.clear();
             for (const auto &item : split_list(v))
                 c.max_power_sweep_dbm.push_back(parse_double(item, l));
         }},
        {"sweep_power_dbm", number(&ScenarioConfig::sweep_power_dbm)},
        {"noise_figure_db", number(&ScenarioConfig::noise_figure_db)},
        {"noise_floor_dbm",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             if (v == "auto")
                 c.noise_floor_dbm.reset();
             else
                 c.noise_floor_dbm = parse_double(v, l);
         }},
        {"reflection_gain_db", number(&ScenarioConfig::reflection_gain_db)},
        {"sir_db", number(&ScenarioConfig::sir_db)},
        {"ray_spacing_m", number(&ScenarioConfig::ray_spacing_m)},
        {"bs_height_m", number(&ScenarioConfig::bs_height_m)},
        {"ue_height_m", number(&ScenarioConfig::ue_height_m)},
        {"frame_interval_s", number(&ScenarioConfig::frame_interval_s)},
        {"ue_speed_mps", number(&ScenarioConfig::ue_speed_mps)},
        {"area_x_min", number(&ScenarioConfig::area_x_min)},
        {"area_x_max", number(&ScenarioConfig::area_x_max)},
        {"area_y_min", number(&ScenarioConfig::area_y_min)},
        {"area_y_max", number(&ScenarioConfig::area_y_max)},
        {"frames", integer(&ScenarioConfig::frames)},
        {"window", integer(&ScenarioConfig::window)},
        {"top_m", integer(&ScenarioConfig::top_m)},
        {"top_m_sweep",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             c.top_m_sweep.clear();
             for (const auto &item : split_list(v))
                 c.top_m_sweep.push_back(static_cast<int>(parse_integer(item, l)));
         }},
        {"seeds",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             c.seeds.clear();
             for (const auto &item : split_list(v))
             {
                 // "a:b" expands to the inclusive range a..b
                 const auto colon = item.find(':');
                 if (colon == std::string::npos)
                 {
                     c.seeds.push_back(parse_unsigned(item, l));
                     continue;
                 }
                 const auto lo = parse_unsigned(trim(item.substr(0, colon)), l);
                 const auto hi = parse_unsigned(trim(item.substr(colon + 1)), l);
                 if (hi < lo)
                     throw ParseError("empty seed range '" + item + "'", l);
                 for (auto s = lo; s <= hi; ++s)
                     c.seeds.push_back(s);
             }
         }},
        {"eval_frames", integer(&ScenarioConfig::eval_frames)},
        {"optimal_max_combinations",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         { c.optimal_max_combinations = parse_unsigned(v, l); }},
        {"predictors",
         [](ScenarioConfig &c, const std::string &v, std::size_t) { c.predictors = split_list(v); }},
        {"lowres_mode",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             if (v == "subsample")
                 c.lowres_mode = LowResMode::subsample;
             else if (v == "wide_beam")
                 c.lowres_mode = LowResMode::wide_beam;
             else
                 throw ParseError("lowres_mode must be subsample or wide_beam", l);
         }},
        {"interference_model",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             if (v == "own_channel")
                 c.interference_model = InterferenceModel::own_channel;
             else if (v == "printed")
                 c.interference_model = InterferenceModel::printed;
             else
                 throw ParseError("interference_model must be own_channel or printed", l);
         }},
        {"sign_mode",
         [](ScenarioConfig &c, const std::string &v, std::size_t l)
         {
             if (v == "preserve")
                 c.sign_mode = SignMode::preserve;
             else if (v == "fidelity")
                 c.sign_mode = SignMode::fidelity;
             else
                 throw ParseError("sign_mode must be preserve or fidelity", l);
         }},
        {"array_gain_in_path",
         [](ScenarioConfig &c, const std::string &v, std::size_t l) { c.array_gain_in_path = parse_bool(v, l); }},
    };
    return table;
}

template <typename T>
std::string join(const std::vector<T> &values)
{
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? "," : "") << values[i];
    return os.str();
}

} // namespace

ScenarioConfig parse_config(std::string_view text)
{
    ScenarioConfig config;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ParseError("unknown config key '" + key + "'", line_no);
        if (value.empty())
            throw ParseError("missing value for '" + key + "'", line_no);
        it->second(config, value, line_no);
    }
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string format_config(const ScenarioConfig &c)
{
    std::ostringstream os;
    os.precision(17);
    os << "carrier_frequency_hz = " << c.carrier_frequency_hz << '\n'
       << "bandwidth_hz = " << c.bandwidth_hz << '\n'
       << "antennas_vertical = " << c.antennas_vertical << '\n'
       << "antennas_horizontal = " << c.antennas_horizontal << '\n'
       << "lowres_vertical = " << c.lowres_vertical << '\n'
       << "lowres_horizontal = " << c.lowres_horizontal << '\n'
       << "users = " << c.users << '\n'
       << "paths = " << c.paths << '\n'
       << "max_power_dbm = " << c.max_power_dbm << '\n'
       << "max_power_sweep_dbm = " << join(c.max_power_sweep_dbm) << '\n'
       << "sweep_power_dbm = " << c.sweep_power_dbm << '\n'
       << "noise_figure_db = " << c.noise_figure_db << '\n'
       << "noise_floor_dbm = ";
    if (c.noise_floor_dbm)
        os << *c.noise_floor_dbm << '\n';
    else
        os << "auto\n";
    os << "reflection_gain_db = " << c.reflection_gain_db << '\n'
       << "sir_db = " << c.sir_db << '\n'
       << "ray_spacing_m = " << c.ray_spacing_m << '\n'
       << "bs_height_m = " << c.bs_height_m << '\n'
       << "ue_height_m = " << c.ue_height_m << '\n'
       << "frame_interval_s = " << c.frame_interval_s << '\n'
       << "ue_speed_mps = " << c.ue_speed_mps << '\n'
       << "area_x_min = " << c.area_x_min << '\n'
       << "area_x_max = " << c.area_x_max << '\n'
       << "area_y_min = " << c.area_y_min << '\n'
       << "area_y_max = " << c.area_y_max << '\n'
       << "frames = " << c.frames << '\n'
       << "window = " << c.window << '\n'
       << "top_m = " << c.top_m << '\n'
       << "top_m_sweep = " << join(c.top_m_sweep) << '\n'
       << "seeds = " << join(c.seeds) << '\n'
       << "eval_frames = " << c.eval_frames << '\n'
       << "optimal_max_combinations = " << c.optimal_max_combinations << '\n'
       << "predictors = " << join(c.predictors) << '\n'
       << "lowres_mode = " << to_string(c.lowres_mode) << '\n'
       << "interference_model = " << to_string(c.interference_model) << '\n'
       << "sign_mode = " << to_string(c.sign_mode) << '\n'
       << "array_gain_in_path = " << (c.array_gain_in_path ? "true" : "false") << '\n';
    return os.str();
}

} // namespace beamcast
