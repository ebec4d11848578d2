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

#ifndef BEAMCAST_CONFIG_HPP
#define BEAMCAST_CONFIG_HPP

#include "beamcast/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace beamcast
{

enum class LowResMode
{
    subsample, // lattice subsampling of the high-resolution sweep
    wide_beam  // separate sweep of a small DFT codebook on a decimated array
};

enum class InterferenceModel
{
    own_channel, // sum_{i != k} p_i |h_k^H w_i|^2
    printed      // sum_{i != k} p_i |h_i^H w_i|^2
};

enum class SignMode
{
    preserve, // keep the signs of Re r and Im r
    fidelity  // reconstruct with +sqrt only
};

// Simulation parameters. Defaults are the 60 GHz / 8x8 UPA reference setup.
// Powers are kept in dBm here and converted to watts by the accessors.
struct ScenarioConfig
{
    double carrier_frequency_hz = 60e9;
    double bandwidth_hz = 100e6;
    int antennas_vertical = 8;
    int antennas_horizontal = 8;
    int lowres_vertical = 4;
    int lowres_horizontal = 4;
    int users = 4;
    int paths = 25;
    double max_power_dbm = 12.0;
    std::vector<double> max_power_sweep_dbm{-10.0, -5.0, 0.0, 5.0, 10.0, 12.0};
    double sweep_power_dbm = 12.0;
    double noise_figure_db = 9.5;
    std::optional<double> noise_floor_dbm; // overrides the thermal computation
    double reflection_gain_db = -6.0;
    double sir_db = 10.0;
    double ray_spacing_m = 5e-4; // recorded for completeness; the scatterer model does not use it
    double bs_height_m = 10.0;
    double ue_height_m = 1.5;
    double frame_interval_s = 0.1;
    double ue_speed_mps = 1.0;
    double area_x_min = 10.0;
    double area_x_max = 40.0;
    double area_y_min = -20.0;
    double area_y_max = 20.0;
    int frames = 30;
    int window = 3;
    int top_m = 10;
    std::vector<int> top_m_sweep{4, 10, 30};
    std::vector<std::uint64_t> seeds{1};
    int eval_frames = 1;
    std::uint64_t optimal_max_combinations = 2'000'000;
    std::vector<std::string> predictors{"oracle", "persistence", "bilinear", "bicubic"};
    LowResMode lowres_mode = LowResMode::subsample;
    InterferenceModel interference_model = InterferenceModel::own_channel;
    SignMode sign_mode = SignMode::preserve;
    bool array_gain_in_path = true;

    UpaGeometry geometry() const;
    UpaGeometry lowres_geometry() const;
    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
    double max_power_w() const;
    double sweep_power_w() const;
    double noise_floor_dbm_value() const;
    double noise_power_w() const;
    double reflection_gain_linear() const;

    void validate() const;
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear_amplitude(double db);
double db_to_linear_power(double db);

// Thermal noise floor: -174 dBm/Hz + 10 log10(B) + NF.
double thermal_noise_dbm(double bandwidth_hz, double noise_figure_db);

// `key = value` lines, '#' starts a comment, lists are comma separated.
// Unknown keys and malformed values raise ParseError with the line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path &path);

// Round-trips through parse_config.
std::string format_config(const ScenarioConfig &config);

std::string to_string(LowResMode mode);
std::string to_string(InterferenceModel model);
std::string to_string(SignMode mode);

} // namespace beamcast

#endif
