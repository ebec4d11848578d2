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

#ifndef BEAMCAST_CHANNEL_HPP
#define BEAMCAST_CHANNEL_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace beamcast
{

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Vec3 = std::array<double, 3>;

constexpr double kSpeedOfLight = 299792458.0;
constexpr double kPi = 3.141592653589793238462643383279502884;

struct ScenarioConfig;

// Uniform planar array with half-wavelength spacing. Element (a, b) with a the
// vertical and b the horizontal index sits at flat position a * horizontal + b.
struct UpaGeometry
{
    int vertical = 8;
    int horizontal = 8;
    double wavelength = kSpeedOfLight / 60e9;

    std::size_t size() const { return static_cast<std::size_t>(vertical) * static_cast<std::size_t>(horizontal); }
    void validate() const;

    static UpaGeometry from_frequency(int vertical, int horizontal, double carrier_hz);
};

// One propagation path leaving the BS. Elevation is measured from the vertical
// array axis (zenith), azimuth in the horizontal plane from the array boresight.
struct PathComponent
{
    double azimuth = 0.0;
    double elevation = 0.0;
    double distance = 1.0;        // total path length [m]
    double reflection_gain = 1.0; // linear amplitude factor
};

struct ChannelRealization
{
    ComplexVector h;
    int frame = 0;
    int ue = 0;
};

struct MobilityTrace
{
    Vec3 bs_position{};
    std::vector<std::vector<Vec3>> ue_positions; // [frame][ue]
    std::vector<Vec3> scatterers;
    double frame_interval = 0.1;
};

struct Scenario
{
    UpaGeometry geometry;
    MobilityTrace trace;
    std::vector<std::vector<ChannelRealization>> channels; // [frame][ue]
    std::uint64_t seed = 0;

    int frames() const { return static_cast<int>(channels.size()); }
    int users() const { return channels.empty() ? 0 : static_cast<int>(channels.front().size()); }
};

struct ChannelOptions
{
    // Keep the sqrt(M_tx) array factor inside each path gain in addition to the
    // sqrt(M_tx / L_p) prefactor of the channel sum.
    bool array_gain_in_path = true;
};

ComplexVector steering_vertical(double elevation, int count);
ComplexVector steering_horizontal(double azimuth, double elevation, int count);

// a^v(elevation) (x) a^h(azimuth, elevation), length vertical * horizontal.
ComplexVector steering(double azimuth, double elevation, const UpaGeometry &geometry);

Complex path_gain(const PathComponent &path, const UpaGeometry &geometry, const ChannelOptions &options = {});

// h = sqrt(M_tx / L_p) * sum_l alpha_l a(az_l, el_l), summed in path order.
ChannelRealization channel_vector(std::span<const PathComponent> paths, const UpaGeometry &geometry,
                                  const ChannelOptions &options = {});

// AoD (azimuth, elevation) of the ray from `from` towards `to` in the array frame:
// vertical axis +z, horizontal array axis +y, boresight +x.
std::pair<double, double> departure_angles(const Vec3 &from, const Vec3 &to);

Scenario synthesize_scenario(const ScenarioConfig &config, std::uint64_t seed);

} // namespace beamcast

#endif
