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

#include "beamcast/channel.hpp"
#include "beamcast/config.hpp"
#include "beamcast/errors.hpp"
#include "beamcast/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace beamcast
{

void UpaGeometry::validate() const
{
    if (vertical < 1 || horizontal < 1)
        throw DomainError("UPA dimensions must be >= 1");
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw DomainError("wavelength must be positive");
}

UpaGeometry UpaGeometry::from_frequency(int vertical, int horizontal, double carrier_hz)
{
    if (!(carrier_hz > 0.0))
        throw DomainError("carrier frequency must be positive");
    UpaGeometry g{vertical, horizontal, kSpeedOfLight / carrier_hz};
    g.validate();
    return g;
}

namespace
{

// exp(-j pi n phase) for n = 0..count-1
ComplexVector linear_phase(double phase, int count)
{
    if (count < 1)
        throw DomainError("steering vector length must be >= 1");
    ComplexVector out(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n)
        out[static_cast<std::size_t>(n)] = std::polar(1.0, -kPi * n * phase);
    return out;
}

double distance(const Vec3 &a, const Vec3 &b)
{
    const double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double reflect_into(double x, double lo, double hi)
{
    if (x < lo)
        x = 2.0 * lo - x;
    if (x > hi)
        x = 2.0 * hi - x;
    return std::clamp(x, lo, hi);
}

} // namespace

ComplexVector steering_vertical(double elevation, int count)
{
    return linear_phase(std::cos(elevation), count);
}

ComplexVector steering_horizontal(double azimuth, double elevation, int count)
{
    return linear_phase(std::sin(elevation) * std::sin(azimuth), count);
}

ComplexVector steering(double azimuth, double elevation, const UpaGeometry &geometry)
{
    geometry.validate();
    const auto av = steering_vertical(elevation, geometry.vertical);
    const auto ah = steering_horizontal(azimuth, elevation, geometry.horizontal);
    ComplexVector out;
    out.reserve(geometry.size());
    for (const auto &v : av)
        for (const auto &h : ah)
            out.push_back(v * h);
    return out;
}

Complex path_gain(const PathComponent &path, const UpaGeometry &geometry, const ChannelOptions &options)
{
    geometry.validate();
    if (!(path.distance > 0.0) || !std::isfinite(path.distance))
        throw DomainError("path distance must be positive");
    const double array_factor = options.array_gain_in_path ? std::sqrt(static_cast<double>(geometry.size())) : 1.0;
    const double magnitude =
        array_factor * geometry.wavelength * path.reflection_gain / (4.0 * kPi * path.distance);
    // Reduce the phase argument first; d / lambda is ~1e4 at mmWave distances.
    const double cycles = path.distance / geometry.wavelength;
    const double phase = -2.0 * kPi * (cycles - std::floor(cycles));
    return std::polar(magnitude, phase);
}

ChannelRealization channel_vector(std::span<const PathComponent> paths, const UpaGeometry &geometry,
                                  const ChannelOptions &options)
{
    if (paths.empty())
        throw DomainError("channel needs at least one path");
    geometry.validate();
    ChannelRealization out;
    out.h.assign(geometry.size(), Complex{});
    for (const auto &path : paths)
    {
        const Complex alpha = path_gain(path, geometry, options);
        const auto a = steering(path.azimuth, path.elevation, geometry);
        for (std::size_t i = 0; i < a.size(); ++i)
            out.h[i] += alpha * a[i];
    }
    const double prefactor = std::sqrt(static_cast<double>(geometry.size()) / static_cast<double>(paths.size()));
    for (auto &x : out.h)
        x *= prefactor;
    return out;
}

std::pair<double, double> departure_angles(const Vec3 &from, const Vec3 &to)
{
    const double dx = to[0] - from[0], dy = to[1] - from[1], dz = to[2] - from[2];
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (!(r > 0.0))
        throw DomainError("departure angles undefined for coincident points");
    const double elevation = std::acos(std::clamp(dz / r, -1.0, 1.0));
    const double azimuth = std::atan2(dy, dx);
    return {azimuth, elevation};
}

Scenario synthesize_scenario(const ScenarioConfig &config, std::uint64_t seed)
{
    config.validate();
    const UpaGeometry geometry = config.geometry();
    const ChannelOptions options{config.array_gain_in_path};

    std::mt19937_64 rng(derive_seed(seed, 0x5ce7a210ULL));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    Scenario scenario;
    scenario.geometry = geometry;
    scenario.seed = seed;
    MobilityTrace &trace = scenario.trace;
    trace.bs_position = {0.0, 0.0, config.bs_height_m};
    trace.frame_interval = config.frame_interval_s;

    // Single-bounce reflectors, fixed for the whole scenario.
    const double margin = 10.0;
    for (int l = 1; l < config.paths; ++l)
    {
        trace.scatterers.push_back({uniform(0.5 * config.area_x_min, config.area_x_max + margin),
                                    uniform(config.area_y_min - margin, config.area_y_max + margin),
                                    uniform(0.0, config.bs_height_m + 5.0)});
    }

    std::vector<Vec3> positions(static_cast<std::size_t>(config.users));
    for (auto &p : positions)
        p = {uniform(config.area_x_min, config.area_x_max), uniform(config.area_y_min, config.area_y_max),
             config.ue_height_m};

    const double step = config.ue_speed_mps * config.frame_interval_s;
    const double scattered_gain = config.reflection_gain_linear() * db_to_linear_amplitude(-config.sir_db);

    std::vector<PathComponent> paths(static_cast<std::size_t>(config.paths));
    for (int frame = 0; frame < config.frames; ++frame)
    {
        trace.ue_positions.push_back(positions);
        std::vector<ChannelRealization> per_ue;
        for (int ue = 0; ue < config.users; ++ue)
        {
            const Vec3 &pos = positions[static_cast<std::size_t>(ue)];
            const double los = distance(trace.bs_position, pos);
            if (los < 1e-9)
                throw DomainError("UE " + std::to_string(ue) + " placed at the BS position");
            const auto [az, el] = departure_angles(trace.bs_position, pos);
            paths[0] = {az, el, los, 1.0};
            for (std::size_t l = 0; l < trace.scatterers.size(); ++l)
            {
                const Vec3 &s = trace.scatterers[l];
                const auto [saz, sel] = departure_angles(trace.bs_position, s);
                paths[l + 1] = {saz, sel, distance(trace.bs_position, s) + distance(s, pos), scattered_gain};
            }
            auto realization = channel_vector(paths, geometry, options);
            realization.frame = frame;
            realization.ue = ue;
            per_ue.push_back(std::move(realization));
        }
        scenario.channels.push_back(std::move(per_ue));

        for (auto &p : positions)
        {
            const double heading = uniform(0.0, 2.0 * kPi);
            p[0] = reflect_into(p[0] + step * std::cos(heading), config.area_x_min, config.area_x_max);
            p[1] = reflect_into(p[1] + step * std::sin(heading), config.area_y_min, config.area_y_max);
        }
    }
    return scenario;
}

} // namespace beamcast
