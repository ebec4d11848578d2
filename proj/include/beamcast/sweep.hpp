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

#ifndef BEAMCAST_SWEEP_HPP
#define BEAMCAST_SWEEP_HPP

#include "beamcast/codebook.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beamcast
{

enum class ImageKind
{
    power,
    real_sq,
    imag_sq,
    sign_real,
    sign_imag
};

std::string to_string(ImageKind kind);

// Per-beam measurement grid, row-major over (vertical, horizontal) beam index.
struct BeamImage
{
    int rows = 0;
    int cols = 0;
    ImageKind kind = ImageKind::power;
    std::vector<double> values;

    BeamImage() = default;
    BeamImage(int rows, int cols, ImageKind kind, double fill = 0.0);

    std::size_t size() const { return values.size(); }
    double &at(int r, int c) { return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) + c]; }

    bool operator==(const BeamImage &) const = default;
};

// Squared real and imaginary parts of the received samples.
struct ImagePair
{
    BeamImage real_sq;
    BeamImage imag_sq;

    BeamImage power() const;
    bool operator==(const ImagePair &) const = default;
};

struct SweepResult
{
    BeamImage real_sq;
    BeamImage imag_sq;
    BeamImage power;
    BeamImage sign_real;
    BeamImage sign_imag;

    ImagePair pair() const { return {real_sq, imag_sq}; }
};

// Sweeps every codebook beam in index order with power `power`, adding complex
// AWGN of variance `noise_power` per beam. Deterministic given `seed`.
SweepResult sweep_high_res(std::span<const Complex> h, const Codebook &codebook, double power, double noise_power,
                           std::uint64_t seed, Complex symbol = Complex{1.0, 0.0});

// low(a, b) = high(row_factor * a, col_factor * b)
BeamImage downsample_to_low_res(const BeamImage &high, int row_factor = 2, int col_factor = 2);

// Keeps every `row_factor`-th vertical and `col_factor`-th horizontal element.
ComplexVector decimate_channel(std::span<const Complex> h, const UpaGeometry &geometry, int row_factor,
                               int col_factor);

// Window of `window` low-resolution pairs ending at `frame`, and the
// high-resolution pair of frame + 1 as target.
struct Episode
{
    int ue = 0;
    int frame = 0;
    std::vector<ImagePair> inputs;
    ImagePair target;

    int window() const { return static_cast<int>(inputs.size()); }
    bool operator==(const Episode &) const = default;
};

// One episode per frame t in [window - 1, frames - 2]; frames - window episodes.
std::vector<Episode> build_episodes(int ue, std::span<const ImagePair> low_res, std::span<const ImagePair> high_res,
                                    int window);

} // namespace beamcast

#endif
