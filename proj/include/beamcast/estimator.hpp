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

#ifndef BEAMCAST_ESTIMATOR_HPP
#define BEAMCAST_ESTIMATOR_HPP

#include "beamcast/codebook.hpp"
#include "beamcast/sweep.hpp"

#include <span>
#include <vector>

namespace beamcast
{

struct ComplexImage
{
    int rows = 0;
    int cols = 0;
    ComplexVector values;
    std::size_t clamped = 0; // negative squared inputs that were clamped to zero
};

// sign_r sqrt(real_sq) + j sign_i sqrt(imag_sq); signs are +1 when absent.
ComplexImage reconstruct_amplitude(const BeamImage &real_sq, const BeamImage &imag_sq);
ComplexImage reconstruct_amplitude(const BeamImage &real_sq, const BeamImage &imag_sq, const BeamImage &sign_real,
                                   const BeamImage &sign_imag);

// LS inverse of r = sqrt(p) x s + n for a scalar pilot: conj(s) r / (|s|^2 sqrt(p)).
Complex ls_effective_channel(Complex received, Complex symbol, double power);

// (1/Q) sum_i ||predicted_i - truth_i||^2
double mse(std::span<const BeamImage> predicted, std::span<const BeamImage> truth);
// Pair version: each item's squared error sums over both planes.
double mse(std::span<const ImagePair> predicted, std::span<const ImagePair> truth);

// Per-user, per-beam squared magnitudes |h_k^H w_n|^2, row-major (user, beam).
struct ChannelGains
{
    int users = 0;
    int beams = 0;
    std::vector<double> values;

    ChannelGains() = default;
    ChannelGains(int users, int beams, double fill = 0.0);

    double at(int user, int beam) const
    {
        return values[static_cast<std::size_t>(user) * static_cast<std::size_t>(beams) + beam];
    }
    double &at(int user, int beam)
    {
        return values[static_cast<std::size_t>(user) * static_cast<std::size_t>(beams) + beam];
    }
};

enum class EstimateProvenance
{
    oracle,
    ls_from_prediction
};

// Per-(user, beam) effective channel h_k^H w_n.
struct EffectiveChannelEstimate
{
    int users = 0;
    int beams = 0;
    ComplexVector values;
    EstimateProvenance provenance = EstimateProvenance::oracle;
    std::size_t clamped = 0;

    Complex at(int user, int beam) const
    {
        return values[static_cast<std::size_t>(user) * static_cast<std::size_t>(beams) + beam];
    }
    ChannelGains gains() const;
};

// Exact h_k^H w_n from known channels.
EffectiveChannelEstimate oracle_effective_channels(std::span<const ComplexVector> channels, const Codebook &codebook);

// Per-user input for the LS route: a predicted high-resolution pair and,
// optionally, sign planes for sign-preserving reconstruction.
struct ReceivedImages
{
    ImagePair images;
    const BeamImage *sign_real = nullptr;
    const BeamImage *sign_imag = nullptr;
};

// Reconstructs each user's complex image and LS-inverts every pixel for its own beam.
EffectiveChannelEstimate estimate_effective_channels(std::span<const ReceivedImages> users, double sweep_power,
                                                     Complex symbol = Complex{1.0, 0.0});

} // namespace beamcast

#endif
