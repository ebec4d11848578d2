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

#include "beamcast/sweep.hpp"
#include "beamcast/errors.hpp"

#include <cmath>
#include <random>

namespace beamcast
{

std::string to_string(ImageKind kind)
{
    switch (kind)
    {
    case ImageKind::power:
        return "power";
    case ImageKind::real_sq:
        return "real_sq";
    case ImageKind::imag_sq:
        return "imag_sq";
    case ImageKind::sign_real:
        return "sign_real";
    case ImageKind::sign_imag:
        return "sign_imag";
    }
    return "unknown";
}

BeamImage::BeamImage(int rows_, int cols_, ImageKind kind_, double fill)
    : rows(rows_), cols(cols_), kind(kind_)
{
    if (rows < 0 || cols < 0)
        throw DomainError("image dimensions must be nonnegative");
    values.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

BeamImage ImagePair::power() const
{
    if (real_sq.rows != imag_sq.rows || real_sq.cols != imag_sq.cols)
        throw DomainError("image pair shape mismatch");
    BeamImage out(real_sq.rows, real_sq.cols, ImageKind::power);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = real_sq.values[i] + imag_sq.values[i];
    return out;
}

SweepResult sweep_high_res(std::span<const Complex> h, const Codebook &codebook, double power, double noise_power,
                           std::uint64_t seed, Complex symbol)
{
    if (!(power > 0.0))
        throw DomainError("sweep power must be positive");
    if (!(noise_power >= 0.0))
        throw DomainError("noise power must be nonnegative");
    const int rows = codebook.geometry().vertical;
    const int cols = codebook.geometry().horizontal;
    SweepResult out{BeamImage(rows, cols, ImageKind::real_sq), BeamImage(rows, cols, ImageKind::imag_sq),
                    BeamImage(rows, cols, ImageKind::power), BeamImage(rows, cols, ImageKind::sign_real),
                    BeamImage(rows, cols, ImageKind::sign_imag)};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    for (std::size_t n = 0; n < codebook.size(); ++n)
    {
        Complex noise{};
        if (noise_power > 0.0)
        {
            const double re = gauss(rng);
            const double im = gauss(rng);
            noise = {re, im};
        }
        const Complex r = received_sample(h, codebook.beam(n), power, symbol, noise);
        const double re2 = r.real() * r.real();
        const double im2 = r.imag() * r.imag();
        out.real_sq.values[n] = re2;
        out.imag_sq.values[n] = im2;
        out.power.values[n] = re2 + im2;
        out.sign_real.values[n] = std::signbit(r.real()) ? -1.0 : 1.0;
        out.sign_imag.values[n] = std::signbit(r.imag()) ? -1.0 : 1.0;
    }
    return out;
}

BeamImage downsample_to_low_res(const BeamImage &high, int row_factor, int col_factor)
{
    if (row_factor < 1 || col_factor < 1)
        throw DomainError("downsampling factors must be >= 1");
    if (high.rows % row_factor != 0 || high.cols % col_factor != 0)
        throw DomainError("image " + std::to_string(high.rows) + "x" + std::to_string(high.cols) +
                          " not divisible by factor " + std::to_string(row_factor) + "x" +
                          std::to_string(col_factor));
    BeamImage low(high.rows / row_factor, high.cols / col_factor, high.kind);
    for (int a = 0; a < low.rows; ++a)
        for (int b = 0; b < low.cols; ++b)
            low.at(a, b) = high.at(a * row_factor, b * col_factor);
    return low;
}

ComplexVector decimate_channel(std::span<const Complex> h, const UpaGeometry &geometry, int row_factor,
                               int col_factor)
{
    if (h.size() != geometry.size())
        throw DomainError("channel length does not match geometry");
    if (row_factor < 1 || col_factor < 1 || geometry.vertical % row_factor != 0 ||
        geometry.horizontal % col_factor != 0)
        throw DomainError("array not divisible by decimation factor");
    ComplexVector out;
    for (int a = 0; a < geometry.vertical; a += row_factor)
        for (int b = 0; b < geometry.horizontal; b += col_factor)
            out.push_back(h[static_cast<std::size_t>(a) * static_cast<std::size_t>(geometry.horizontal) + b]);
    return out;
}

std::vector<Episode> build_episodes(int ue, std::span<const ImagePair> low_res, std::span<const ImagePair> high_res,
                                    int window)
{
    if (window < 1)
        throw DomainError("window must be >= 1");
    if (low_res.size() != high_res.size())
        throw DomainError("low- and high-resolution sequences differ in length");
    const int frames = static_cast<int>(low_res.size());
    if (frames < window + 1)
        throw DomainError("sequence of " + std::to_string(frames) + " frames too short for window " +
                          std::to_string(window));
    std::vector<Episode> out;
    out.reserve(static_cast<std::size_t>(frames - window));
    for (int t = window - 1; t + 1 < frames; ++t)
    {
        Episode e;
        e.ue = ue;
        e.frame = t;
        e.inputs.assign(low_res.begin() + (t - window + 1), low_res.begin() + t + 1);
        e.target = high_res[static_cast<std::size_t>(t + 1)];
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace beamcast
