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

#include "beamcast/estimator.hpp"
#include "beamcast/errors.hpp"

#include <cmath>

namespace beamcast
{

namespace
{

void check_same_shape(const BeamImage &a, const BeamImage &b)
{
    if (a.rows != b.rows || a.cols != b.cols || a.size() != b.size())
        throw DomainError("image shape mismatch: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                          std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

double clamped_sqrt(double v, std::size_t &clamped)
{
    if (v < 0.0)
    {
        ++clamped;
        return 0.0;
    }
    return std::sqrt(v);
}

double squared_error(const BeamImage &a, const BeamImage &b)
{
    check_same_shape(a, b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double d = a.values[i] - b.values[i];
        acc += d * d;
    }
    return acc;
}

} // namespace

ComplexImage reconstruct_amplitude(const BeamImage &real_sq, const BeamImage &imag_sq)
{
    check_same_shape(real_sq, imag_sq);
    ComplexImage out{real_sq.rows, real_sq.cols, ComplexVector(real_sq.size()), 0};
    for (std::size_t i = 0; i < real_sq.size(); ++i)
        out.values[i] = {clamped_sqrt(real_sq.values[i], out.clamped), clamped_sqrt(imag_sq.values[i], out.clamped)};
    return out;
}

ComplexImage reconstruct_amplitude(const BeamImage &real_sq, const BeamImage &imag_sq, const BeamImage &sign_real,
                                   const BeamImage &sign_imag)
{
    check_same_shape(real_sq, sign_real);
    check_same_shape(real_sq, sign_imag);
    ComplexImage out = reconstruct_amplitude(real_sq, imag_sq);
    for (std::size_t i = 0; i < out.values.size(); ++i)
    {
        const double sr = sign_real.values[i] < 0.0 ? -1.0 : 1.0;
        const double si = sign_imag.values[i] < 0.0 ? -1.0 : 1.0;
        out.values[i] = {sr * out.values[i].real(), si * out.values[i].imag()};
    }
    return out;
}

Complex ls_effective_channel(Complex received, Complex symbol, double power)
{
    if (!(power > 0.0))
        throw DomainError("LS estimate needs positive sweep power");
    const double energy = std::norm(symbol);
    if (!(energy > 0.0))
        throw DomainError("training symbol must be nonzero");
    return std::conj(symbol) * received / (energy * std::sqrt(power));
}

double mse(std::span<const BeamImage> predicted, std::span<const BeamImage> truth)
{
    if (predicted.empty() || predicted.size() != truth.size())
        throw DomainError("mse needs two nonempty batches of equal size");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        acc += squared_error(predicted[i], truth[i]);
    return acc / static_cast<double>(predicted.size());
}

double mse(std::span<const ImagePair> predicted, std::span<const ImagePair> truth)
{
    if (predicted.empty() || predicted.size() != truth.size())
        throw DomainError("mse needs two nonempty batches of equal size");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        acc += squared_error(predicted[i].real_sq, truth[i].real_sq) +
               squared_error(predicted[i].imag_sq, truth[i].imag_sq);
    return acc / static_cast<double>(predicted.size());
}

ChannelGains::ChannelGains(int users_, int beams_, double fill) : users(users_), beams(beams_)
{
    if (users < 0 || beams < 0)
        throw DomainError("gain matrix dimensions must be nonnegative");
    values.assign(static_cast<std::size_t>(users) * static_cast<std::size_t>(beams), fill);
}

ChannelGains EffectiveChannelEstimate::gains() const
{
    ChannelGains out(users, beams);
    for (std::size_t i = 0; i < values.size(); ++i)
        out.values[i] = std::norm(values[i]);
    return out;
}

EffectiveChannelEstimate oracle_effective_channels(std::span<const ComplexVector> channels, const Codebook &codebook)
{
    EffectiveChannelEstimate out;
    out.users = static_cast<int>(channels.size());
    out.beams = static_cast<int>(codebook.size());
    out.provenance = EstimateProvenance::oracle;
    out.values.reserve(channels.size() * codebook.size());
    for (const auto &h : channels)
        for (std::size_t n = 0; n < codebook.size(); ++n)
            out.values.push_back(inner_product(h, codebook.beam(n)));
    return out;
}

EffectiveChannelEstimate estimate_effective_channels(std::span<const ReceivedImages> users, double sweep_power,
                                                     Complex symbol)
{
    EffectiveChannelEstimate out;
    out.users = static_cast<int>(users.size());
    out.provenance = EstimateProvenance::ls_from_prediction;
    for (const auto &u : users)
    {
        if ((u.sign_real == nullptr) != (u.sign_imag == nullptr))
            throw DomainError("sign planes must be given together");
        const ComplexImage r = u.sign_real
                                   ? reconstruct_amplitude(u.images.real_sq, u.images.imag_sq, *u.sign_real,
                                                           *u.sign_imag)
                                   : reconstruct_amplitude(u.images.real_sq, u.images.imag_sq);
        if (out.beams == 0)
            out.beams = static_cast<int>(r.values.size());
        else if (out.beams != static_cast<int>(r.values.size()))
            throw DomainError("users have different beam counts");
        out.clamped += r.clamped;
        for (const auto &v : r.values)
            out.values.push_back(ls_effective_channel(v, symbol, sweep_power));
    }
    return out;
}

} // namespace beamcast
