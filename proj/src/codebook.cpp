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

#include "beamcast/codebook.hpp"
#include "beamcast/errors.hpp"

#include <cmath>

namespace beamcast
{

namespace
{

ComplexVector dft_column(int size, int column)
{
    ComplexVector out(static_cast<std::size_t>(size));
    const double scale = 1.0 / std::sqrt(static_cast<double>(size));
    for (int n = 0; n < size; ++n)
    {
        // n * column reduced mod size keeps the argument small and exact
        const int k = (n * column) % size;
        out[static_cast<std::size_t>(n)] = std::polar(scale, -2.0 * kPi * k / size);
    }
    return out;
}

} // namespace

Codebook::Codebook(const UpaGeometry &geometry) : geometry_(geometry)
{
    geometry_.validate();
    const std::size_t n = geometry_.size();
    weights_.reserve(n * n);
    for (int a = 0; a < geometry_.vertical; ++a)
    {
        const auto fv = dft_column(geometry_.vertical, a);
        for (int b = 0; b < geometry_.horizontal; ++b)
        {
            const auto fh = dft_column(geometry_.horizontal, b);
            for (const auto &v : fv)
                for (const auto &h : fh)
                    weights_.push_back(v * h);
        }
    }
}

std::span<const Complex> Codebook::beam(std::size_t index) const
{
    if (index >= size())
        throw DomainError("beam index " + std::to_string(index) + " out of range");
    return std::span<const Complex>(weights_).subspan(index * beam_length(), beam_length());
}

std::size_t Codebook::index(int vertical_index, int horizontal_index) const
{
    if (vertical_index < 0 || vertical_index >= geometry_.vertical || horizontal_index < 0 ||
        horizontal_index >= geometry_.horizontal)
        throw DomainError("beam grid index out of range");
    return static_cast<std::size_t>(vertical_index) * static_cast<std::size_t>(geometry_.horizontal) +
           static_cast<std::size_t>(horizontal_index);
}

std::span<const Complex> Codebook::beam(int vertical_index, int horizontal_index) const
{
    return beam(index(vertical_index, horizontal_index));
}

Codebook dft_codebook(const UpaGeometry &geometry) { return Codebook(geometry); }

Complex inner_product(std::span<const Complex> h, std::span<const Complex> w)
{
    if (h.size() != w.size())
        throw DomainError("channel/beam dimension mismatch: " + std::to_string(h.size()) + " vs " +
                          std::to_string(w.size()));
    Complex acc{};
    for (std::size_t i = 0; i < h.size(); ++i)
        acc += std::conj(h[i]) * w[i];
    return acc;
}

double beam_gain(std::span<const Complex> h, std::span<const Complex> w) { return std::norm(inner_product(h, w)); }

Complex received_sample(std::span<const Complex> h, std::span<const Complex> w, double power, Complex symbol,
                        Complex noise)
{
    if (!(power >= 0.0))
        throw DomainError("transmit power must be nonnegative");
    if (std::abs(std::abs(symbol) - 1.0) > 1e-9)
        throw DomainError("training symbol must have unit modulus");
    return std::sqrt(power) * inner_product(h, w) * symbol + noise;
}

} // namespace beamcast
