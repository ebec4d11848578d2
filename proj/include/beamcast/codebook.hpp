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

#ifndef BEAMCAST_CODEBOOK_HPP
#define BEAMCAST_CODEBOOK_HPP

#include "beamcast/channel.hpp"

#include <span>

namespace beamcast
{

// DFT beams w_(a,b) = f_a (x) f_b with f_a[n] = exp(-j 2 pi n a / N) / sqrt(N).
// Beams are stored row-major in (vertical index a, horizontal index b).
class Codebook
{
public:
    explicit Codebook(const UpaGeometry &geometry);

    const UpaGeometry &geometry() const { return geometry_; }
    std::size_t size() const { return geometry_.size(); }
    std::size_t beam_length() const { return geometry_.size(); }

    std::span<const Complex> beam(std::size_t index) const;
    std::span<const Complex> beam(int vertical_index, int horizontal_index) const;
    std::size_t index(int vertical_index, int horizontal_index) const;

private:
    UpaGeometry geometry_;
    ComplexVector weights_; // size() beams of beam_length() entries
};

Codebook dft_codebook(const UpaGeometry &geometry);

// h^H w
Complex inner_product(std::span<const Complex> h, std::span<const Complex> w);

// |h^H w|^2
double beam_gain(std::span<const Complex> h, std::span<const Complex> w);

// sqrt(p) (h^H w) s + noise; |s| must be 1 within 1e-9.
Complex received_sample(std::span<const Complex> h, std::span<const Complex> w, double power, Complex symbol,
                        Complex noise);

} // namespace beamcast

#endif
