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
#include "beamcast/estimator.hpp"
#include "beamcast/sweep.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace beamcast;

namespace
{

ComplexVector random_channel(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexVector h(n);
    for (auto &x : h)
        x = {g(rng), g(rng)};
    return h;
}

ImagePair constant_pair(int rows, int cols, double v)
{
    return {BeamImage(rows, cols, ImageKind::real_sq, v), BeamImage(rows, cols, ImageKind::imag_sq, v)};
}

} // namespace

TEST_CASE("noiseless sweep of a beam-aligned channel lights one pixel")
{
    const Codebook cb(UpaGeometry{8, 8, 0.005});
    const auto w = cb.beam(0);
    const ComplexVector h(w.begin(), w.end());
    const auto s = sweep_high_res(h, cb, 1.0, 0.0, 1);
    CHECK(s.power.rows == 8);
    CHECK(s.power.cols == 8);
    CHECK(s.power.values[0] == doctest::Approx(1.0));
    for (std::size_t n = 1; n < 64; ++n)
        CHECK(s.power.values[n] <= 1e-24);
}

TEST_CASE("power image is the sum of the squared parts")
{
    const Codebook cb(UpaGeometry{8, 8, 0.005});
    const auto h = random_channel(2, 64);
    const auto s = sweep_high_res(h, cb, 0.5, 0.3, 99);
    for (std::size_t n = 0; n < 64; ++n)
    {
        CHECK(s.power.values[n] == s.real_sq.values[n] + s.imag_sq.values[n]);
        CHECK(s.real_sq.values[n] >= 0.0);
        CHECK(std::abs(s.sign_real.values[n]) == 1.0);
        CHECK(std::abs(s.sign_imag.values[n]) == 1.0);
    }
    CHECK(s.pair().power() == s.power);
}

TEST_CASE("sweeps are deterministic given the seed")
{
    const Codebook cb(UpaGeometry{4, 4, 0.005});
    const auto h = random_channel(3, 16);
    const auto a = sweep_high_res(h, cb, 1.0, 0.1, 5);
    const auto b = sweep_high_res(h, cb, 1.0, 0.1, 5);
    const auto c = sweep_high_res(h, cb, 1.0, 0.1, 6);
    CHECK(a.pair() == b.pair());
    CHECK(!(a.pair() == c.pair()));
    CHECK_THROWS_AS(sweep_high_res(h, cb, 0.0, 0.1, 5), DomainError);
}

TEST_CASE("noiseless sweep with signs reproduces the received samples")
{
    const Codebook cb(UpaGeometry{4, 4, 0.005});
    const auto h = random_channel(4, 16);
    const double p = 2.0;
    const Complex symbol = std::polar(1.0, 0.7);
    const auto s = sweep_high_res(h, cb, p, 0.0, 1, symbol);
    const auto r = reconstruct_amplitude(s.real_sq, s.imag_sq, s.sign_real, s.sign_imag);
    for (std::size_t n = 0; n < cb.size(); ++n)
    {
        const Complex direct = received_sample(h, cb.beam(n), p, symbol, 0.0);
        CHECK(std::abs(r.values[n] - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("downsampling")
{
    const BeamImage constant(8, 8, ImageKind::power, 3.0);
    const auto low = downsample_to_low_res(constant);
    CHECK(low.rows == 4);
    CHECK(low.cols == 4);
    for (double v : low.values)
        CHECK(v == 3.0);

    BeamImage impulse(8, 8, ImageKind::power);
    impulse.at(0, 0) = 1.0;
    const auto li = downsample_to_low_res(impulse);
    CHECK(li.at(0, 0) == 1.0);
    double rest = 0.0;
    for (double v : li.values)
        rest += v;
    CHECK(rest == 1.0);

    BeamImage ramp(8, 8, ImageKind::power);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            ramp.at(r, c) = 10 * r + c;
    const auto lr = downsample_to_low_res(ramp);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(lr.at(a, b) == ramp.at(2 * a, 2 * b));

    CHECK_THROWS_AS(downsample_to_low_res(BeamImage(7, 8, ImageKind::power)), DomainError);
}

TEST_CASE("decimated channel keeps every other element")
{
    const UpaGeometry g{4, 4, 0.005};
    ComplexVector h(16);
    for (int i = 0; i < 16; ++i)
        h[static_cast<std::size_t>(i)] = i;
    const auto d = decimate_channel(h, g, 2, 2);
    REQUIRE(d.size() == 4);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 2.0);
    CHECK(d[2] == 8.0);
    CHECK(d[3] == 10.0);
}

TEST_CASE("episode construction")
{
    std::vector<ImagePair> low, high;
    for (int f = 0; f < 30; ++f)
    {
        low.push_back(constant_pair(4, 4, f));
        high.push_back(constant_pair(8, 8, f));
    }
    const auto eps = build_episodes(2, low, high, 3);
    REQUIRE(eps.size() == 27);
    for (const auto &e : eps)
    {
        CHECK(e.ue == 2);
        CHECK(e.window() == 3);
        for (int i = 0; i < 3; ++i)
            CHECK(e.inputs[static_cast<std::size_t>(i)].real_sq.values[0] == e.frame - 2 + i);
        CHECK(e.target.real_sq.values[0] == e.frame + 1);
    }
    CHECK(eps.front().frame == 2);
    CHECK(eps.back().frame == 28);

    const auto single = build_episodes(0, low, high, 1);
    CHECK(single.size() == 29);
    CHECK(single.front().inputs.size() == 1);

    CHECK_THROWS_AS(build_episodes(0, low, high, 30), DomainError);
    CHECK_THROWS_AS(build_episodes(0, low, high, 0), DomainError);
}
