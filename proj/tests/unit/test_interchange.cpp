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

#include "beamcast/errors.hpp"
#include "beamcast/interchange.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

using namespace beamcast;
namespace fs = std::filesystem;

namespace
{

struct TempDir
{
    fs::path path;
    TempDir()
    {
        path = fs::temp_directory_path() / ("beamcast_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

BeamImage random_image(std::mt19937_64 &rng, int rows, int cols, ImageKind kind)
{
    std::exponential_distribution<double> e(1e6);
    BeamImage img(rows, cols, kind);
    for (auto &v : img.values)
        v = e(rng);
    return img;
}

InterchangeHeader small_header()
{
    InterchangeHeader h;
    h.users = 2;
    h.vertical = 4;
    h.horizontal = 4;
    h.low_vertical = 2;
    h.low_horizontal = 2;
    h.window = 2;
    h.frames = 6;
    h.seed = 77;
    return h;
}

std::vector<Episode> random_episodes(const InterchangeHeader &h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Episode> out;
    for (int ue = 0; ue < h.users; ++ue)
        for (int t = h.window - 1; t <= h.frames - 2; ++t)
        {
            Episode e;
            e.ue = ue;
            e.frame = t;
            for (int i = 0; i < h.window; ++i)
                e.inputs.push_back({random_image(rng, h.low_vertical, h.low_horizontal, ImageKind::real_sq),
                                    random_image(rng, h.low_vertical, h.low_horizontal, ImageKind::imag_sq)});
            e.target = {random_image(rng, h.vertical, h.horizontal, ImageKind::real_sq),
                        random_image(rng, h.vertical, h.horizontal, ImageKind::imag_sq)};
            out.push_back(std::move(e));
        }
    return out;
}

std::string read_bytes(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path &p, const std::string &bytes)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool same_bits(const BeamImage &a, const BeamImage &b)
{
    return a.rows == b.rows && a.cols == b.cols && a.values.size() == b.values.size() &&
           std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("dataset round trip is bit exact")
{
    TempDir dir;
    const auto header = small_header();
    const auto episodes = random_episodes(header, 1);
    const auto path = dir.path / "d.bin";
    write_dataset(path, header, episodes);
    const auto back = read_dataset(path);
    CHECK(back.header.records == episodes.size());
    CHECK(back.header.seed == 77);
    REQUIRE(back.episodes.size() == episodes.size());
    for (std::size_t i = 0; i < episodes.size(); ++i)
    {
        CHECK(back.episodes[i].ue == episodes[i].ue);
        CHECK(back.episodes[i].frame == episodes[i].frame);
        for (std::size_t w = 0; w < episodes[i].inputs.size(); ++w)
        {
            CHECK(same_bits(back.episodes[i].inputs[w].real_sq, episodes[i].inputs[w].real_sq));
            CHECK(same_bits(back.episodes[i].inputs[w].imag_sq, episodes[i].inputs[w].imag_sq));
        }
        CHECK(same_bits(back.episodes[i].target.real_sq, episodes[i].target.real_sq));
        CHECK(same_bits(back.episodes[i].target.imag_sq, episodes[i].target.imag_sq));
    }

    // Writing what was read gives the same bytes.
    write_dataset(dir.path / "e.bin", back.header, back.episodes);
    CHECK(read_bytes(path) == read_bytes(dir.path / "e.bin"));
    CHECK(file_checksum(path) == file_checksum(dir.path / "e.bin"));
}

TEST_CASE("header line and payload layout")
{
    TempDir dir;
    const auto header = small_header();
    const auto episodes = random_episodes(header, 2);
    const auto path = dir.path / "d.bin";
    write_dataset(path, header, episodes);
    const auto bytes = read_bytes(path);
    const auto nl = bytes.find('\n');
    REQUIRE(nl != std::string::npos);
    const auto j = nlohmann::json::parse(bytes.substr(0, nl));
    CHECK(j["K"] == 2);
    CHECK(j["M_v"] == 4);
    CHECK(j["m_h"] == 2);
    CHECK(j["s"] == 2);
    CHECK(j["dtype"] == "f64le");
    CHECK(j["beam_order"] == "row-major");
    CHECK(j["kind"] == "dataset");

    const std::size_t per_record = 2 + 2 * 2 * 4 + 2 * 16;
    CHECK(bytes.size() == nl + 1 + episodes.size() * per_record * 8);

    // First record: ue, frame, then the first low-res real_sq pixel.
    auto f64_at = [&](std::size_t value_index)
    {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[nl + 1 + 8 * value_index + i]))
                    << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };
    CHECK(f64_at(0) == 0.0);
    CHECK(f64_at(1) == 1.0);
    CHECK(f64_at(2) == episodes[0].inputs[0].real_sq.values[0]);
    CHECK(f64_at(2 + 4) == episodes[0].inputs[0].imag_sq.values[0]);
    CHECK(f64_at(per_record - 16) == episodes[0].target.imag_sq.values[0]);
}

TEST_CASE("empty dataset is a valid file")
{
    TempDir dir;
    const auto path = dir.path / "empty.bin";
    write_dataset(path, small_header(), {});
    const auto back = read_dataset(path);
    CHECK(back.episodes.empty());
    CHECK(back.header.records == 0);
}

TEST_CASE("malformed datasets are rejected with an offset")
{
    TempDir dir;
    const auto header = small_header();
    const auto path = dir.path / "d.bin";
    write_dataset(path, header, random_episodes(header, 3));
    const auto good = read_bytes(path);
    const auto nl = good.find('\n');

    write_bytes(path, good.substr(0, good.size() - 5));
    try
    {
        read_dataset(path);
        FAIL("truncated payload accepted");
    }
    catch (const ParseError &e)
    {
        CHECK(std::string(e.what()).find("truncated") != std::string::npos);
        CHECK(e.offset() == good.size() - 5);
    }

    write_bytes(path, good + "x");
    CHECK_THROWS_AS(read_dataset(path), ParseError);

    write_bytes(path, "{\"version\": 1, \"kind\": \n" + good.substr(nl + 1));
    CHECK_THROWS_AS(read_dataset(path), ParseError);

    write_bytes(path, good.substr(0, nl));
    CHECK_THROWS_AS(read_dataset(path), ParseError);

    // Dimension mismatch: header claims a larger array than the payload holds.
    auto j = nlohmann::json::parse(good.substr(0, nl));
    j["M_v"] = 8;
    write_bytes(path, j.dump() + "\n" + good.substr(nl + 1));
    CHECK_THROWS_AS(read_dataset(path), ParseError);

    // NaN in the first pixel of the first record.
    std::string nan_bytes = good;
    const double nan = std::nan("");
    std::memcpy(nan_bytes.data() + nl + 1 + 16, &nan, 8);
    write_bytes(path, nan_bytes);
    try
    {
        read_dataset(path);
        FAIL("NaN accepted");
    }
    catch (const ParseError &e)
    {
        CHECK(e.offset() == nl + 1 + 16);
    }
}

TEST_CASE("writer rejects unsorted or mis-shaped episodes")
{
    TempDir dir;
    const auto header = small_header();
    auto eps = random_episodes(header, 4);
    std::swap(eps[0], eps[1]);
    CHECK_THROWS_AS(write_dataset(dir.path / "x.bin", header, eps), DomainError);
    eps = random_episodes(header, 4);
    eps[0].target.real_sq = BeamImage(3, 3, ImageKind::real_sq);
    CHECK_THROWS_AS(write_dataset(dir.path / "x.bin", header, eps), DomainError);
}

TEST_CASE("prediction files")
{
    TempDir dir;
    auto header = small_header();
    std::mt19937_64 rng(8);
    std::map<PredictionTable::Key, ImagePair> entries;
    for (int ue = 0; ue < 2; ++ue)
        for (int f = 2; f <= 5; ++f)
            entries[{ue, f}] = {random_image(rng, 4, 4, ImageKind::real_sq), random_image(rng, 4, 4, ImageKind::imag_sq)};
    entries.erase({1, 4});
    const auto path = dir.path / "p.bin";
    write_predictions(path, header, entries);

    const auto table = read_predictions(path, std::pair{4, 4});
    CHECK(table.header().kind == "predictions");
    CHECK(table.size() == 7);
    CHECK(same_bits(table.at(0, 3).real_sq, entries[{0, 3}].real_sq));
    CHECK(table.find(1, 4) == nullptr);
    try
    {
        table.at(1, 4);
        FAIL("missing key found");
    }
    catch (const MissingPredictionError &e)
    {
        CHECK(e.ue() == 1);
        CHECK(e.frame() == 4);
    }
    const auto missing = table.missing(2, 2, 5);
    REQUIRE(missing.size() == 1);
    CHECK(missing[0] == PredictionTable::Key{1, 4});

    CHECK_THROWS_AS(read_predictions(path, std::pair{8, 8}), DomainError);
    // A dataset is not a prediction file.
    write_dataset(dir.path / "d.bin", header, random_episodes(header, 9));
    CHECK_THROWS(read_predictions(dir.path / "d.bin"));

    // Inf is rejected.
    auto bytes = read_bytes(path);
    const double inf = INFINITY;
    std::memcpy(bytes.data() + bytes.find('\n') + 1 + 16 + 8, &inf, 8);
    write_bytes(path, bytes);
    CHECK_THROWS_AS(read_predictions(path), ParseError);
}
