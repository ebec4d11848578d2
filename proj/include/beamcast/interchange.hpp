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

#ifndef BEAMCAST_INTERCHANGE_HPP
#define BEAMCAST_INTERCHANGE_HPP

#include "beamcast/sweep.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace beamcast
{

// File layout: one line of JSON (the header, terminated by '\n') followed by
// `records` fixed-size records of little-endian IEEE-754 binary64 values.
// Records are ue-major, then frame-major; each record starts with the ue and
// frame index stored as f64, followed by images in kind-major, row-major order.
//
//   dataset record:     ue, frame, s x (low real_sq, low imag_sq), high real_sq, high imag_sq
//   predictions record: ue, frame, high real_sq, high imag_sq
//
// In a dataset `frame` is the last input frame t; in a predictions file it is
// the predicted frame t + 1.
struct InterchangeHeader
{
    int version = 1;
    std::string kind = "dataset"; // "dataset" | "predictions"
    int users = 0;
    int vertical = 0;
    int horizontal = 0;
    int low_vertical = 0;
    int low_horizontal = 0;
    int window = 1;
    int frames = 0;
    std::uint64_t seed = 0;
    std::uint64_t records = 0;

    std::size_t record_values() const;
    std::string to_json_line() const;
    bool operator==(const InterchangeHeader &) const = default;
};

struct Dataset
{
    InterchangeHeader header;
    std::vector<Episode> episodes;
};

// `header.records` is set from `episodes.size()`; kind is forced to "dataset".
void write_dataset(const std::filesystem::path &path, InterchangeHeader header, std::span<const Episode> episodes);
Dataset read_dataset(const std::filesystem::path &path);

class PredictionTable
{
public:
    using Key = std::pair<int, int>; // (ue, predicted frame)

    PredictionTable() = default;
    PredictionTable(InterchangeHeader header, std::map<Key, ImagePair> entries);

    const InterchangeHeader &header() const { return header_; }
    std::size_t size() const { return entries_.size(); }
    const std::map<Key, ImagePair> &entries() const { return entries_; }

    const ImagePair *find(int ue, int frame) const;
    const ImagePair &at(int ue, int frame) const; // throws MissingPredictionError

    // Keys in [0, users) x [first_frame, last_frame] that have no entry.
    std::vector<Key> missing(int users, int first_frame, int last_frame) const;

private:
    InterchangeHeader header_;
    std::map<Key, ImagePair> entries_;
};

void write_predictions(const std::filesystem::path &path, InterchangeHeader header,
                       const std::map<PredictionTable::Key, ImagePair> &entries);

// Rejects NaN/Inf payload values and, when `expected` is given, any geometry
// other than expected->vertical x expected->horizontal.
PredictionTable read_predictions(const std::filesystem::path &path,
                                 std::optional<std::pair<int, int>> expected = std::nullopt);

// FNV-1a 64-bit digest of a file's bytes.
std::uint64_t file_checksum(const std::filesystem::path &path);

} // namespace beamcast

#endif
