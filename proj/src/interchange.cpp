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

#include "beamcast/interchange.hpp"
#include "beamcast/errors.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <limits>
#include <fstream>
#include <iterator>

namespace beamcast
{

namespace
{

static_assert(sizeof(double) == 8 && std::numeric_limits<double>::is_iec559);

void append_f64(std::string &out, double value)
{
    const auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffU));
}

double load_f64(const std::string &bytes, std::size_t offset)
{
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i);
    return std::bit_cast<double>(bits);
}

void append_image(std::string &out, const BeamImage &img, int rows, int cols)
{
    if (img.rows != rows || img.cols != cols || img.size() != static_cast<std::size_t>(rows * cols))
        throw DomainError("image is " + std::to_string(img.rows) + "x" + std::to_string(img.cols) + ", header says " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    for (double v : img.values)
        append_f64(out, v);
}

std::string slurp(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DomainError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path &path, const std::string &bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DomainError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw DomainError("write failed for " + path.string());
}

void check_header(const InterchangeHeader &h, std::size_t offset)
{
    if (h.version != 1)
        throw ParseError("unsupported interchange version " + std::to_string(h.version), offset);
    if (h.kind != "dataset" && h.kind != "predictions")
        throw ParseError("unknown kind '" + h.kind + "'", offset);
    if (h.users < 0 || h.vertical < 1 || h.horizontal < 1 || h.low_vertical < 1 || h.low_horizontal < 1 ||
        h.window < 1 || h.frames < 0)
        throw ParseError("header dimensions out of range", offset);
}

struct Parsed
{
    InterchangeHeader header;
    std::size_t payload_offset = 0;
};

Parsed parse_header(const std::string &bytes)
{
    const auto newline = bytes.find('\n');
    if (newline == std::string::npos)
        throw ParseError("missing header line terminator", bytes.size());
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(newline));
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ParseError(std::string("malformed header: ") + e.what(), e.byte);
    }
    Parsed out;
    out.payload_offset = newline + 1;
    try
    {
        auto &h = out.header;
        h.version = j.at("version").get<int>();
        h.kind = j.at("kind").get<std::string>();
        h.users = j.at("K").get<int>();
        h.vertical = j.at("M_v").get<int>();
        h.horizontal = j.at("M_h").get<int>();
        h.low_vertical = j.at("m_v").get<int>();
        h.low_horizontal = j.at("m_h").get<int>();
        h.window = j.at("s").get<int>();
        h.frames = j.at("frames").get<int>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.records = j.at("records").get<std::uint64_t>();
        if (j.at("dtype").get<std::string>() != "f64le")
            throw ParseError("unsupported dtype", 0);
        if (j.at("beam_order").get<std::string>() != "row-major")
            throw ParseError("unsupported beam_order", 0);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ParseError(std::string("invalid header field: ") + e.what(), 0);
    }
    check_header(out.header, 0);
    return out;
}

std::size_t high_size(const InterchangeHeader &h) { return static_cast<std::size_t>(h.vertical * h.horizontal); }
std::size_t low_size(const InterchangeHeader &h)
{
    return static_cast<std::size_t>(h.low_vertical * h.low_horizontal);
}

void check_payload_size(const InterchangeHeader &h, const std::string &bytes, std::size_t payload_offset)
{
    const std::size_t expected = payload_offset + h.records * h.record_values() * 8;
    if (bytes.size() < expected)
        throw ParseError("truncated payload: expected " + std::to_string(expected) + " bytes, file has " +
                             std::to_string(bytes.size()),
                         bytes.size());
    if (bytes.size() > expected)
        throw ParseError("payload longer than the header declares", expected);
}

// Reads `count` values starting at `offset`, rejecting non-finite ones.
std::vector<double> read_values(const std::string &bytes, std::size_t &offset, std::size_t count)
{
    std::vector<double> out(count);
    for (auto &v : out)
    {
        v = load_f64(bytes, offset);
        if (!std::isfinite(v))
            throw ParseError("non-finite value in payload", offset);
        offset += 8;
    }
    return out;
}

int read_index(const std::string &bytes, std::size_t &offset, int upper, const char *what)
{
    const double v = load_f64(bytes, offset);
    if (!(v >= 0.0) || v != std::floor(v) || v >= static_cast<double>(upper))
        throw ParseError(std::string("invalid ") + what + " index", offset);
    offset += 8;
    return static_cast<int>(v);
}

BeamImage make_image(int rows, int cols, ImageKind kind, std::vector<double> values)
{
    BeamImage img;
    img.rows = rows;
    img.cols = cols;
    img.kind = kind;
    img.values = std::move(values);
    return img;
}

void check_order(std::pair<int, int> &last, std::pair<int, int> key, std::size_t offset)
{
    if (key <= last)
        throw ParseError("records not in ue-major, frame-major order", offset);
    last = key;
}

} // namespace

std::size_t InterchangeHeader::record_values() const
{
    if (kind == "dataset")
        return 2 + 2 * static_cast<std::size_t>(window) * low_size(*this) + 2 * high_size(*this);
    return 2 + 2 * high_size(*this);
}

std::string InterchangeHeader::to_json_line() const
{
    nlohmann::ordered_json j;
    j["version"] = version;
    j["kind"] = kind;
    j["K"] = users;
    j["M_v"] = vertical;
    j["M_h"] = horizontal;
    j["m_v"] = low_vertical;
    j["m_h"] = low_horizontal;
    j["s"] = window;
    j["frames"] = frames;
    j["seed"] = seed;
    j["dtype"] = "f64le";
    j["beam_order"] = "row-major";
    j["records"] = records;
    return j.dump() + "\n";
}

void write_dataset(const std::filesystem::path &path, InterchangeHeader header, std::span<const Episode> episodes)
{
    header.kind = "dataset";
    header.records = episodes.size();
    check_header(header, 0);
    std::string bytes = header.to_json_line();
    bytes.reserve(bytes.size() + episodes.size() * header.record_values() * 8);
    std::pair<int, int> last{-1, -1};
    for (const auto &e : episodes)
    {
        if (e.ue < 0 || e.ue >= header.users || e.frame < 0 || e.frame >= header.frames)
            throw DomainError("episode (ue, frame) outside the header's range");
        if (std::pair{e.ue, e.frame} <= last)
            throw DomainError("episodes must be sorted ue-major, frame-major without duplicates");
        last = {e.ue, e.frame};
        if (e.window() != header.window)
            throw DomainError("episode window differs from header s");
        append_f64(bytes, e.ue);
        append_f64(bytes, e.frame);
        for (const auto &in : e.inputs)
        {
            append_image(bytes, in.real_sq, header.low_vertical, header.low_horizontal);
            append_image(bytes, in.imag_sq, header.low_vertical, header.low_horizontal);
        }
        append_image(bytes, e.target.real_sq, header.vertical, header.horizontal);
        append_image(bytes, e.target.imag_sq, header.vertical, header.horizontal);
    }
    write_file(path, bytes);
}

Dataset read_dataset(const std::filesystem::path &path)
{
    const std::string bytes = slurp(path);
    auto [header, offset] = parse_header(bytes);
    if (header.kind != "dataset")
        throw ParseError("expected kind 'dataset', got '" + header.kind + "'", 0);
    check_payload_size(header, bytes, offset);

    Dataset out;
    out.header = header;
    out.episodes.reserve(header.records);
    std::pair<int, int> last{-1, -1};
    for (std::uint64_t r = 0; r < header.records; ++r)
    {
        const std::size_t record_offset = offset;
        Episode e;
        e.ue = read_index(bytes, offset, header.users, "ue");
        e.frame = read_index(bytes, offset, header.frames, "frame");
        check_order(last, {e.ue, e.frame}, record_offset);
        for (int i = 0; i < header.window; ++i)
        {
            ImagePair p;
            p.real_sq = make_image(header.low_vertical, header.low_horizontal, ImageKind::real_sq,
                                   read_values(bytes, offset, low_size(header)));
            p.imag_sq = make_image(header.low_vertical, header.low_horizontal, ImageKind::imag_sq,
                                   read_values(bytes, offset, low_size(header)));
            e.inputs.push_back(std::move(p));
        }
        e.target.real_sq = make_image(header.vertical, header.horizontal, ImageKind::real_sq,
                                      read_values(bytes, offset, high_size(header)));
        e.target.imag_sq = make_image(header.vertical, header.horizontal, ImageKind::imag_sq,
                                      read_values(bytes, offset, high_size(header)));
        out.episodes.push_back(std::move(e));
    }
    return out;
}

PredictionTable::PredictionTable(InterchangeHeader header, std::map<Key, ImagePair> entries)
    : header_(std::move(header)), entries_(std::move(entries))
{
}

const ImagePair *PredictionTable::find(int ue, int frame) const
{
    const auto it = entries_.find({ue, frame});
    return it == entries_.end() ? nullptr : &it->second;
}

const ImagePair &PredictionTable::at(int ue, int frame) const
{
    if (const auto *p = find(ue, frame))
        return *p;
    throw MissingPredictionError(ue, frame);
}

std::vector<PredictionTable::Key> PredictionTable::missing(int users, int first_frame, int last_frame) const
{
    std::vector<Key> out;
    for (int ue = 0; ue < users; ++ue)
        for (int f = first_frame; f <= last_frame; ++f)
            if (!find(ue, f))
                out.emplace_back(ue, f);
    return out;
}

void write_predictions(const std::filesystem::path &path, InterchangeHeader header,
                       const std::map<PredictionTable::Key, ImagePair> &entries)
{
    header.kind = "predictions";
    header.records = entries.size();
    check_header(header, 0);
    std::string bytes = header.to_json_line();
    for (const auto &[key, pair] : entries)
    {
        if (key.first < 0 || key.first >= header.users || key.second < 0 || key.second >= header.frames)
            throw DomainError("prediction key outside the header's range");
        append_f64(bytes, key.first);
        append_f64(bytes, key.second);
        append_image(bytes, pair.real_sq, header.vertical, header.horizontal);
        append_image(bytes, pair.imag_sq, header.vertical, header.horizontal);
    }
    write_file(path, bytes);
}

PredictionTable read_predictions(const std::filesystem::path &path, std::optional<std::pair<int, int>> expected)
{
    const std::string bytes = slurp(path);
    auto [header, offset] = parse_header(bytes);
    if (header.kind != "predictions")
        throw ParseError("expected kind 'predictions', got '" + header.kind + "'", 0);
    if (expected && (expected->first != header.vertical || expected->second != header.horizontal))
        throw DomainError("predictions geometry " + std::to_string(header.vertical) + "x" +
                          std::to_string(header.horizontal) + " does not match expected " +
                          std::to_string(expected->first) + "x" + std::to_string(expected->second));
    check_payload_size(header, bytes, offset);

    std::map<PredictionTable::Key, ImagePair> entries;
    std::pair<int, int> last{-1, -1};
    for (std::uint64_t r = 0; r < header.records; ++r)
    {
        const std::size_t record_offset = offset;
        const int ue = read_index(bytes, offset, header.users, "ue");
        const int frame = read_index(bytes, offset, header.frames, "frame");
        check_order(last, {ue, frame}, record_offset);
        ImagePair p;
        p.real_sq = make_image(header.vertical, header.horizontal, ImageKind::real_sq,
                               read_values(bytes, offset, high_size(header)));
        p.imag_sq = make_image(header.vertical, header.horizontal, ImageKind::imag_sq,
                               read_values(bytes, offset, high_size(header)));
        entries.emplace(PredictionTable::Key{ue, frame}, std::move(p));
    }
    return PredictionTable(header, std::move(entries));
}

std::uint64_t file_checksum(const std::filesystem::path &path)
{
    const std::string bytes = slurp(path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes)
    {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace beamcast
