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

#include "beamcast/predictor.hpp"
#include "beamcast/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace beamcast
{

namespace
{

struct Lattice
{
    int row_factor;
    int col_factor;
};

Lattice lattice_of(const BeamImage &low, int rows, int cols)
{
    if (low.rows < 1 || low.cols < 1 || rows < low.rows || cols < low.cols || rows % low.rows != 0 ||
        cols % low.cols != 0)
        throw DomainError("cannot upsample " + std::to_string(low.rows) + "x" + std::to_string(low.cols) + " to " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    return {rows / low.rows, cols / low.cols};
}

bool is_squared_kind(ImageKind kind)
{
    return kind == ImageKind::power || kind == ImageKind::real_sq || kind == ImageKind::imag_sq;
}

// Catmull-Rom weights for taps at offsets -1, 0, 1, 2 and fractional position t.
std::array<double, 4> catmull_rom(double t)
{
    const double t2 = t * t, t3 = t2 * t;
    return {0.5 * (-t3 + 2.0 * t2 - t), 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0), 0.5 * (-3.0 * t3 + 4.0 * t2 + t),
            0.5 * (t3 - t2)};
}

template <typename Interp>
BeamImage separable(const BeamImage &low, int rows, int cols, Interp interp)
{
    const Lattice f = lattice_of(low, rows, cols);
    // Rows of `low` first, then columns.
    BeamImage horizontal(low.rows, cols, low.kind);
    for (int a = 0; a < low.rows; ++a)
        for (int j = 0; j < cols; ++j)
            horizontal.at(a, j) = interp([&](int b) { return low.at(a, std::clamp(b, 0, low.cols - 1)); },
                                         static_cast<double>(j) / f.col_factor);
    BeamImage out(rows, cols, low.kind);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out.at(i, j) = interp([&](int a) { return horizontal.at(std::clamp(a, 0, low.rows - 1), j); },
                                  static_cast<double>(i) / f.row_factor);
    if (is_squared_kind(low.kind))
        for (auto &v : out.values)
            v = std::max(v, 0.0);
    return out;
}

} // namespace

BeamImage upsample_nearest(const BeamImage &low, int rows, int cols)
{
    const Lattice f = lattice_of(low, rows, cols);
    BeamImage out(rows, cols, low.kind);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out.at(i, j) = low.at(i / f.row_factor, j / f.col_factor);
    return out;
}

BeamImage upsample_bilinear(const BeamImage &low, int rows, int cols)
{
    return separable(low, rows, cols,
                     [](auto sample, double x)
                     {
                         const int x0 = static_cast<int>(std::floor(x));
                         const double t = x - x0;
                         return (1.0 - t) * sample(x0) + t * sample(x0 + 1);
                     });
}

BeamImage upsample_bicubic(const BeamImage &low, int rows, int cols)
{
    return separable(low, rows, cols,
                     [](auto sample, double x)
                     {
                         const int x0 = static_cast<int>(std::floor(x));
                         const auto w = catmull_rom(x - x0);
                         return w[0] * sample(x0 - 1) + w[1] * sample(x0) + w[2] * sample(x0 + 1) +
                                w[3] * sample(x0 + 2);
                     });
}

Predictor::Predictor(PredictorKind kind, int rows, int cols, std::shared_ptr<const PredictionTable> table)
    : kind_(kind), rows_(rows), cols_(cols), table_(std::move(table))
{
}

Predictor Predictor::oracle() { return Predictor(PredictorKind::oracle, 0, 0); }
Predictor Predictor::persistence(int rows, int cols) { return Predictor(PredictorKind::persistence, rows, cols); }
Predictor Predictor::bilinear(int rows, int cols) { return Predictor(PredictorKind::bilinear, rows, cols); }
Predictor Predictor::bicubic(int rows, int cols) { return Predictor(PredictorKind::bicubic, rows, cols); }

Predictor Predictor::external(std::shared_ptr<const PredictionTable> table)
{
    if (!table)
        throw DomainError("external predictor needs a prediction table");
    // Read the shape before the pointer is moved into the constructor call.
    const int rows = table->header().vertical;
    const int cols = table->header().horizontal;
    return Predictor(PredictorKind::external, rows, cols, std::move(table));
}

Predictor Predictor::from_name(const std::string &name, int rows, int cols)
{
    if (name == "oracle")
        return oracle();
    if (name == "persistence")
        return persistence(rows, cols);
    if (name == "bilinear")
        return bilinear(rows, cols);
    if (name == "bicubic")
        return bicubic(rows, cols);
    throw DomainError("unknown predictor '" + name + "'");
}

std::string Predictor::name() const
{
    switch (kind_)
    {
    case PredictorKind::oracle:
        return "oracle";
    case PredictorKind::persistence:
        return "persistence";
    case PredictorKind::bilinear:
        return "bilinear";
    case PredictorKind::bicubic:
        return "bicubic";
    case PredictorKind::external:
        return "external";
    }
    return "unknown";
}

Prediction Predictor::predict(const Episode &episode, const SweepResult *ground_truth) const
{
    Prediction out;
    if (kind_ == PredictorKind::oracle)
    {
        if (ground_truth)
        {
            out.images = ground_truth->pair();
            out.sign_real = ground_truth->sign_real;
            out.sign_imag = ground_truth->sign_imag;
        }
        else
        {
            if (episode.target.real_sq.size() == 0)
                throw DomainError("oracle predictor needs ground truth");
            out.images = episode.target;
        }
        return out;
    }
    if (kind_ == PredictorKind::external)
    {
        out.images = table_->at(episode.ue, episode.frame + 1);
        return out;
    }

    if (episode.inputs.empty())
        throw DomainError("episode has no inputs");
    const ImagePair &latest = episode.inputs.back();
    auto upsample = [&](const BeamImage &img)
    {
        switch (kind_)
        {
        case PredictorKind::persistence:
            return upsample_nearest(img, rows_, cols_);
        case PredictorKind::bilinear:
            return upsample_bilinear(img, rows_, cols_);
        default:
            return upsample_bicubic(img, rows_, cols_);
        }
    };
    out.images.real_sq = upsample(latest.real_sq);
    out.images.imag_sq = upsample(latest.imag_sq);
    return out;
}

} // namespace beamcast
