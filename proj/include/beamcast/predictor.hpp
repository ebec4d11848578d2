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

#ifndef BEAMCAST_PREDICTOR_HPP
#define BEAMCAST_PREDICTOR_HPP

#include "beamcast/interchange.hpp"
#include "beamcast/sweep.hpp"

#include <memory>
#include <optional>
#include <string>

namespace beamcast
{

enum class PredictorKind
{
    oracle,
    persistence,
    bilinear,
    bicubic,
    external
};

struct Prediction
{
    ImagePair images;
    // Present only when the predictor knows the true signs (oracle with a sweep).
    std::optional<BeamImage> sign_real;
    std::optional<BeamImage> sign_imag;
};

// Upsampling on the beam-index lattice: low(a, b) sits at high(a * fr, b * fc)
// with fr = rows / low.rows and fc = cols / low.cols.
BeamImage upsample_nearest(const BeamImage &low, int rows, int cols);
BeamImage upsample_bilinear(const BeamImage &low, int rows, int cols);
// Catmull-Rom (a = -0.5) with clamped edges; output clamped to >= 0 for squared kinds.
BeamImage upsample_bicubic(const BeamImage &low, int rows, int cols);

// Maps an episode's low-resolution window to a high-resolution prediction for
// frame t + 1. Baselines use only the most recent input.
class Predictor
{
public:
    static Predictor oracle();
    static Predictor persistence(int rows, int cols);
    static Predictor bilinear(int rows, int cols);
    static Predictor bicubic(int rows, int cols);
    static Predictor external(std::shared_ptr<const PredictionTable> table);

    // Parses by name: oracle | persistence | bilinear | bicubic. External
    // predictors are built from a table instead.
    static Predictor from_name(const std::string &name, int rows, int cols);

    PredictorKind kind() const { return kind_; }
    std::string name() const;

    // Oracle: `ground_truth` if given, otherwise the episode target.
    // External: lookup of (episode.ue, episode.frame + 1).
    Prediction predict(const Episode &episode, const SweepResult *ground_truth = nullptr) const;

private:
    Predictor(PredictorKind kind, int rows, int cols, std::shared_ptr<const PredictionTable> table = nullptr);

    PredictorKind kind_;
    int rows_;
    int cols_;
    std::shared_ptr<const PredictionTable> table_;
};

} // namespace beamcast

#endif
