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

#ifndef BEAMCAST_PIPELINE_HPP
#define BEAMCAST_PIPELINE_HPP

#include "beamcast/allocator.hpp"
#include "beamcast/channel.hpp"
#include "beamcast/codebook.hpp"
#include "beamcast/config.hpp"
#include "beamcast/interchange.hpp"
#include "beamcast/predictor.hpp"
#include "beamcast/sweep.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace beamcast
{

enum class Policy
{
    optimal,
    topm
};

std::string to_string(Policy policy);
Policy policy_from_string(const std::string &name);

// Everything generated for one seed: channels, per-frame sweeps, low-resolution
// images and the episode list (ue-major, frame-major).
struct SeedSimulation
{
    ScenarioConfig config;
    Scenario scenario;
    Codebook codebook;
    std::vector<std::vector<SweepResult>> sweeps; // [frame][ue]
    std::vector<std::vector<ImagePair>> low_res;  // [frame][ue]
    std::vector<Episode> episodes;

    const Episode &episode(int ue, int frame) const;
};

SeedSimulation simulate_seed(const ScenarioConfig &config, std::uint64_t seed);

InterchangeHeader dataset_header(const ScenarioConfig &config, std::uint64_t seed);

// Checks that a dataset header matches the config's dimensions.
void check_dataset_matches(const InterchangeHeader &header, const ScenarioConfig &config);

// Estimated and true per-beam gains for all users at one predicted frame.
struct FrameEstimate
{
    std::uint64_t seed = 0;
    int frame = 0; // predicted frame t + 1
    ChannelGains estimated;
    ChannelGains truth;
    std::vector<BeamImage> predicted_power;
    double prediction_mse = 0.0;
    std::size_t clamped = 0;
};

// `episodes` holds one episode per user, all for the same frame t.
FrameEstimate estimate_frame(const SeedSimulation &sim, std::span<const Episode *const> episodes,
                             const Predictor &predictor);

struct FrameOutcome
{
    std::uint64_t seed = 0;
    int frame = 0;
    Policy policy = Policy::topm;
    std::string predictor;
    int m = 0;
    double max_power_dbm = 0.0;
    AllocationResult allocation;
    double estimated_sum_rate = 0.0;
    double realized_sum_rate = 0.0; // chosen beams and powers on the true gains
    double prediction_mse = 0.0;
    std::size_t clamped = 0;
};

FrameOutcome allocate_frame(const SeedSimulation &sim, const FrameEstimate &estimate, Policy policy, int m,
                            double max_power_dbm, const AllocatorOptions &options = {});

std::string to_json_line(const FrameOutcome &outcome);

struct EvaluationRow
{
    Policy policy = Policy::topm;
    std::string predictor;
    double max_power_dbm = 0.0;
    int m = 0; // 0 for the optimal policy
    std::size_t samples = 0;
    double mean_sum_rate = 0.0;
    double std_error = 0.0;
    double mean_estimated_sum_rate = 0.0;
    double mean_combinations = 0.0;
};

struct EvaluationPlan
{
    std::vector<std::string> predictors;
    std::vector<double> max_power_dbm;
    std::vector<int> m_values;
    bool include_optimal = true;
};

EvaluationPlan default_plan(const ScenarioConfig &config);

// Runs every (seed, evaluated frame, predictor, P_max, policy, m) combination
// and aggregates realized sum-rates. Optimal rows are skipped when the
// permutation count exceeds config.optimal_max_combinations.
std::vector<EvaluationRow> evaluate(const ScenarioConfig &config, const EvaluationPlan &plan,
                                    const AllocatorOptions &options = {});

std::string evaluation_csv(std::span<const EvaluationRow> rows);

} // namespace beamcast

#endif
