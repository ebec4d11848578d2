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

#include "beamcast/pipeline.hpp"
#include "beamcast/errors.hpp"
#include "beamcast/estimator.hpp"
#include "beamcast/random.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

namespace beamcast
{

std::string to_string(Policy policy) { return policy == Policy::optimal ? "optimal" : "topm"; }

Policy policy_from_string(const std::string &name)
{
    if (name == "optimal")
        return Policy::optimal;
    if (name == "topm")
        return Policy::topm;
    throw DomainError("unknown policy '" + name + "' (expected optimal or topm)");
}

const Episode &SeedSimulation::episode(int ue, int frame) const
{
    const int per_ue = config.frames - config.window;
    const int offset = frame - (config.window - 1);
    if (ue < 0 || ue >= config.users || offset < 0 || offset >= per_ue)
        throw DomainError("no episode for ue " + std::to_string(ue) + ", frame " + std::to_string(frame));
    return episodes[static_cast<std::size_t>(ue * per_ue + offset)];
}

SeedSimulation simulate_seed(const ScenarioConfig &config, std::uint64_t seed)
{
    config.validate();
    SeedSimulation sim{config, synthesize_scenario(config, seed), Codebook(config.geometry()), {}, {}, {}};
    const UpaGeometry geometry = config.geometry();
    const int row_factor = config.antennas_vertical / config.lowres_vertical;
    const int col_factor = config.antennas_horizontal / config.lowres_horizontal;
    const Codebook low_codebook(config.lowres_geometry());
    const double power = config.sweep_power_w();
    const double noise = config.noise_power_w();

    for (int f = 0; f < config.frames; ++f)
    {
        std::vector<SweepResult> sweeps;
        std::vector<ImagePair> lows;
        for (int k = 0; k < config.users; ++k)
        {
            const auto &h = sim.scenario.channels[f][k].h;
            sweeps.push_back(sweep_high_res(h, sim.codebook, power, noise, derive_seed(seed, 0x5eedULL, f, k)));
            if (config.lowres_mode == LowResMode::subsample)
            {
                lows.push_back({downsample_to_low_res(sweeps.back().real_sq, row_factor, col_factor),
                                downsample_to_low_res(sweeps.back().imag_sq, row_factor, col_factor)});
            }
            else
            {
                const auto decimated = decimate_channel(h, geometry, row_factor, col_factor);
                lows.push_back(
                    sweep_high_res(decimated, low_codebook, power, noise, derive_seed(seed, 0x10e5ULL, f, k)).pair());
            }
        }
        sim.sweeps.push_back(std::move(sweeps));
        sim.low_res.push_back(std::move(lows));
    }

    for (int k = 0; k < config.users; ++k)
    {
        std::vector<ImagePair> low, high;
        for (int f = 0; f < config.frames; ++f)
        {
            low.push_back(sim.low_res[f][k]);
            high.push_back(sim.sweeps[f][k].pair());
        }
        auto eps = build_episodes(k, low, high, config.window);
        sim.episodes.insert(sim.episodes.end(), std::make_move_iterator(eps.begin()),
                            std::make_move_iterator(eps.end()));
    }
    return sim;
}

InterchangeHeader dataset_header(const ScenarioConfig &config, std::uint64_t seed)
{
    InterchangeHeader h;
    h.kind = "dataset";
    h.users = config.users;
    h.vertical = config.antennas_vertical;
    h.horizontal = config.antennas_horizontal;
    h.low_vertical = config.lowres_vertical;
    h.low_horizontal = config.lowres_horizontal;
    h.window = config.window;
    h.frames = config.frames;
    h.seed = seed;
    return h;
}

void check_dataset_matches(const InterchangeHeader &h, const ScenarioConfig &c)
{
    if (h.users != c.users || h.vertical != c.antennas_vertical || h.horizontal != c.antennas_horizontal ||
        h.low_vertical != c.lowres_vertical || h.low_horizontal != c.lowres_horizontal || h.window != c.window ||
        h.frames != c.frames)
        throw DomainError("dataset header (K=" + std::to_string(h.users) + ", " + std::to_string(h.vertical) + "x" +
                          std::to_string(h.horizontal) + ", s=" + std::to_string(h.window) +
                          ") does not match the config");
}

FrameEstimate estimate_frame(const SeedSimulation &sim, std::span<const Episode *const> episodes,
                             const Predictor &predictor)
{
    const ScenarioConfig &config = sim.config;
    if (static_cast<int>(episodes.size()) != config.users)
        throw DomainError("need one episode per user");
    const int t = episodes.front()->frame;
    if (t + 1 >= config.frames)
        throw DomainError("episode frame has no successor");

    FrameEstimate out;
    out.seed = sim.scenario.seed;
    out.frame = t + 1;

    std::vector<Prediction> predictions;
    predictions.reserve(episodes.size());
    std::vector<ImagePair> predicted, targets;
    for (std::size_t k = 0; k < episodes.size(); ++k)
    {
        const Episode &e = *episodes[k];
        if (e.frame != t || e.ue != static_cast<int>(k))
            throw DomainError("episodes must cover users 0..K-1 at one frame");
        predictions.push_back(predictor.predict(e, &sim.sweeps[t + 1][k]));
        predicted.push_back(predictions.back().images);
        targets.push_back(e.target);
        out.predicted_power.push_back(predictions.back().images.power());
    }
    out.prediction_mse = mse(std::span<const ImagePair>(predicted), std::span<const ImagePair>(targets));

    std::vector<ReceivedImages> received;
    for (const auto &p : predictions)
    {
        ReceivedImages r{p.images};
        if (config.sign_mode == SignMode::preserve && p.sign_real && p.sign_imag)
        {
            r.sign_real = &*p.sign_real;
            r.sign_imag = &*p.sign_imag;
        }
        received.push_back(r);
    }
    const auto estimate = estimate_effective_channels(received, config.sweep_power_w());
    out.estimated = estimate.gains();
    out.clamped = estimate.clamped;

    std::vector<ComplexVector> channels;
    for (const auto &c : sim.scenario.channels[t + 1])
        channels.push_back(c.h);
    out.truth = oracle_effective_channels(channels, sim.codebook).gains();
    return out;
}

FrameOutcome allocate_frame(const SeedSimulation &sim, const FrameEstimate &estimate, Policy policy, int m,
                            double max_power_dbm, const AllocatorOptions &options)
{
    const ScenarioConfig &config = sim.config;
    AllocatorOptions opts = options;
    opts.kkt.interference = config.interference_model;
    const double max_power = dbm_to_watts(max_power_dbm);
    const double noise = config.noise_power_w();

    FrameOutcome out;
    out.seed = estimate.seed;
    out.frame = estimate.frame;
    out.policy = policy;
    out.m = policy == Policy::topm ? m : 0;
    out.max_power_dbm = max_power_dbm;
    out.prediction_mse = estimate.prediction_mse;
    out.clamped = estimate.clamped;
    if (policy == Policy::optimal)
    {
        const auto count = permutation_count(static_cast<std::uint64_t>(estimate.estimated.beams),
                                             static_cast<std::uint64_t>(estimate.estimated.users));
        if (count > config.optimal_max_combinations)
            throw DomainError("optimal policy needs " + std::to_string(count) +
                              " combinations, above optimal_max_combinations = " +
                              std::to_string(config.optimal_max_combinations));
        out.allocation = enumerate_optimal(estimate.estimated, max_power, noise, opts);
    }
    else
    {
        out.allocation = topm_allocate(estimate.predicted_power, estimate.estimated, m, max_power, noise, opts);
    }
    out.estimated_sum_rate = out.allocation.sum_rate;
    out.realized_sum_rate =
        sum_rate(out.allocation.beams, out.allocation.power, estimate.truth, noise, config.interference_model);
    return out;
}

std::string to_json_line(const FrameOutcome &o)
{
    nlohmann::ordered_json j;
    j["schema"] = "beamcast.allocation.v1";
    j["seed"] = o.seed;
    j["frame"] = o.frame;
    j["policy"] = to_string(o.policy);
    j["predictor"] = o.predictor;
    j["m"] = o.m;
    j["max_power_dbm"] = o.max_power_dbm;
    j["beams"] = o.allocation.beams;
    j["power_w"] = o.allocation.power;
    j["assignment_feasible"] = o.allocation.assignment.feasible();
    j["sum_rate"] = o.realized_sum_rate;
    j["estimated_sum_rate"] = o.estimated_sum_rate;
    j["combinations_evaluated"] = o.allocation.combinations_evaluated;
    j["failed_candidates"] = o.allocation.failed_candidates;
    j["mu"] = o.allocation.mu;
    j["inner_iterations"] = o.allocation.inner_iterations;
    j["gamma"] = o.allocation.gamma;
    j["pool_size"] = o.allocation.pool_size;
    j["fallback"] = o.allocation.fallback;
    j["prediction_mse"] = o.prediction_mse;
    j["clamped"] = o.clamped;
    return j.dump();
}

EvaluationPlan default_plan(const ScenarioConfig &config)
{
    return {config.predictors, config.max_power_sweep_dbm, config.top_m_sweep, true};
}

std::vector<EvaluationRow> evaluate(const ScenarioConfig &config, const EvaluationPlan &plan,
                                    const AllocatorOptions &options)
{
    config.validate();
    const auto optimal_count = permutation_count(config.geometry().size(), static_cast<std::uint64_t>(config.users));
    const bool run_optimal = plan.include_optimal && optimal_count <= config.optimal_max_combinations;

    struct Accumulator
    {
        std::vector<double> realized;
        double estimated = 0.0;
        double combinations = 0.0;
    };
    // key: (predictor index, power index, m; -1 for optimal)
    std::map<std::tuple<std::size_t, std::size_t, int>, Accumulator> acc;

    std::vector<Predictor> predictors;
    for (const auto &name : plan.predictors)
        predictors.push_back(Predictor::from_name(name, config.antennas_vertical, config.antennas_horizontal));

    for (const auto seed : config.seeds)
    {
        const SeedSimulation sim = simulate_seed(config, seed);
        const int last = config.frames - 2;
        for (int t = last - config.eval_frames + 1; t <= last; ++t)
        {
            std::vector<const Episode *> eps;
            for (int k = 0; k < config.users; ++k)
                eps.push_back(&sim.episode(k, t));
            for (std::size_t pi = 0; pi < predictors.size(); ++pi)
            {
                const FrameEstimate estimate = estimate_frame(sim, eps, predictors[pi]);
                for (std::size_t wi = 0; wi < plan.max_power_dbm.size(); ++wi)
                {
                    auto record = [&](int key_m, const FrameOutcome &o)
                    {
                        auto &a = acc[{pi, wi, key_m}];
                        a.realized.push_back(o.realized_sum_rate);
                        a.estimated += o.estimated_sum_rate;
                        a.combinations += static_cast<double>(o.allocation.combinations_evaluated);
                    };
                    if (run_optimal)
                        record(-1, allocate_frame(sim, estimate, Policy::optimal, 0, plan.max_power_dbm[wi], options));
                    for (int m : plan.m_values)
                        record(m, allocate_frame(sim, estimate, Policy::topm, m, plan.max_power_dbm[wi], options));
                }
            }
        }
    }

    std::vector<EvaluationRow> rows;
    for (const auto &[key, a] : acc)
    {
        const auto &[pi, wi, key_m] = key;
        EvaluationRow row;
        row.policy = key_m < 0 ? Policy::optimal : Policy::topm;
        row.predictor = plan.predictors[pi];
        row.max_power_dbm = plan.max_power_dbm[wi];
        row.m = key_m < 0 ? 0 : key_m;
        row.samples = a.realized.size();
        const double n = static_cast<double>(row.samples);
        double mean = 0.0;
        for (double v : a.realized)
            mean += v;
        mean /= n;
        double ss = 0.0;
        for (double v : a.realized)
            ss += (v - mean) * (v - mean);
        row.mean_sum_rate = mean;
        row.std_error = row.samples > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        row.mean_estimated_sum_rate = a.estimated / n;
        row.mean_combinations = a.combinations / n;
        rows.push_back(row);
    }
    return rows;
}

std::string evaluation_csv(std::span<const EvaluationRow> rows)
{
    std::ostringstream os;
    os.precision(10);
    os << "# beamcast-evaluate v1\n"
       << "policy,predictor,max_power_dbm,m,samples,mean_sum_rate,std_error,mean_estimated_sum_rate,"
          "mean_combinations\n";
    for (const auto &r : rows)
        os << to_string(r.policy) << ',' << r.predictor << ',' << r.max_power_dbm << ',' << r.m << ',' << r.samples
           << ',' << r.mean_sum_rate << ',' << r.std_error << ',' << r.mean_estimated_sum_rate << ','
           << r.mean_combinations << '\n';
    return os.str();
}

} // namespace beamcast
