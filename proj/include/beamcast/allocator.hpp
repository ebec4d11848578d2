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

#ifndef BEAMCAST_ALLOCATOR_HPP
#define BEAMCAST_ALLOCATOR_HPP

#include "beamcast/config.hpp"
#include "beamcast/estimator.hpp"
#include "beamcast/sweep.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace beamcast
{

// Binary user x beam matrix u_{k,n}.
class AssignmentMatrix
{
public:
    AssignmentMatrix() = default;
    AssignmentMatrix(int users, int beams);

    static AssignmentMatrix from_beams(std::span<const int> beam_per_user, int beams);

    int users() const { return users_; }
    int beams() const { return beams_; }
    bool at(int user, int beam) const;
    void set(int user, int beam, bool value);

    int row_sum(int user) const;
    int column_sum(int beam) const;

    // Every row sums to 1 and every column to at most 1.
    bool feasible() const;

private:
    int users_ = 0;
    int beams_ = 0;
    std::vector<std::uint8_t> bits_;
};

struct KktOptions
{
    InterferenceModel interference = InterferenceModel::own_channel;
    double inner_tolerance = 1e-10;  // on max |dp|, relative to max(P_max, sum p)
    int max_inner_iterations = 1000;
    double budget_tolerance = 1e-8;  // on |sum p - P_max| / P_max
    int max_bisection_steps = 200;
    // Follow the fixed point with projected-gradient ascent on the sum-rate
    // itself, restarted from the uniform split and every single-user corner.
    bool refine = true;
    int max_ascent_iterations = 4000;
};

struct PowerAllocation
{
    std::vector<double> power;
    double mu = 0.0;
    int inner_iterations = 0; // summed over all bisection steps
    int bisection_steps = 0;
    bool budget_met = true;   // false if the bisection bracket collapsed first
    bool fixed_point_converged = true;
    bool refined = false;     // ascent found a better point than the fixed point
    int ascent_iterations = 0;
};

struct AllocatorOptions
{
    KktOptions kkt;
    unsigned threads = 0; // 0: BEAMCAST_THREADS if set, else hardware concurrency
};

struct AllocationResult
{
    std::vector<int> beams; // beam index per user
    AssignmentMatrix assignment;
    std::vector<double> power;
    double sum_rate = 0.0;
    std::uint64_t combinations_evaluated = 0;
    std::uint64_t failed_candidates = 0; // power solves that did not converge
    std::uint64_t best_combination = 0;
    double mu = 0.0;
    int inner_iterations = 0;
    int gamma = 0;          // users whose strongest beam is unique (top-m only)
    int pool_size = 0;      // beams the conflicted users chose from
    bool fallback = false;  // candidate pool had to be extended past top-m
};

unsigned default_thread_count();

// n! / (n - k)!; throws DomainError on k > n and on overflow.
std::uint64_t permutation_count(std::uint64_t n, std::uint64_t k);

double sinr(int user, std::span<const int> beams, std::span<const double> power, const ChannelGains &gains,
            double noise, InterferenceModel model = InterferenceModel::own_channel);

double sum_rate(std::span<const int> beams, std::span<const double> power, const ChannelGains &gains, double noise,
                InterferenceModel model = InterferenceModel::own_channel);

// Stationary point of p_k = max(1/mu - (I_k(p) + N0) / g_kk, 0) with mu set
// by bisection so that sum p = P_max. Inner updates are sequential (each p_k
// sees the latest powers of the others), damped by 0.5 once the update size
// stops shrinking.
//
// That map treats interference as fixed noise, so under strong coupling its
// fixed point can sit well below the best achievable sum-rate. With
// options.refine the result is the best of the fixed point and several
// ascent runs on the simplex sum p = P_max; a non-converging fixed point is
// then skipped instead of raising ConvergenceError.
PowerAllocation power_allocate_kkt(std::span<const int> beams, const ChannelGains &gains, double max_power,
                                   double noise, const KktOptions &options = {});

// Recomputes each p_k from (power, mu) with the update rule above.
std::vector<double> kkt_fixed_point_map(std::span<const int> beams, std::span<const double> power, double mu,
                                        const ChannelGains &gains, double noise,
                                        InterferenceModel model = InterferenceModel::own_channel);

// Exhaustive search over all ordered assignments of distinct beams.
AllocationResult enumerate_optimal(const ChannelGains &gains, double max_power, double noise,
                                   const AllocatorOptions &options = {});

// Descending power, ties by ascending beam index.
std::vector<int> rank_beams(const BeamImage &power);

// Users whose strongest beam is unique keep it; the remaining users enumerate
// distinct assignments over a shared pool of the top-m beams, merged
// round-robin from their rankings with reserved beams skipped.
AllocationResult topm_allocate(std::span<const std::vector<int>> rankings, const ChannelGains &gains, int m,
                               double max_power, double noise, const AllocatorOptions &options = {});
AllocationResult topm_allocate(std::span<const BeamImage> power_images, const ChannelGains &gains, int m,
                               double max_power, double noise, const AllocatorOptions &options = {});

// Probability that K - gamma uniform picks from m beams are all distinct:
// m! / (m^(K - gamma) (m - K + gamma)!). Zero when K - gamma > m.
double conflict_probability(int m, int users, int gamma);

// Monte-Carlo estimate of the same event.
double conflict_probability_mc(int m, int users, int gamma, std::uint64_t trials, std::uint64_t seed);

} // namespace beamcast

#endif
