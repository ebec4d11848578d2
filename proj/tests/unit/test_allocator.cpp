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

#include "beamcast/allocator.hpp"
#include "beamcast/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace beamcast;

namespace
{

ChannelGains random_gains(std::mt19937_64 &rng, int users, int beams, double scale = 1.0)
{
    std::exponential_distribution<double> e(1.0);
    ChannelGains g(users, beams);
    for (auto &v : g.values)
        v = scale * e(rng);
    return g;
}

double total(const std::vector<double> &p) { return std::accumulate(p.begin(), p.end(), 0.0); }

} // namespace

TEST_CASE("permutation counts")
{
    CHECK(permutation_count(64, 4) == 15'249'024ULL);
    CHECK(static_cast<long double>(permutation_count(64, 4)) == oracle::falling_factorial(64, 4));
    CHECK(permutation_count(16, 3) == 3360);
    CHECK(permutation_count(5, 0) == 1);
    CHECK(permutation_count(4, 4) == 24);
    CHECK_THROWS_AS(permutation_count(3, 4), DomainError);
    CHECK_THROWS_AS(permutation_count(100, 40), DomainError);
}

TEST_CASE("sinr and sum rate")
{
    ChannelGains one(1, 2);
    one.at(0, 1) = 3.0;
    const std::vector<int> b1{1};
    const std::vector<double> p1{2.0};
    CHECK(sinr(0, b1, p1, one, 0.5) == doctest::Approx(12.0));

    ChannelGains g(2, 2);
    g.at(0, 0) = 1.0;
    g.at(0, 1) = 0.5;
    g.at(1, 1) = 1.0;
    g.at(1, 0) = 0.5;
    const std::vector<int> beams{0, 1};
    const std::vector<double> p{1.0, 1.0};
    CHECK(sinr(0, beams, p, g, 1.0) == doctest::Approx(1.0 / 1.5));
    CHECK(sinr(1, beams, p, g, 1.0) == doctest::Approx(1.0 / 1.5));
    const double G[2][2] = {{1.0, 0.5}, {0.5, 1.0}};
    CHECK(sum_rate(beams, p, g, 1.0) == doctest::Approx(oracle::rate2(G, 1.0, 1.0, 1.0)));
    CHECK(sum_rate(beams, p, g, 1.0) == doctest::Approx(2.0 * std::log2(1.0 + 2.0 / 3.0)));

    ChannelGains unit(1, 1, 1.0);
    const std::vector<int> b0{0};
    const std::vector<double> one_w{1.0};
    CHECK(sum_rate(b0, one_w, unit, 1.0) == doctest::Approx(1.0));
    const std::vector<double> zeros{0.0, 0.0};
    CHECK(sum_rate(beams, zeros, g, 1.0) == 0.0);
    CHECK_THROWS_AS(sum_rate(beams, p, g, 0.0), DomainError);
}

TEST_CASE("printed interference form uses the other user's own gain")
{
    ChannelGains g(2, 2);
    g.at(0, 0) = 1.0;
    g.at(0, 1) = 0.1;
    g.at(1, 0) = 0.2;
    g.at(1, 1) = 2.0;
    const std::vector<int> beams{0, 1};
    const std::vector<double> p{1.0, 1.0};
    CHECK(sinr(0, beams, p, g, 1.0, InterferenceModel::own_channel) == doctest::Approx(1.0 / 1.1));
    CHECK(sinr(0, beams, p, g, 1.0, InterferenceModel::printed) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("KKT power allocation: closed-form cases")
{
    ChannelGains g(1, 3);
    g.at(0, 2) = 0.7;
    const std::vector<int> b{2};
    const auto single = power_allocate_kkt(b, g, 0.25, 1e-3);
    CHECK(single.power[0] == 0.25);

    ChannelGains sym(2, 2);
    sym.at(0, 0) = 2.0;
    sym.at(1, 1) = 2.0;
    const std::vector<int> beams{0, 1};
    const auto r = power_allocate_kkt(beams, sym, 1.0, 0.1);
    CHECK(std::abs(r.power[0] - 0.5) <= 1e-8);
    CHECK(std::abs(r.power[1] - 0.5) <= 1e-8);
    CHECK(r.budget_met);

    // A user with zero gain on its beam gets nothing.
    ChannelGains dead(2, 2);
    dead.at(0, 0) = 1.0;
    const auto d = power_allocate_kkt(beams, dead, 1.0, 0.1);
    CHECK(d.power[1] == 0.0);
    CHECK(d.power[0] == 1.0);

    CHECK_THROWS_AS(power_allocate_kkt(beams, ChannelGains(2, 2), 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(power_allocate_kkt(beams, sym, 0.0, 0.1), DomainError);
}

TEST_CASE("fixed-point-only KKT output is a fixed point and respects the budget")
{
    KktOptions fixed_point_only;
    fixed_point_only.refine = false;
    std::mt19937_64 rng(21);
    int converged = 0, diverged = 0;
    for (int trial = 0; trial < 200; ++trial)
    {
        const int users = 2 + trial % 3;
        const auto g = random_gains(rng, users, 6);
        std::vector<int> beams(static_cast<std::size_t>(users));
        std::iota(beams.begin(), beams.end(), 0);
        const double pmax = 0.5 + trial % 7;
        const double noise = 0.05 + 0.01 * (trial % 5);
        PowerAllocation r;
        try
        {
            r = power_allocate_kkt(beams, g, pmax, noise, fixed_point_only);
        }
        catch (const ConvergenceError &e)
        {
            // The sequential map can cycle under strong coupling; it must say so.
            CHECK(!e.trace().empty());
            ++diverged;
            continue;
        }
        ++converged;
        CHECK(total(r.power) <= pmax * (1.0 + 1e-9));
        for (double x : r.power)
            CHECK(x >= 0.0);
        if (r.budget_met)
            CHECK(std::abs(total(r.power) - pmax) <= 1e-8 * pmax);
        const auto again = kkt_fixed_point_map(beams, r.power, r.mu, g, noise);
        for (std::size_t k = 0; k < again.size(); ++k)
            CHECK(std::abs(again[k] - r.power[k]) <= 1e-8 * pmax);
    }
    MESSAGE("fixed point converged on " << converged << " of " << converged + diverged);
    CHECK(converged >= 100);
}

TEST_CASE("refined KKT output is stationary for the sum rate")
{
    std::mt19937_64 rng(22);
    KktOptions fixed_point_only;
    fixed_point_only.refine = false;
    for (int trial = 0; trial < 200; ++trial)
    {
        const int users = 2 + trial % 3;
        const auto g = random_gains(rng, users, 6);
        std::vector<int> beams(static_cast<std::size_t>(users));
        std::iota(beams.begin(), beams.end(), 0);
        const double pmax = 0.5 + trial % 7;
        const double noise = 0.05 + 0.01 * (trial % 5);
        const auto r = power_allocate_kkt(beams, g, pmax, noise);
        CHECK(std::abs(total(r.power) - pmax) <= 1e-8 * pmax);
        const double rate = sum_rate(beams, r.power, g, noise);

        // Moving a small amount of power between any two users cannot help.
        for (int from = 0; from < users; ++from)
            for (int to = 0; to < users; ++to)
            {
                if (from == to || r.power[from] <= 0.0)
                    continue;
                auto q = r.power;
                const double delta = std::min(q[from], 1e-4 * pmax);
                q[from] -= delta;
                q[to] += delta;
                CHECK(sum_rate(beams, q, g, noise) <= rate + 1e-9);
            }

        try
        {
            const auto f = power_allocate_kkt(beams, g, pmax, noise, fixed_point_only);
            CHECK(rate >= sum_rate(beams, f.power, g, noise) - 1e-12);
        }
        catch (const ConvergenceError &)
        {
            CHECK(!r.fixed_point_converged);
        }
    }
}

TEST_CASE("KKT converges where simultaneous updates would oscillate")
{
    // Cross gains exceed own gains, so the Jacobi map has gain > 1.
    ChannelGains g(2, 2);
    g.at(0, 0) = 1.0;
    g.at(0, 1) = 1.5;
    g.at(1, 0) = 1.4;
    g.at(1, 1) = 1.0;
    const std::vector<int> beams{0, 1};
    KktOptions fixed_point_only;
    fixed_point_only.refine = false;
    const auto r = power_allocate_kkt(beams, g, 1.0, 0.01, fixed_point_only);
    CHECK(total(r.power) <= 1.0 + 1e-9);
    const auto again = kkt_fixed_point_map(beams, r.power, r.mu, g, 0.01);
    for (std::size_t k = 0; k < 2; ++k)
        CHECK(std::abs(again[k] - r.power[k]) <= 1e-8);
}

TEST_CASE("KKT sum rate is close to the grid optimum on two-user instances")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial)
    {
        const auto g = random_gains(rng, 2, 2);
        const std::vector<int> beams{0, 1};
        const double G[2][2] = {{g.at(0, 0), g.at(0, 1)}, {g.at(1, 0), g.at(1, 1)}};
        const auto grid = oracle::grid_power2(G, 1.0, 0.1, 400);
        const auto r = power_allocate_kkt(beams, g, 1.0, 0.1);
        CHECK(sum_rate(beams, r.power, g, 0.1) >= grid.rate - 0.01);
    }
}

TEST_CASE("assignment matrix")
{
    const std::vector<int> beams{2, 0, 3};
    const auto a = AssignmentMatrix::from_beams(beams, 4);
    CHECK(a.feasible());
    CHECK(a.row_sum(1) == 1);
    CHECK(a.column_sum(1) == 0);
    CHECK(a.at(0, 2));
    const std::vector<int> clash{1, 1};
    CHECK(!AssignmentMatrix::from_beams(clash, 4).feasible());
    AssignmentMatrix empty_row(2, 3);
    empty_row.set(0, 1, true);
    CHECK(!empty_row.feasible());
    CHECK_THROWS_AS(empty_row.set(2, 0, true), DomainError);
}

TEST_CASE("exhaustive search")
{
    ChannelGains g(1, 4);
    g.at(0, 0) = 0.1;
    g.at(0, 1) = 0.9;
    g.at(0, 2) = 0.9;
    g.at(0, 3) = 0.4;
    const auto r = enumerate_optimal(g, 1.0, 0.1);
    CHECK(r.combinations_evaluated == 4);
    CHECK(r.beams == std::vector<int>{1}); // tie broken by the lower index
    CHECK(r.best_combination == 1);
    CHECK(r.assignment.feasible());

    CHECK_THROWS_AS(enumerate_optimal(ChannelGains(3, 2, 1.0), 1.0, 0.1), DomainError);

    std::mt19937_64 rng(8);
    const auto big = random_gains(rng, 3, 6);
    AllocatorOptions one, three;
    one.threads = 1;
    three.threads = 3;
    const auto a = enumerate_optimal(big, 1.0, 0.2, one);
    const auto b = enumerate_optimal(big, 1.0, 0.2, three);
    CHECK(a.combinations_evaluated == 120);
    CHECK(a.beams == b.beams);
    CHECK(a.power == b.power);
    CHECK(a.sum_rate == b.sum_rate);
    CHECK(a.best_combination == b.best_combination);
    CHECK(a.failed_candidates == 0);

    // Every candidate is evaluated: the best is at least as good as any fixed pick.
    for (int x = 0; x < 6; ++x)
        for (int y = 0; y < 6; ++y)
            for (int z = 0; z < 6; ++z)
            {
                if (x == y || y == z || x == z)
                    continue;
                const std::vector<int> beams{x, y, z};
                const auto p = power_allocate_kkt(beams, big, 1.0, 0.2);
                CHECK(sum_rate(beams, p.power, big, 0.2) <= a.sum_rate);
            }
}

TEST_CASE("beam ranking")
{
    BeamImage impulse(2, 3, ImageKind::power);
    impulse.values[4] = 1.0;
    CHECK(rank_beams(impulse).front() == 4);
    const BeamImage flat(2, 3, ImageKind::power, 1.0);
    CHECK(rank_beams(flat) == std::vector<int>{0, 1, 2, 3, 4, 5});

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> coarse(0, 5);
    BeamImage img(8, 8, ImageKind::power);
    for (auto &v : img.values)
        v = coarse(rng);
    std::vector<std::pair<double, int>> ref;
    for (int i = 0; i < 64; ++i)
        ref.emplace_back(-img.values[static_cast<std::size_t>(i)], i);
    std::sort(ref.begin(), ref.end());
    const auto order = rank_beams(img);
    for (int i = 0; i < 64; ++i)
        CHECK(order[static_cast<std::size_t>(i)] == ref[static_cast<std::size_t>(i)].second);

    img.values[3] = std::nan("");
    CHECK_THROWS_AS(rank_beams(img), DomainError);
}

TEST_CASE("top-m allocation")
{
    std::mt19937_64 rng(10);
    const auto g = random_gains(rng, 3, 6);

    // Distinct strongest beams: every user keeps its own.
    const std::vector<std::vector<int>> distinct{{0, 1, 2, 3, 4, 5}, {1, 0, 2, 3, 4, 5}, {2, 0, 1, 3, 4, 5}};
    const auto a = topm_allocate(distinct, g, 3, 1.0, 0.1);
    CHECK(a.gamma == 3);
    CHECK(a.beams == std::vector<int>{0, 1, 2});
    CHECK(a.combinations_evaluated == 1);
    CHECK(!a.fallback);

    // Two users share beam 0, m = 2: two candidates.
    const auto g2 = random_gains(rng, 2, 4);
    const std::vector<std::vector<int>> shared{{0, 1, 2, 3}, {0, 2, 1, 3}};
    const auto b = topm_allocate(shared, g2, 2, 1.0, 0.1);
    CHECK(b.gamma == 0);
    CHECK(b.pool_size == 2);
    CHECK(b.combinations_evaluated == 2);
    CHECK(b.assignment.feasible());

    // One unique user plus two conflicted ones over m = 4.
    const std::vector<std::vector<int>> mixed{{5, 0, 1, 2, 3, 4}, {0, 5, 1, 2, 3, 4}, {0, 1, 5, 2, 3, 4}};
    const auto c = topm_allocate(mixed, g, 4, 1.0, 0.1);
    CHECK(c.gamma == 1);
    CHECK(c.beams[0] == 5);
    CHECK(c.pool_size == 4);
    CHECK(c.combinations_evaluated == static_cast<std::uint64_t>(oracle::falling_factorial(4, 2)));
    CHECK(c.beams[1] != 5);
    CHECK(c.beams[2] != 5);
    CHECK(c.assignment.feasible());

    // Three users on one beam with m = 2 cannot be served: the pool grows.
    const std::vector<std::vector<int>> crowded{{0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}, {0, 1, 2, 3, 4, 5}};
    const auto d = topm_allocate(crowded, g, 2, 1.0, 0.1);
    CHECK(d.fallback);
    CHECK(d.pool_size == 3);
    CHECK(d.combinations_evaluated == 6);
    CHECK(d.assignment.feasible());

    CHECK(topm_allocate(crowded, g, 6, 1.0, 0.1).sum_rate == enumerate_optimal(g, 1.0, 0.1).sum_rate);
    CHECK_THROWS_AS(topm_allocate(crowded, g, 0, 1.0, 0.1), DomainError);
}

TEST_CASE("top-m never beats the exhaustive search")
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; ++trial)
    {
        const auto g = random_gains(rng, 3, 8);
        std::vector<BeamImage> images;
        for (int k = 0; k < 3; ++k)
        {
            BeamImage img(2, 4, ImageKind::power);
            for (int n = 0; n < 8; ++n)
                img.values[static_cast<std::size_t>(n)] = g.at(k, n);
            images.push_back(img);
        }
        const double best = enumerate_optimal(g, 1.0, 0.1).sum_rate;
        for (int m : {1, 2, 4, 8})
            CHECK(topm_allocate(images, g, m, 1.0, 0.1).sum_rate <= best);
    }
}

TEST_CASE("conflict probability")
{
    CHECK(conflict_probability(5, 3, 3) == 1.0);
    for (int m = 1; m <= 9; ++m)
        CHECK(conflict_probability(m, 4, 3) == doctest::Approx(1.0));
    CHECK(conflict_probability(4, 2, 0) == doctest::Approx(0.75));
    CHECK(conflict_probability(3, 3, 0) == doctest::Approx(2.0 / 9.0));
    CHECK(conflict_probability(3, 4, 0) == 0.0);
    for (int m = 2; m <= 10; ++m)
        for (int k = 0; k <= m; ++k)
            CHECK(conflict_probability(m, k, 0) == doctest::Approx(oracle::distinct_pick_probability(m, k)));

    CHECK(conflict_probability_mc(7, 1, 0, 1000, 3) == 1.0);
    CHECK(conflict_probability_mc(3, 4, 0, 1000, 3) == 0.0);
    const double mc = conflict_probability_mc(4, 2, 0, 100000, 17);
    CHECK(std::abs(mc - 0.75) <= 3.0 * std::sqrt(0.75 * 0.25 / 100000));
    CHECK(conflict_probability_mc(4, 2, 0, 5000, 1) == conflict_probability_mc(4, 2, 0, 5000, 1));
}
