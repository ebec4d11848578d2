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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace beamcast
{

AssignmentMatrix::AssignmentMatrix(int users, int beams) : users_(users), beams_(beams)
{
    if (users < 0 || beams < 0)
        throw DomainError("assignment dimensions must be nonnegative");
    bits_.assign(static_cast<std::size_t>(users) * static_cast<std::size_t>(beams), 0);
}

AssignmentMatrix AssignmentMatrix::from_beams(std::span<const int> beam_per_user, int beams)
{
    AssignmentMatrix out(static_cast<int>(beam_per_user.size()), beams);
    for (std::size_t k = 0; k < beam_per_user.size(); ++k)
        out.set(static_cast<int>(k), beam_per_user[k], true);
    return out;
}

bool AssignmentMatrix::at(int user, int beam) const
{
    return bits_[static_cast<std::size_t>(user) * static_cast<std::size_t>(beams_) + beam] != 0;
}

void AssignmentMatrix::set(int user, int beam, bool value)
{
    if (user < 0 || user >= users_ || beam < 0 || beam >= beams_)
        throw DomainError("assignment index out of range");
    bits_[static_cast<std::size_t>(user) * static_cast<std::size_t>(beams_) + beam] = value ? 1 : 0;
}

int AssignmentMatrix::row_sum(int user) const
{
    int s = 0;
    for (int n = 0; n < beams_; ++n)
        s += at(user, n);
    return s;
}

int AssignmentMatrix::column_sum(int beam) const
{
    int s = 0;
    for (int k = 0; k < users_; ++k)
        s += at(k, beam);
    return s;
}

bool AssignmentMatrix::feasible() const
{
    for (int k = 0; k < users_; ++k)
        if (row_sum(k) != 1)
            return false;
    for (int n = 0; n < beams_; ++n)
        if (column_sum(n) > 1)
            return false;
    return true;
}

unsigned default_thread_count()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("BEAMCAST_THREADS"))
    {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

std::uint64_t permutation_count(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        throw DomainError("cannot pick " + std::to_string(k) + " distinct items from " + std::to_string(n));
    std::uint64_t out = 1;
    for (std::uint64_t i = 0; i < k; ++i)
    {
        const std::uint64_t factor = n - i;
        if (out > std::numeric_limits<std::uint64_t>::max() / factor)
            throw DomainError("permutation count overflows 64 bits");
        out *= factor;
    }
    return out;
}

namespace
{

void check_beams(std::span<const int> beams, const ChannelGains &gains)
{
    if (static_cast<int>(beams.size()) != gains.users)
        throw DomainError("need one beam per user");
    for (int b : beams)
        if (b < 0 || b >= gains.beams)
            throw DomainError("beam index " + std::to_string(b) + " out of range");
}

// Interference coupling seen by `user` from `other`, per unit of other's power.
double coupling(int user, int other, std::span<const int> beams, const ChannelGains &gains, InterferenceModel model)
{
    return model == InterferenceModel::own_channel ? gains.at(user, beams[other]) : gains.at(other, beams[other]);
}

double interference(int user, std::span<const int> beams, std::span<const double> power, const ChannelGains &gains,
                    InterferenceModel model)
{
    double acc = 0.0;
    for (int j = 0; j < static_cast<int>(beams.size()); ++j)
        if (j != user)
            acc += power[j] * coupling(user, j, beams, gains, model);
    return acc;
}

struct InnerResult
{
    std::vector<double> power;
    int iterations = 0;
};

InnerResult solve_fixed_point(double level, std::span<const int> beams, const std::vector<int> &active,
                              const ChannelGains &gains, double max_power, double noise, const KktOptions &opt)
{
    const int users = gains.users;
    InnerResult out;
    out.power.assign(static_cast<std::size_t>(users), 0.0);
    for (int k : active)
        out.power[k] = max_power / users;

    std::vector<double> trace;
    double damping = 1.0;
    double previous = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int it = 1; it <= opt.max_inner_iterations; ++it)
    {
        double delta = 0.0;
        double total = 0.0;
        for (int k : active)
        {
            const double own = gains.at(k, beams[k]);
            const double target =
                std::max(level - (interference(k, beams, out.power, gains, opt.interference) + noise) / own, 0.0);
            const double next = out.power[k] + damping * (target - out.power[k]);
            delta = std::max(delta, std::abs(next - out.power[k]));
            out.power[k] = next;
            total += next;
        }
        trace.push_back(delta);
        out.iterations = it;
        if (!std::isfinite(delta))
            break;
        if (delta <= opt.inner_tolerance * std::max(max_power, total))
            return out;
        if (delta >= previous)
        {
            if (++rising >= 3 && damping == 1.0)
            {
                damping = 0.5;
                rising = 0;
            }
        }
        else
            rising = 0;
        previous = delta;
    }
    throw ConvergenceError("power fixed point did not converge at level " + std::to_string(level), std::move(trace));
}

double total(const std::vector<double> &p) { return std::accumulate(p.begin(), p.end(), 0.0); }

} // namespace

double sinr(int user, std::span<const int> beams, std::span<const double> power, const ChannelGains &gains,
            double noise, InterferenceModel model)
{
    check_beams(beams, gains);
    if (power.size() != beams.size())
        throw DomainError("need one power per user");
    if (user < 0 || user >= gains.users)
        throw DomainError("user index out of range");
    if (!(noise > 0.0))
        throw DomainError("noise power must be positive");
    const double signal = power[user] * gains.at(user, beams[user]);
    return signal / (interference(user, beams, power, gains, model) + noise);
}

double sum_rate(std::span<const int> beams, std::span<const double> power, const ChannelGains &gains, double noise,
                InterferenceModel model)
{
    double acc = 0.0;
    for (int k = 0; k < static_cast<int>(beams.size()); ++k)
        acc += std::log2(1.0 + sinr(k, beams, power, gains, noise, model));
    return acc;
}

std::vector<double> kkt_fixed_point_map(std::span<const int> beams, std::span<const double> power, double mu,
                                        const ChannelGains &gains, double noise, InterferenceModel model)
{
    check_beams(beams, gains);
    std::vector<double> out(beams.size(), 0.0);
    for (int k = 0; k < static_cast<int>(beams.size()); ++k)
    {
        const double own = gains.at(k, beams[k]);
        if (own > 0.0)
            out[k] = std::max(1.0 / mu - (interference(k, beams, power, gains, model) + noise) / own, 0.0);
    }
    return out;
}

namespace
{

PowerAllocation fixed_point_allocation(std::span<const int> beams, const std::vector<int> &active,
                                       const ChannelGains &gains, double max_power, double noise,
                                       const KktOptions &options)
{
    PowerAllocation out;
    out.power.assign(static_cast<std::size_t>(gains.users), 0.0);

    auto solve = [&](double mu)
    {
        auto r = solve_fixed_point(1.0 / mu, beams, active, gains, max_power, noise, options);
        out.inner_iterations += r.iterations;
        return std::move(r.power);
    };

    // Sum of powers is nonincreasing in mu: grow the upper end until under budget.
    double hi = 1.0;
    double lo = 1e-12;
    std::vector<double> p_hi = solve(hi);
    while (total(p_hi) >= max_power)
    {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300)
            throw DomainError("could not bracket the Lagrange multiplier");
        p_hi = solve(hi);
    }

    while (out.bisection_steps < options.max_bisection_steps)
    {
        ++out.bisection_steps;
        const double mid = hi / lo > 4.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        std::vector<double> p = solve(mid);
        const double s = total(p);
        // Accept only from below so that sum p never exceeds the budget.
        if (s <= max_power && max_power - s <= options.budget_tolerance * max_power)
        {
            out.power = std::move(p);
            out.mu = mid;
            return out;
        }
        if (s > max_power)
            lo = mid;
        else
        {
            hi = mid;
            p_hi = std::move(p);
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
            break;
    }
    // Bracket collapsed on a jump in sum p(mu); keep the feasible side.
    out.power = std::move(p_hi);
    out.mu = hi;
    out.budget_met = false;
    return out;
}

// Sum-rate on the simplex x >= 0, sum x = 1 over the active users, with
// x = p / P_max and gains in units of N0 / P_max so the problem is well scaled.
class SimplexProblem
{
public:
    SimplexProblem(std::span<const int> beams, const std::vector<int> &active, const ChannelGains &gains,
                   double max_power, double noise, InterferenceModel model)
        : n_(active.size()), a_(n_ * n_)
    {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
            {
                const double g = i == j ? gains.at(active[i], beams[active[i]])
                                        : coupling(active[i], active[j], beams, gains, model);
                a_[i * n_ + j] = g * max_power / noise;
            }
    }

    std::size_t size() const { return n_; }

    // In nats.
    double value(const std::vector<double> &x) const
    {
        double r = 0.0;
        for (std::size_t k = 0; k < n_; ++k)
            r += std::log1p(x[k] * a_[k * n_ + k] / denominator(x, k));
        return r;
    }

    std::vector<double> gradient(const std::vector<double> &x) const
    {
        std::vector<double> d(n_), s(n_);
        for (std::size_t k = 0; k < n_; ++k)
        {
            d[k] = denominator(x, k);
            s[k] = x[k] * a_[k * n_ + k];
        }
        std::vector<double> g(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i)
        {
            g[i] = a_[i * n_ + i] / (d[i] + s[i]);
            for (std::size_t k = 0; k < n_; ++k)
                if (k != i)
                    g[i] -= s[k] * a_[k * n_ + i] / (d[k] * (d[k] + s[k]));
        }
        return g;
    }

private:
    double denominator(const std::vector<double> &x, std::size_t k) const
    {
        double acc = 1.0;
        for (std::size_t j = 0; j < n_; ++j)
            if (j != k)
                acc += x[j] * a_[k * n_ + j];
        return acc;
    }

    std::size_t n_;
    std::vector<double> a_;
};

// Euclidean projection onto {x >= 0, sum x = 1}.
std::vector<double> project_to_simplex(std::vector<double> v)
{
    std::vector<double> u(v);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, theta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
    {
        cumulative += u[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0)
            theta = t;
    }
    for (auto &x : v)
        x = std::max(x - theta, 0.0);
    return v;
}

struct AscentResult
{
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

// Projected gradient ascent with Armijo backtracking; monotone in the objective.
AscentResult ascend(const SimplexProblem &problem, std::vector<double> x, int max_iterations)
{
    AscentResult out;
    double f = problem.value(x);
    double step = 1.0;
    for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations)
    {
        const auto g = problem.gradient(x);
        bool moved = false;
        while (step > 1e-14)
        {
            std::vector<double> trial(x);
            for (std::size_t i = 0; i < x.size(); ++i)
                trial[i] += step * g[i];
            trial = project_to_simplex(std::move(trial));
            double slope = 0.0, change = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                slope += g[i] * (trial[i] - x[i]);
                change = std::max(change, std::abs(trial[i] - x[i]));
            }
            if (change <= 1e-13)
                break;
            const double ft = problem.value(trial);
            if (ft >= f + 1e-4 * slope)
            {
                const bool settled = ft - f <= 1e-15 * std::max(1.0, std::abs(f));
                x = std::move(trial);
                f = ft;
                moved = !settled;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved)
            break;
    }
    out.x = std::move(x);
    out.value = f;
    return out;
}

} // namespace

PowerAllocation power_allocate_kkt(std::span<const int> beams, const ChannelGains &gains, double max_power,
                                   double noise, const KktOptions &options)
{
    check_beams(beams, gains);
    if (!(max_power > 0.0))
        throw DomainError("P_max must be positive");
    if (!(noise > 0.0))
        throw DomainError("noise power must be positive");

    std::vector<int> active;
    for (int k = 0; k < gains.users; ++k)
        if (gains.at(k, beams[k]) > 0.0)
            active.push_back(k);
    if (active.empty())
        throw DomainError("no user has a positive gain on its beam");

    if (active.size() == 1)
    {
        PowerAllocation out;
        out.power.assign(static_cast<std::size_t>(gains.users), 0.0);
        const int k = active.front();
        out.power[k] = max_power;
        out.mu = 1.0 / (max_power + noise / gains.at(k, beams[k]));
        return out;
    }
    if (!options.refine)
        return fixed_point_allocation(beams, active, gains, max_power, noise, options);

    PowerAllocation out;
    std::vector<std::vector<double>> starts;
    try
    {
        out = fixed_point_allocation(beams, active, gains, max_power, noise, options);
        std::vector<double> x;
        for (int k : active)
            x.push_back(out.power[k] / max_power);
        starts.push_back(project_to_simplex(std::move(x)));
    }
    catch (const ConvergenceError &e)
    {
        out = PowerAllocation{};
        out.power.assign(static_cast<std::size_t>(gains.users), 0.0);
        out.fixed_point_converged = false;
        out.inner_iterations = static_cast<int>(e.trace().size());
    }
    const std::size_t n = active.size();
    starts.emplace_back(n, 1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
    {
        starts.emplace_back(n, 0.0);
        starts.back()[i] = 1.0;
    }

    const SimplexProblem problem(beams, active, gains, max_power, noise, options.interference);
    const double baseline = out.fixed_point_converged ? problem.value(starts.front())
                                                      : -std::numeric_limits<double>::infinity();
    AscentResult best;
    best.value = -std::numeric_limits<double>::infinity();
    for (auto &start : starts)
    {
        auto r = ascend(problem, std::move(start), options.max_ascent_iterations);
        out.ascent_iterations += r.iterations;
        if (r.value > best.value)
            best = std::move(r);
    }
    // Keep the fixed point unless ascent gained something measurable.
    if (best.value > baseline + 1e-12)
    {
        out.refined = true;
        std::fill(out.power.begin(), out.power.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            out.power[active[i]] = best.x[i] * max_power;
        // Multiplier of the budget: d(rate)/dp averaged over the support, in nats per watt.
        const auto g = problem.gradient(best.x);
        double acc = 0.0;
        int support = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (best.x[i] > 0.0)
            {
                acc += g[i];
                ++support;
            }
        out.mu = acc / support / max_power;
        out.budget_met = true;
    }
    return out;
}

namespace
{

struct Candidate
{
    double rate = -1.0;
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
    std::vector<int> beams;
    PowerAllocation power;
    bool found = false;

    bool better_than(const Candidate &other) const
    {
        if (!found)
            return false;
        if (!other.found)
            return true;
        return rate > other.rate || (rate == other.rate && index < other.index);
    }
};

// Enumerates ordered picks of distinct pool entries for `free_users` (all other
// users keep `base` beams), in lexicographic order of pool positions.
struct Search
{
    const ChannelGains &gains;
    double max_power;
    double noise;
    const AllocatorOptions &options;
    std::vector<int> base;
    std::vector<int> free_users;
    std::vector<int> pool;

    AllocationResult run() const
    {
        const std::size_t picks = free_users.size();
        const std::uint64_t total_count = permutation_count(pool.size(), picks);

        AllocationResult result;
        result.combinations_evaluated = total_count;
        result.pool_size = static_cast<int>(pool.size());

        Candidate best;
        std::uint64_t failed = 0;
        if (picks == 0)
        {
            evaluate(base, 0, best, failed);
        }
        else
        {
            const std::uint64_t per_chunk = permutation_count(pool.size() - 1, picks - 1);
            const unsigned threads =
                std::max(1u, std::min<unsigned>(options.threads ? options.threads : default_thread_count(),
                                                static_cast<unsigned>(pool.size())));
            std::vector<Candidate> bests(threads);
            std::vector<std::uint64_t> fails(threads, 0);
            std::atomic<std::size_t> next_chunk{0};
            auto worker = [&](unsigned tid)
            {
                std::vector<int> beams = base;
                std::vector<char> used(pool.size(), 0);
                for (std::size_t chunk = next_chunk++; chunk < pool.size(); chunk = next_chunk++)
                {
                    std::uint64_t index = chunk * per_chunk;
                    used[chunk] = 1;
                    beams[free_users[0]] = pool[chunk];
                    descend(1, beams, used, index, bests[tid], fails[tid]);
                    used[chunk] = 0;
                }
            };
            if (threads == 1)
                worker(0);
            else
            {
                std::vector<std::thread> pool_threads;
                for (unsigned t = 0; t < threads; ++t)
                    pool_threads.emplace_back(worker, t);
                for (auto &t : pool_threads)
                    t.join();
            }
            for (unsigned t = 0; t < threads; ++t)
            {
                if (bests[t].better_than(best))
                    best = std::move(bests[t]);
                failed += fails[t];
            }
        }

        result.failed_candidates = failed;
        if (!best.found)
            throw ConvergenceError("no candidate assignment produced a converged power allocation", {});
        result.beams = best.beams;
        result.assignment = AssignmentMatrix::from_beams(best.beams, gains.beams);
        result.power = best.power.power;
        result.sum_rate = best.rate;
        result.best_combination = best.index;
        result.mu = best.power.mu;
        result.inner_iterations = best.power.inner_iterations;
        return result;
    }

    void descend(std::size_t depth, std::vector<int> &beams, std::vector<char> &used, std::uint64_t &index,
                 Candidate &best, std::uint64_t &failed) const
    {
        if (depth == free_users.size())
        {
            evaluate(beams, index++, best, failed);
            return;
        }
        for (std::size_t i = 0; i < pool.size(); ++i)
        {
            if (used[i])
                continue;
            used[i] = 1;
            beams[free_users[depth]] = pool[i];
            descend(depth + 1, beams, used, index, best, failed);
            used[i] = 0;
        }
    }

    void evaluate(const std::vector<int> &beams, std::uint64_t index, Candidate &best, std::uint64_t &failed) const
    {
        PowerAllocation power;
        try
        {
            power = power_allocate_kkt(beams, gains, max_power, noise, options.kkt);
        }
        catch (const ConvergenceError &)
        {
            ++failed;
            return;
        }
        catch (const DomainError &)
        {
            // every user in this candidate has zero gain on its beam
            ++failed;
            return;
        }
        const double rate = sum_rate(beams, power.power, gains, noise, options.kkt.interference);
        if (!best.found || rate > best.rate || (rate == best.rate && index < best.index))
        {
            best.found = true;
            best.rate = rate;
            best.index = index;
            best.beams = beams;
            best.power = std::move(power);
        }
    }
};

void check_gains(const ChannelGains &gains)
{
    if (gains.users < 1 || gains.beams < 1 ||
        gains.values.size() != static_cast<std::size_t>(gains.users) * static_cast<std::size_t>(gains.beams))
        throw DomainError("gain matrix is empty or inconsistent");
    for (double g : gains.values)
        if (!(g >= 0.0) || !std::isfinite(g))
            throw DomainError("gains must be finite and nonnegative");
}

} // namespace

AllocationResult enumerate_optimal(const ChannelGains &gains, double max_power, double noise,
                                   const AllocatorOptions &options)
{
    check_gains(gains);
    if (gains.users > gains.beams)
        throw DomainError("more users (" + std::to_string(gains.users) + ") than beams (" +
                          std::to_string(gains.beams) + ")");
    Search search{gains, max_power, noise, options, std::vector<int>(gains.users, -1), {}, {}};
    search.free_users.resize(static_cast<std::size_t>(gains.users));
    std::iota(search.free_users.begin(), search.free_users.end(), 0);
    search.pool.resize(static_cast<std::size_t>(gains.beams));
    std::iota(search.pool.begin(), search.pool.end(), 0);
    auto result = search.run();
    result.gamma = 0;
    return result;
}

std::vector<int> rank_beams(const BeamImage &power)
{
    for (double v : power.values)
        if (std::isnan(v))
            throw DomainError("cannot rank a power image containing NaN");
    std::vector<int> order(power.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return power.values[a] > power.values[b]; });
    return order;
}

AllocationResult topm_allocate(std::span<const std::vector<int>> rankings, const ChannelGains &gains, int m,
                               double max_power, double noise, const AllocatorOptions &options)
{
    check_gains(gains);
    if (m < 1)
        throw DomainError("m must be >= 1");
    if (static_cast<int>(rankings.size()) != gains.users)
        throw DomainError("need one beam ranking per user");
    if (gains.users > gains.beams)
        throw DomainError("more users than beams");
    for (const auto &r : rankings)
    {
        if (static_cast<int>(r.size()) != gains.beams)
            throw DomainError("each ranking must list every beam");
        for (int b : r)
            if (b < 0 || b >= gains.beams)
                throw DomainError("ranking holds an out-of-range beam");
    }

    const int users = gains.users;
    std::vector<int> strongest(static_cast<std::size_t>(users));
    for (int k = 0; k < users; ++k)
        strongest[k] = rankings[k].front();

    Search search{gains, max_power, noise, options, std::vector<int>(users, -1), {}, {}};
    std::vector<char> reserved(static_cast<std::size_t>(gains.beams), 0);
    int gamma = 0;
    for (int k = 0; k < users; ++k)
    {
        const auto claims = std::count(strongest.begin(), strongest.end(), strongest[k]);
        if (claims == 1)
        {
            ++gamma;
            search.base[k] = strongest[k];
            reserved[strongest[k]] = 1;
        }
        else
            search.free_users.push_back(k);
    }

    const std::size_t need = search.free_users.size();
    const std::size_t available = static_cast<std::size_t>(gains.beams - gamma);
    const std::size_t target = std::min<std::size_t>(static_cast<std::size_t>(m), available);
    bool fallback = false;
    if (need > 0)
    {
        // Round-robin over rank depth so every conflicted user contributes its
        // best remaining beams to the shared pool.
        std::vector<char> in_pool(static_cast<std::size_t>(gains.beams), 0);
        for (int depth = 0; depth < gains.beams; ++depth)
        {
            for (int k : search.free_users)
            {
                const int b = rankings[k][depth];
                if (reserved[b] || in_pool[b])
                    continue;
                if (search.pool.size() >= target && search.pool.size() >= need)
                    break;
                if (search.pool.size() >= target)
                    fallback = true;
                in_pool[b] = 1;
                search.pool.push_back(b);
            }
            if (search.pool.size() >= target && search.pool.size() >= need)
                break;
        }
    }

    auto result = search.run();
    result.gamma = gamma;
    result.fallback = fallback;
    return result;
}

AllocationResult topm_allocate(std::span<const BeamImage> power_images, const ChannelGains &gains, int m,
                               double max_power, double noise, const AllocatorOptions &options)
{
    std::vector<std::vector<int>> rankings;
    rankings.reserve(power_images.size());
    for (const auto &img : power_images)
        rankings.push_back(rank_beams(img));
    return topm_allocate(rankings, gains, m, max_power, noise, options);
}

double conflict_probability(int m, int users, int gamma)
{
    const int picks = users - gamma;
    if (m < 1 || picks < 0 || gamma < 0)
        throw DomainError("conflict probability needs m >= 1 and 0 <= gamma <= K");
    if (picks > m)
        return 0.0;
    double p = 1.0;
    for (int i = 0; i < picks; ++i)
        p *= static_cast<double>(m - i) / m;
    return p;
}

double conflict_probability_mc(int m, int users, int gamma, std::uint64_t trials, std::uint64_t seed)
{
    const int picks = users - gamma;
    if (m < 1 || picks < 0 || gamma < 0)
        throw DomainError("conflict probability needs m >= 1 and 0 <= gamma <= K");
    if (trials < 1)
        throw DomainError("need at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, m - 1);
    std::vector<std::uint64_t> seen(static_cast<std::size_t>(m), 0);
    std::uint64_t distinct = 0;
    for (std::uint64_t t = 1; t <= trials; ++t)
    {
        bool ok = true;
        for (int i = 0; i < picks; ++i)
        {
            const int b = pick(rng);
            if (seen[b] == t)
                ok = false; // keep drawing so the stream layout is independent of outcomes
            seen[b] = t;
        }
        distinct += ok;
    }
    return static_cast<double>(distinct) / static_cast<double>(trials);
}

} // namespace beamcast
