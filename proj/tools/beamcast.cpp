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

// beamcast command-line runner.
//
//   beamcast generate    --config c.cfg --out episodes.bin
//   beamcast allocate    --config c.cfg --policy topm --predictor bicubic --out frames.jsonl
//   beamcast evaluate    --config c.cfg --out sweep.csv
//   beamcast conflict    --m-min 2 --m-max 10 --users 4 --out conflict.csv
//   beamcast plot-script --csv sweep.csv --out sweep.gp
//
// Outputs are written to a temporary sibling and renamed into place only on
// success. Wall-clock data (start time, elapsed seconds) goes to <out>.log so
// the outputs themselves are reproducible byte for byte.

#include "beamcast/allocator.hpp"
#include "beamcast/config.hpp"
#include "beamcast/errors.hpp"
#include "beamcast/interchange.hpp"
#include "beamcast/pipeline.hpp"
#include "beamcast/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace beamcast;

namespace
{

constexpr int kExitDomain = 2;
constexpr int kExitFailure = 1;

// Writes to "<path>.partial" and renames on commit(); the destructor removes
// anything left uncommitted.
class AtomicFile
{
public:
    explicit AtomicFile(fs::path path) : path_(std::move(path)), temp_(path_.string() + ".partial")
    {
        if (path_.has_parent_path())
            fs::create_directories(path_.parent_path());
    }
    AtomicFile(const AtomicFile &) = delete;
    AtomicFile &operator=(const AtomicFile &) = delete;
    ~AtomicFile()
    {
        if (!committed_)
        {
            std::error_code ec;
            fs::remove(temp_, ec);
        }
    }

    const fs::path &temp() const { return temp_; }
    const fs::path &path() const { return path_; }

    void write_text(const std::string &text)
    {
        std::ofstream out(temp_, std::ios::binary | std::ios::trunc);
        out << text;
        out.flush();
        if (!out)
            throw std::runtime_error("cannot write " + temp_.string());
    }

    void commit()
    {
        fs::rename(temp_, path_);
        committed_ = true;
    }

private:
    fs::path path_;
    fs::path temp_;
    bool committed_ = false;
};

struct RunLog
{
    std::string command;
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
    std::chrono::steady_clock::time_point clock = std::chrono::steady_clock::now();
    std::vector<std::string> lines;

    void add(const std::string &line) { lines.push_back(line); }

    // Best effort; a missing log never fails the run.
    void write_beside(const fs::path &out) const
    {
        std::ofstream log(out.string() + ".log", std::ios::trunc);
        const std::time_t t = std::chrono::system_clock::to_time_t(started);
        std::tm utc{};
        gmtime_r(&t, &utc);
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock).count();
        log << "started " << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ") << '\n'
            << "command " << command << '\n'
            << "elapsed_s " << std::fixed << std::setprecision(3) << elapsed << '\n';
        for (const auto &l : lines)
            log << l << '\n';
    }
};

std::string hex64(std::uint64_t v)
{
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

struct Common
{
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::string out;
};

ScenarioConfig load(const Common &c)
{
    ScenarioConfig config = c.config_path.empty() ? ScenarioConfig{} : load_config(c.config_path);
    if (!c.seeds.empty())
        config.seeds = c.seeds;
    std::sort(config.seeds.begin(), config.seeds.end());
    config.seeds.erase(std::unique(config.seeds.begin(), config.seeds.end()), config.seeds.end());
    config.validate();
    return config;
}

void add_common(CLI::App &app, Common &c)
{
    app.add_option("--config", c.config_path, "Scenario config file (key = value)")->check(CLI::ExistingFile);
    app.add_option("--seed", c.seeds, "Seed(s); overrides the config's seed list");
    app.add_option("--out", c.out, "Output path")->required();
}

// <stem>.seed<N><ext> when several seeds share one --out.
fs::path per_seed_path(const fs::path &out, std::uint64_t seed, bool several)
{
    if (!several)
        return out;
    fs::path p = out;
    p.replace_filename(out.stem().string() + ".seed" + std::to_string(seed) + out.extension().string());
    return p;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Common &c, RunLog &log)
{
    const ScenarioConfig config = load(c);
    const bool several = config.seeds.size() > 1;
    // All seeds or none: nothing is renamed until every file is written.
    std::vector<std::unique_ptr<AtomicFile>> files;
    std::vector<std::string> summary;
    for (const auto seed : config.seeds)
    {
        const fs::path path = per_seed_path(c.out, seed, several);
        const SeedSimulation sim = simulate_seed(config, seed);
        files.push_back(std::make_unique<AtomicFile>(path));
        write_dataset(files.back()->temp(), dataset_header(config, seed), sim.episodes);
        const std::uint64_t sum = file_checksum(files.back()->temp());
        summary.push_back("dataset " + path.string() + " episodes " + std::to_string(sim.episodes.size()) +
                          " seed " + std::to_string(seed) + " checksum " + hex64(sum));
    }
    for (auto &f : files)
        f->commit();
    for (const auto &line : summary)
    {
        std::cout << line << '\n';
        log.add(line);
    }
    return 0;
}

struct AllocateArgs
{
    std::string policy = "topm";
    std::string predictor = "oracle";
    std::optional<int> m;
    std::optional<double> max_power_dbm;
    std::string dataset;
    std::string predictions;
};

int cmd_allocate(const Common &c, const AllocateArgs &a, RunLog &log)
{
    const ScenarioConfig config = load(c);
    const Policy policy = policy_from_string(a.policy);
    const int m = a.m.value_or(config.top_m);
    if (m < 1)
        throw DomainError("--m must be >= 1");
    const double power_dbm = a.max_power_dbm.value_or(config.max_power_dbm);

    if (!a.dataset.empty())
    {
        const Dataset d = read_dataset(a.dataset);
        check_dataset_matches(d.header, config);
        if (std::find(config.seeds.begin(), config.seeds.end(), d.header.seed) == config.seeds.end())
            throw DomainError("dataset seed " + std::to_string(d.header.seed) + " is not among the run's seeds");
        log.add("dataset " + a.dataset + " checksum " + hex64(file_checksum(a.dataset)));
    }

    std::optional<Predictor> predictor;
    if (a.predictor == "external")
    {
        if (a.predictions.empty())
            throw DomainError("--predictor external needs --predictions");
        auto table = std::make_shared<const PredictionTable>(
            read_predictions(a.predictions, std::pair{config.antennas_vertical, config.antennas_horizontal}));
        if (config.seeds.size() != 1 || table->header().seed != config.seeds.front())
            throw DomainError("prediction file belongs to seed " + std::to_string(table->header().seed) +
                              "; pass exactly that seed");
        const auto missing = table->missing(config.users, config.window, config.frames - 1);
        if (!missing.empty())
        {
            std::cerr << "beamcast: " << missing.size() << " (ue, frame) predictions missing\n";
            throw MissingPredictionError(missing.front().first, missing.front().second);
        }
        log.add("predictions " + a.predictions + " checksum " + hex64(file_checksum(a.predictions)));
        predictor = Predictor::external(std::move(table));
    }
    else
    {
        predictor = Predictor::from_name(a.predictor, config.antennas_vertical, config.antennas_horizontal);
    }

    AllocatorOptions options;
    AtomicFile file(c.out);
    std::ofstream out(file.temp(), std::ios::trunc);
    std::size_t records = 0;
    for (const auto seed : config.seeds)
    {
        const SeedSimulation sim = simulate_seed(config, seed);
        for (int t = config.window - 1; t + 1 < config.frames; ++t)
        {
            std::vector<const Episode *> eps;
            for (int k = 0; k < config.users; ++k)
                eps.push_back(&sim.episode(k, t));
            const FrameEstimate estimate = estimate_frame(sim, eps, *predictor);
            FrameOutcome outcome = allocate_frame(sim, estimate, policy, m, power_dbm, options);
            outcome.predictor = predictor->name();
            out << to_json_line(outcome) << '\n';
            ++records;
        }
    }
    out.close();
    if (!out)
        throw std::runtime_error("cannot write " + file.temp().string());
    file.commit();
    std::cout << "allocation " << c.out << " records " << records << " checksum " << hex64(file_checksum(c.out))
              << '\n';
    log.add("records " + std::to_string(records));
    return 0;
}

struct EvaluateArgs
{
    std::vector<std::string> predictors;
    std::vector<int> m_values;
    std::vector<double> powers;
    bool no_optimal = false;
};

int cmd_evaluate(const Common &c, const EvaluateArgs &a, RunLog &log)
{
    const ScenarioConfig config = load(c);
    EvaluationPlan plan = default_plan(config);
    if (!a.predictors.empty())
        plan.predictors = a.predictors;
    if (!a.m_values.empty())
        plan.m_values = a.m_values;
    if (!a.powers.empty())
        plan.max_power_dbm = a.powers;
    if (a.no_optimal)
        plan.include_optimal = false;
    for (const auto &name : plan.predictors)
        if (name == "external")
            throw DomainError("evaluate runs the built-in predictors only; use allocate for external predictions");
    for (int m : plan.m_values)
        if (m < 1)
            throw DomainError("m values must be >= 1");

    const auto rows = evaluate(config, plan);
    AtomicFile file(c.out);
    file.write_text(evaluation_csv(rows));
    file.commit();
    std::cout << "evaluation " << c.out << " rows " << rows.size() << " seeds " << config.seeds.size() << '\n';
    log.add("rows " + std::to_string(rows.size()));
    return 0;
}

struct ConflictArgs
{
    int m_min = 2;
    int m_max = 10;
    int users = 4;
    int gamma_min = 0;
    int gamma_max = -1; // -1: up to users
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    std::string out;
};

int cmd_conflict(const ConflictArgs &a, RunLog &log)
{
    if (a.m_min < 1 || a.m_max < a.m_min)
        throw DomainError("need 1 <= m-min <= m-max");
    if (a.users < 0)
        throw DomainError("users must be >= 0");
    const int gamma_max = a.gamma_max < 0 ? a.users : a.gamma_max;
    if (a.gamma_min < 0 || gamma_max > a.users || gamma_max < a.gamma_min)
        throw DomainError("need 0 <= gamma-min <= gamma-max <= users");
    if (a.trials < 1)
        throw DomainError("trials must be >= 1");

    std::ostringstream csv;
    csv << "# beamcast-conflict v1\n"
        << "m,users,gamma,picks,closed_form,monte_carlo,trials,std_dev,z\n"
        << std::setprecision(10);
    for (int m = a.m_min; m <= a.m_max; ++m)
        for (int gamma = a.gamma_min; gamma <= gamma_max; ++gamma)
        {
            const double p = conflict_probability(m, a.users, gamma);
            const double mc =
                conflict_probability_mc(m, a.users, gamma, a.trials, derive_seed(a.seed, static_cast<std::uint64_t>(m),
                                                                                 static_cast<std::uint64_t>(gamma)));
            const double sd = std::sqrt(p * (1.0 - p) / static_cast<double>(a.trials));
            const double z = sd > 0.0 ? (mc - p) / sd : 0.0;
            csv << m << ',' << a.users << ',' << gamma << ',' << a.users - gamma << ',' << p << ',' << mc << ','
                << a.trials << ',' << sd << ',' << z << '\n';
        }
    AtomicFile file(a.out);
    file.write_text(csv.str());
    file.commit();
    std::cout << "conflict " << a.out << " checksum " << hex64(file_checksum(a.out)) << '\n';
    log.add("trials " + std::to_string(a.trials) + " seed " + std::to_string(a.seed));
    return 0;
}

// Inline gnuplot data blocks, one series per (policy, predictor, m), so the
// script runs without the CSV next to it.
int cmd_plot_script(const std::string &csv_path, const std::string &out_path)
{
    std::ifstream in(csv_path);
    if (!in)
        throw DomainError("cannot open " + csv_path);
    std::string line;
    std::vector<std::string> columns;
    struct Point
    {
        double x, y, se;
    };
    std::map<std::string, std::vector<Point>> series;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            cells.push_back(cell);
        if (columns.empty())
        {
            columns = cells;
            continue;
        }
        auto col = [&](const std::string &name) -> const std::string &
        {
            const auto it = std::find(columns.begin(), columns.end(), name);
            if (it == columns.end() || static_cast<std::size_t>(it - columns.begin()) >= cells.size())
                throw DomainError(csv_path + ": missing column '" + name + "'");
            return cells[static_cast<std::size_t>(it - columns.begin())];
        };
        const std::string label = col("policy") == "optimal" ? "optimal, " + col("predictor")
                                                             : "top-" + col("m") + ", " + col("predictor");
        series[label].push_back(
            {std::stod(col("max_power_dbm")), std::stod(col("mean_sum_rate")), std::stod(col("std_error"))});
    }
    if (series.empty())
        throw DomainError(csv_path + " holds no evaluation rows");

    std::ostringstream gp;
    gp << "# gnuplot script generated by beamcast plot-script from " << fs::path(csv_path).filename().string()
       << "\nset datafile separator whitespace\nset xlabel 'P_max (dBm)'\nset ylabel 'sum rate (bit/s/Hz)'\n"
          "set key left top\nset grid\n"
       << std::setprecision(10);
    int index = 0;
    for (auto &[label, points] : series)
    {
        std::sort(points.begin(), points.end(), [](const Point &a, const Point &b) { return a.x < b.x; });
        gp << "$s" << index++ << " << EOD\n";
        for (const auto &p : points)
            gp << p.x << ' ' << p.y << ' ' << p.se << '\n';
        gp << "EOD\n";
    }
    gp << "plot ";
    index = 0;
    for (const auto &[label, points] : series)
    {
        gp << (index ? ", \\\n     " : "") << "$s" << index << " using 1:2:3 with yerrorlines title '" << label
           << "'";
        ++index;
    }
    gp << '\n';
    AtomicFile file(out_path);
    file.write_text(gp.str());
    file.commit();
    std::cout << "plot script " << out_path << " series " << series.size() << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"beamcast: multiuser mmWave beam and power allocation simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "beamcast 0.1.0");

    Common common;
    auto *generate = app.add_subcommand("generate", "Write the low/high-resolution episode dataset");
    add_common(*generate, common);

    AllocateArgs alloc;
    auto *allocate = app.add_subcommand("allocate", "Allocate beams and power per frame (JSON lines)");
    add_common(*allocate, common);
    allocate->add_option("--policy", alloc.policy, "optimal | topm")
        ->check(CLI::IsMember({"optimal", "topm"}));
    allocate->add_option("--predictor", alloc.predictor, "oracle | persistence | bilinear | bicubic | external")
        ->check(CLI::IsMember({"oracle", "persistence", "bilinear", "bicubic", "external"}));
    allocate->add_option("--m", alloc.m, "Top-m list length (default: config top_m)");
    allocate->add_option("--max-power-dbm", alloc.max_power_dbm, "Power budget (default: config max_power_dbm)");
    allocate->add_option("--dataset", alloc.dataset, "Dataset to check against the config")
        ->check(CLI::ExistingFile);
    allocate->add_option("--predictions", alloc.predictions, "Prediction file for --predictor external")
        ->check(CLI::ExistingFile);

    EvaluateArgs eval;
    auto *evaluate_cmd = app.add_subcommand("evaluate", "Mean sum-rate over seeds, P_max and m (CSV)");
    add_common(*evaluate_cmd, common);
    evaluate_cmd->add_option("--predictor", eval.predictors, "Predictors (default: config predictors)");
    evaluate_cmd->add_option("--m", eval.m_values, "m values (default: config top_m_sweep)");
    evaluate_cmd->add_option("--max-power-dbm", eval.powers, "P_max values (default: config sweep)");
    evaluate_cmd->add_flag("--no-optimal", eval.no_optimal, "Skip the exhaustive policy");

    ConflictArgs conf;
    auto *conflict = app.add_subcommand("conflict", "Closed-form vs Monte Carlo conflict-free probability (CSV)");
    conflict->add_option("--m-min", conf.m_min, "Smallest m");
    conflict->add_option("--m-max", conf.m_max, "Largest m");
    conflict->add_option("--users", conf.users, "K");
    conflict->add_option("--gamma-min", conf.gamma_min, "Smallest gamma");
    conflict->add_option("--gamma-max", conf.gamma_max, "Largest gamma (default: K)");
    conflict->add_option("--trials", conf.trials, "Monte Carlo trials per cell");
    conflict->add_option("--seed", conf.seed, "Base seed");
    conflict->add_option("--out", conf.out, "Output CSV")->required();

    std::string plot_csv, plot_out;
    auto *plot = app.add_subcommand("plot-script", "Emit a gnuplot script for an evaluation CSV");
    plot->add_option("--csv", plot_csv, "Evaluation CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", plot_out, "Output script")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    RunLog log;
    for (int i = 0; i < argc; ++i)
        log.command += (i ? " " : "") + std::string(argv[i]);
    fs::path log_target;
    try
    {
        int rc = 0;
        if (*generate)
        {
            log_target = common.out;
            rc = cmd_generate(common, log);
        }
        else if (*allocate)
        {
            log_target = common.out;
            rc = cmd_allocate(common, alloc, log);
        }
        else if (*evaluate_cmd)
        {
            log_target = common.out;
            rc = cmd_evaluate(common, eval, log);
        }
        else if (*conflict)
        {
            log_target = conf.out;
            rc = cmd_conflict(conf, log);
        }
        else if (*plot)
        {
            log_target = plot_out;
            rc = cmd_plot_script(plot_csv, plot_out);
        }
        log.write_beside(log_target);
        return rc;
    }
    catch (const DomainError &e)
    {
        std::cerr << "beamcast: " << e.what() << '\n';
        return kExitDomain;
    }
    catch (const MissingPredictionError &e)
    {
        std::cerr << "beamcast: " << e.what() << '\n';
        return kExitDomain;
    }
    catch (const ParseError &e)
    {
        std::cerr << "beamcast: " << e.what() << '\n';
        return kExitDomain;
    }
    catch (const std::exception &e)
    {
        std::cerr << "beamcast: " << e.what() << '\n';
        return kExitFailure;
    }
}
