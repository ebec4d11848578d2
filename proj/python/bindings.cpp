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

// Python module beamcast._core. Arrays cross the boundary as float64 numpy
// arrays; images use the (row, col) layout of the C++ side.

#include "beamcast/allocator.hpp"
#include "beamcast/config.hpp"
#include "beamcast/errors.hpp"
#include "beamcast/interchange.hpp"
#include "beamcast/pipeline.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstring>

namespace py = pybind11;
using namespace beamcast;

namespace
{

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ChannelGains gains_from(const Array &a)
{
    if (a.ndim() != 2)
        throw DomainError("gains must be a (users, beams) array");
    ChannelGains g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
    std::copy_n(a.data(), g.values.size(), g.values.begin());
    return g;
}

void copy_image(const BeamImage &img, double *dst) { std::memcpy(dst, img.values.data(), img.size() * sizeof(double)); }

BeamImage image_from(const double *src, int rows, int cols, ImageKind kind)
{
    BeamImage img(rows, cols, kind);
    std::memcpy(img.values.data(), src, img.size() * sizeof(double));
    return img;
}

py::dict allocation_dict(const AllocationResult &r)
{
    py::dict d;
    d["beams"] = r.beams;
    d["power"] = r.power;
    d["sum_rate"] = r.sum_rate;
    d["combinations_evaluated"] = r.combinations_evaluated;
    d["failed_candidates"] = r.failed_candidates;
    d["mu"] = r.mu;
    d["gamma"] = r.gamma;
    d["pool_size"] = r.pool_size;
    d["fallback"] = r.fallback;
    return d;
}

// Episodes as arrays: ue (N,), frame (N,), inputs (N, s, 2, m_v, m_h), target (N, 2, M_v, M_h).
py::dict dataset_arrays(const Dataset &d)
{
    const auto &h = d.header;
    const auto n = static_cast<py::ssize_t>(d.episodes.size());
    py::array_t<std::int64_t> ue(n), frame(n);
    Array inputs({n, static_cast<py::ssize_t>(h.window), py::ssize_t{2}, static_cast<py::ssize_t>(h.low_vertical),
                  static_cast<py::ssize_t>(h.low_horizontal)});
    Array target({n, py::ssize_t{2}, static_cast<py::ssize_t>(h.vertical), static_cast<py::ssize_t>(h.horizontal)});
    const std::size_t low = static_cast<std::size_t>(h.low_vertical) * h.low_horizontal;
    const std::size_t high = static_cast<std::size_t>(h.vertical) * h.horizontal;
    double *in = inputs.mutable_data();
    double *out = target.mutable_data();
    for (py::ssize_t i = 0; i < n; ++i)
    {
        const Episode &e = d.episodes[static_cast<std::size_t>(i)];
        ue.mutable_at(i) = e.ue;
        frame.mutable_at(i) = e.frame;
        for (const auto &pair : e.inputs)
        {
            copy_image(pair.real_sq, in);
            copy_image(pair.imag_sq, in + low);
            in += 2 * low;
        }
        copy_image(e.target.real_sq, out);
        copy_image(e.target.imag_sq, out + high);
        out += 2 * high;
    }
    py::dict r;
    r["header"] = h;
    r["ue"] = ue;
    r["frame"] = frame;
    r["inputs"] = inputs;
    r["target"] = target;
    return r;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "beamcast core: channel model, beam sweeps, interchange files and beam/power allocation";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<MissingPredictionError>(m, "MissingPredictionError", PyExc_KeyError);

    py::class_<InterchangeHeader>(m, "InterchangeHeader")
        .def(py::init<>())
        .def_readwrite("version", &InterchangeHeader::version)
        .def_readwrite("kind", &InterchangeHeader::kind)
        .def_readwrite("users", &InterchangeHeader::users)
        .def_readwrite("vertical", &InterchangeHeader::vertical)
        .def_readwrite("horizontal", &InterchangeHeader::horizontal)
        .def_readwrite("low_vertical", &InterchangeHeader::low_vertical)
        .def_readwrite("low_horizontal", &InterchangeHeader::low_horizontal)
        .def_readwrite("window", &InterchangeHeader::window)
        .def_readwrite("frames", &InterchangeHeader::frames)
        .def_readwrite("seed", &InterchangeHeader::seed)
        .def_readwrite("records", &InterchangeHeader::records)
        .def("to_json_line", &InterchangeHeader::to_json_line)
        .def("__eq__", [](const InterchangeHeader &a, const InterchangeHeader &b) { return a == b; })
        .def("__repr__", [](const InterchangeHeader &h) { return "InterchangeHeader(" + h.to_json_line() + ")"; });

    m.def("default_config_text", [] { return format_config(ScenarioConfig{}); },
          "Default scenario config as key = value text.");
    m.def("normalize_config_text", [](const std::string &text) { return format_config(parse_config(text)); },
          py::arg("text"), "Parse and validate a config, returning it with every key spelled out.");

    m.def(
        "generate_dataset",
        [](const std::filesystem::path &path, const std::string &config_text, std::uint64_t seed)
        {
            const ScenarioConfig config = parse_config(config_text);
            const SeedSimulation sim = simulate_seed(config, seed);
            write_dataset(path, dataset_header(config, seed), sim.episodes);
            return file_checksum(path);
        },
        py::arg("path"), py::arg("config_text"), py::arg("seed"),
        "Simulate one seed and write its episode dataset; returns the file checksum.");

    m.def("read_dataset", [](const std::filesystem::path &path) { return dataset_arrays(read_dataset(path)); },
          py::arg("path"));

    m.def(
        "write_predictions",
        [](const std::filesystem::path &path, InterchangeHeader header, const py::array_t<std::int64_t> &ue,
           const py::array_t<std::int64_t> &frame, const Array &images)
        {
            if (images.ndim() != 4 || images.shape(1) != 2 || ue.ndim() != 1 || frame.ndim() != 1 ||
                ue.shape(0) != images.shape(0) || frame.shape(0) != images.shape(0))
                throw DomainError("expected ue (N,), frame (N,) and images (N, 2, M_v, M_h)");
            const int rows = static_cast<int>(images.shape(2)), cols = static_cast<int>(images.shape(3));
            header.vertical = rows;
            header.horizontal = cols;
            std::map<PredictionTable::Key, ImagePair> entries;
            const double *p = images.data();
            const std::size_t plane = static_cast<std::size_t>(rows) * cols;
            for (py::ssize_t i = 0; i < images.shape(0); ++i, p += 2 * plane)
                entries[{static_cast<int>(ue.at(i)), static_cast<int>(frame.at(i))}] = {
                    image_from(p, rows, cols, ImageKind::real_sq), image_from(p + plane, rows, cols, ImageKind::imag_sq)};
            write_predictions(path, header, entries);
            return file_checksum(path);
        },
        py::arg("path"), py::arg("header"), py::arg("ue"), py::arg("frame"), py::arg("images"),
        "Write predicted high-resolution pairs keyed by (ue, predicted frame t + 1).");

    m.def(
        "read_predictions",
        [](const std::filesystem::path &path)
        {
            const PredictionTable table = read_predictions(path);
            const auto &h = table.header();
            const auto n = static_cast<py::ssize_t>(table.size());
            py::array_t<std::int64_t> ue(n), frame(n);
            Array images({n, py::ssize_t{2}, static_cast<py::ssize_t>(h.vertical), static_cast<py::ssize_t>(h.horizontal)});
            const std::size_t plane = static_cast<std::size_t>(h.vertical) * h.horizontal;
            double *out = images.mutable_data();
            py::ssize_t i = 0;
            for (const auto &[key, pair] : table.entries())
            {
                ue.mutable_at(i) = key.first;
                frame.mutable_at(i) = key.second;
                copy_image(pair.real_sq, out);
                copy_image(pair.imag_sq, out + plane);
                out += 2 * plane;
                ++i;
            }
            py::dict r;
            r["header"] = h;
            r["ue"] = ue;
            r["frame"] = frame;
            r["images"] = images;
            return r;
        },
        py::arg("path"));

    m.def("file_checksum", [](const std::filesystem::path &p) { return file_checksum(p); }, py::arg("path"));

    m.def("permutation_count", &permutation_count, py::arg("n"), py::arg("k"));
    m.def("conflict_probability", &conflict_probability, py::arg("m"), py::arg("users"), py::arg("gamma"));
    m.def("conflict_probability_mc", &conflict_probability_mc, py::arg("m"), py::arg("users"), py::arg("gamma"),
          py::arg("trials"), py::arg("seed"));

    m.def(
        "sum_rate",
        [](const std::vector<int> &beams, const std::vector<double> &power, const Array &gains, double noise)
        { return sum_rate(beams, power, gains_from(gains), noise); },
        py::arg("beams"), py::arg("power"), py::arg("gains"), py::arg("noise"));

    m.def(
        "power_allocate_kkt",
        [](const std::vector<int> &beams, const Array &gains, double max_power, double noise, bool refine)
        {
            KktOptions options;
            options.refine = refine;
            const auto r = power_allocate_kkt(beams, gains_from(gains), max_power, noise, options);
            py::dict d;
            d["power"] = r.power;
            d["mu"] = r.mu;
            d["budget_met"] = r.budget_met;
            d["fixed_point_converged"] = r.fixed_point_converged;
            d["refined"] = r.refined;
            return d;
        },
        py::arg("beams"), py::arg("gains"), py::arg("max_power"), py::arg("noise"), py::arg("refine") = true);

    m.def(
        "enumerate_optimal",
        [](const Array &gains, double max_power, double noise)
        {
            const ChannelGains g = gains_from(gains);
            py::gil_scoped_release release;
            auto r = enumerate_optimal(g, max_power, noise);
            py::gil_scoped_acquire acquire;
            return allocation_dict(r);
        },
        py::arg("gains"), py::arg("max_power"), py::arg("noise"));

    m.def(
        "topm_allocate",
        [](const Array &gains, const std::vector<std::vector<int>> &rankings, int top, double max_power, double noise)
        { return allocation_dict(topm_allocate(rankings, gains_from(gains), top, max_power, noise)); },
        py::arg("gains"), py::arg("rankings"), py::arg("m"), py::arg("max_power"), py::arg("noise"),
        "Top-m allocation; rankings[k] lists user k's beams strongest first.");

    m.def(
        "evaluate_csv",
        [](const std::string &config_text, const std::vector<std::string> &predictors, const std::vector<int> &m_values,
           bool include_optimal)
        {
            const ScenarioConfig config = parse_config(config_text);
            EvaluationPlan plan = default_plan(config);
            if (!predictors.empty())
                plan.predictors = predictors;
            if (!m_values.empty())
                plan.m_values = m_values;
            plan.include_optimal = include_optimal;
            std::vector<EvaluationRow> rows;
            {
                py::gil_scoped_release release;
                rows = evaluate(config, plan);
            }
            return evaluation_csv(rows);
        },
        py::arg("config_text"), py::arg("predictors") = std::vector<std::string>{},
        py::arg("m_values") = std::vector<int>{}, py::arg("include_optimal") = true);
}
