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

#ifndef BEAMCAST_ERRORS_HPP
#define BEAMCAST_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace beamcast
{

// Invalid argument or violated precondition.
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Malformed interchange or config input. `offset` is a byte offset for binary
// files and a 1-based line number for config files.
class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string &what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// Fixed-point iteration did not settle; `trace` holds max |dp| per iteration.
class ConvergenceError : public std::runtime_error
{
public:
    ConvergenceError(const std::string &what, std::vector<double> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::vector<double> &trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

class MissingPredictionError : public std::out_of_range
{
public:
    MissingPredictionError(int ue, int frame)
        : std::out_of_range("no prediction for ue " + std::to_string(ue) + ", frame " + std::to_string(frame)),
          ue_(ue), frame_(frame) {}

    int ue() const noexcept { return ue_; }
    int frame() const noexcept { return frame_; }

private:
    int ue_;
    int frame_;
};

} // namespace beamcast

#endif
