// SPDX-License-Identifier: Apache-2.0
//
// isacpilot - mutual-information pilot design for integrated sensing and communication
// Copyright (C) 2026 The isacpilot authors
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

#pragma once

#include <cstdint>
#include <random>

#include "isacpilot/common.hpp"

namespace isacpilot
{

/// Seeded random stream with deterministic child streams.
///
/// A child stream is identified by its parent seed and an index, never by the
/// order in which children are created, so work split across threads draws
/// the same numbers as a sequential run.
class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent child stream number `index`.
    RngStream substream(std::uint64_t index) const;

    double uniform();
    double normal();

    /// Circularly-symmetric complex Gaussian CN(0, variance): each of the real
    /// and imaginary parts has variance `variance / 2`.
    cd complex_normal(double variance = 1.0);
    CVector complex_normal_vector(Eigen::Index n, double variance = 1.0);
    CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance = 1.0);

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to decorrelate derived seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

} // namespace isacpilot
