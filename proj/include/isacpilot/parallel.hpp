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

#include <cstddef>
#include <functional>
#include <vector>

namespace isacpilot
{

/// Process-wide worker count used by every parallel loop (>= 1).
void set_worker_threads(unsigned n);
unsigned worker_threads();

/// Runs body(i) for i in [0, n) on the worker pool. Each index is executed
/// exactly once; callers write results into slot i, so the outcome does not
/// depend on scheduling. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Sums values in index order (Neumaier compensation), making reductions of
/// per-trial results independent of the thread count.
double ordered_sum(const std::vector<double>& values);

} // namespace isacpilot
