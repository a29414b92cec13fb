// Copyright 2026 The gibbsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "gibbsq/linalg.hpp"

namespace gibbsq {

/// One Monte-Carlo realization. `parameters` holds the sampled values in draw
/// order: (t, then omega, a, b per ancilla) per cycle for ergodic runs, and
/// the angle of every monitored gate for universal runs.
struct RunRecord {
  std::uint64_t sample_index = 0;
  std::uint64_t seed = 0;
  std::uint64_t initial_state = 0;
  bool accepted = true;
  double acceptance_probability = 1.0;
  double relative_entropy = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> parameters;
  RealVector eigen_probs;
};

}  // namespace gibbsq
