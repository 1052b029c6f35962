// Copyright 2026 The dplreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLREG_REFERENCE_HPP_
#define DPLREG_REFERENCE_HPP_

#include "dplreg/engine.hpp"

namespace dplreg::reference {

// Straight-line single-threaded transcriptions of the two recursions,
// kept as the comparison oracle for the OpenMP engine: no mailbox, no
// pragmas, just the update rule written out. Tests assert bit-identical
// trajectories, which is what makes the engine's determinism claim
// (independence from thread scheduling) checkable. The benchmark target
// times the two against each other.
engine::Trajectory run_private(const data::NetworkDataset& d,
                               const topology::NetworkGraph& g,
                               const topology::WeightMatrix& w,
                               const schedules::ScheduleParams& p,
                               const projection::OmegaBall& region, int rounds,
                               const std::vector<Vector>& init,
                               std::uint64_t seed, bool zero_noise = false,
                               bool skip_projection = false);

engine::Trajectory run_baseline(const data::NetworkDataset& d,
                                const topology::NetworkGraph& g,
                                const topology::WeightMatrix& w,
                                const schedules::ScheduleParams& p, int rounds,
                                const std::vector<Vector>& init);

}  // namespace dplreg::reference

#endif  // DPLREG_REFERENCE_HPP_
