// Copyright 2026 The uavpc Authors
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
#include <random>

namespace uavpc {

using Rng = std::mt19937_64;

// Named sub-streams. Each stream is seeded from (root seed, tag, indices)
// through std::seed_seq, so draws from one stream never shift another.
enum class StreamTag : std::uint32_t {
  Environment = 1,
  SlotFading = 2,
  WeightInit = 3,
  Minibatch = 4,
  PretrainPositions = 5,
  PretrainFading = 6,
};

Rng make_stream(std::uint64_t root, StreamTag tag, std::uint64_t i = 0,
                std::uint64_t j = 0);

// Root seeds for the three independent families of randomness in a run.
// `env` drives the building realization, `fading` the per-slot small-scale
// fading, `training` the network initialization, minibatch sampling and the
// pre-training flight positions.
struct SeedPlan {
  std::uint64_t env = 1;
  std::uint64_t fading = 1;
  std::uint64_t training = 1;

  static SeedPlan from_root(std::uint64_t root) { return {root, root, root}; }

  Rng environment() const { return make_stream(env, StreamTag::Environment); }
  Rng slot_fading(int slot, int direction) const;
  Rng weight_init(int direction, int antenna) const;
  Rng minibatch(int direction, int antenna) const;
  Rng pretrain_positions() const;
  Rng pretrain_fading(int episode, int direction) const;
};

}  // namespace uavpc
