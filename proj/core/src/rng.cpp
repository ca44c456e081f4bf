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

#include "uavpc/rng.hpp"

#include <array>

namespace uavpc {

Rng make_stream(std::uint64_t root, StreamTag tag, std::uint64_t i,
                std::uint64_t j) {
  const std::array<std::uint32_t, 7> words{
      static_cast<std::uint32_t>(root),
      static_cast<std::uint32_t>(root >> 32),
      static_cast<std::uint32_t>(tag),
      static_cast<std::uint32_t>(i),
      static_cast<std::uint32_t>(i >> 32),
      static_cast<std::uint32_t>(j),
      static_cast<std::uint32_t>(j >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

Rng SeedPlan::slot_fading(int slot, int direction) const {
  return make_stream(fading, StreamTag::SlotFading,
                     static_cast<std::uint64_t>(slot),
                     static_cast<std::uint64_t>(direction));
}

Rng SeedPlan::weight_init(int direction, int antenna) const {
  return make_stream(training, StreamTag::WeightInit,
                     static_cast<std::uint64_t>(direction),
                     static_cast<std::uint64_t>(antenna));
}

Rng SeedPlan::minibatch(int direction, int antenna) const {
  return make_stream(training, StreamTag::Minibatch,
                     static_cast<std::uint64_t>(direction),
                     static_cast<std::uint64_t>(antenna));
}

Rng SeedPlan::pretrain_positions() const {
  return make_stream(training, StreamTag::PretrainPositions);
}

Rng SeedPlan::pretrain_fading(int episode, int direction) const {
  return make_stream(fading, StreamTag::PretrainFading,
                     static_cast<std::uint64_t>(episode),
                     static_cast<std::uint64_t>(direction));
}

}  // namespace uavpc
