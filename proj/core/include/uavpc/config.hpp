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
#include <filesystem>
#include <string>

#include "uavpc/channel.hpp"
#include "uavpc/env.hpp"
#include "uavpc/estimator.hpp"
#include "uavpc/link.hpp"
#include "uavpc/rng.hpp"

namespace uavpc {

// `Dnn` plans on the learned channel estimates; `Exact` hands the solver
// the ground-truth channel (useful to isolate the optimizer).
enum class EstimationMode { Dnn, Exact };

struct RunConfig {
  LinkParams link;
  RadioConfig radio;
  BuildingParams buildings;
  TrainConfig train;
  Trajectory c2t = Trajectory::circular({0.5, 0.5, 0.05}, 0.375, 100);
  Trajectory vat = Trajectory::vertical_ascent({0.5, 0.5, 0.0}, {0.5, 0.5, 0.35}, 100);
  Trajectory::Kind trajectory_kind = Trajectory::Kind::Circular;
  int T = 100;
  SeedPlan seeds;
  EstimationMode estimation = EstimationMode::Dnn;
  bool keep_bs_site_clear = true;
  double pretrain_max_altitude_km = 0.35;

  // The selected trajectory with its horizon set to T.
  Trajectory trajectory() const;
  void validate() const;
};

// Flat `key=value` text; '#' starts a comment. Unknown keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_text(const RunConfig& cfg);

// Applies one root seed to the environment, fading and training streams.
void apply_root_seed(RunConfig& cfg, std::uint64_t root);

Trajectory::Kind trajectory_kind_from_string(const std::string& s);
const char* to_string(Trajectory::Kind k);

}  // namespace uavpc
