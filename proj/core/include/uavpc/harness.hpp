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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "uavpc/config.hpp"
#include "uavpc/env.hpp"
#include "uavpc/estimator.hpp"
#include "uavpc/link.hpp"
#include "uavpc/power_solution.hpp"

namespace uavpc {

// One slot of the closed loop. The first ten fields form the CSV row.
struct SlotRecord {
  int t = 0;
  double tr_V_w = 0.0;
  double p_w = 0.0;
  double R_dl_bps = 0.0;
  double R_ul_bps = 0.0;  // clamped at zero when the normal approximation goes negative
  double E_eu = 0.0;
  double mape_ul = 0.0;  // windowed mean over the BtU networks
  double mape_dl = 0.0;  // windowed mean over the UtB networks
  bool feasible = false;
  double tightness = 0.0;

  Position uav;
  bool los = false;
  SolveStatus status = SolveStatus::MaxIterations;
  int iterations = 0;
  // Constraint slacks on the channels the solver saw and on the true ones;
  // empty for infeasible slots and for records read back from CSV.
  std::optional<FeasibilityReport> planned;
  std::optional<FeasibilityReport> realized;
};

struct PretrainEpisode {
  int episode = 0;
  double mape_ul = 0.0;  // episode MAPE before the update
  double mape_dl = 0.0;
  double window_mape_max = 0.0;  // worst windowed MAPE over all 2K networks
};

// Environment for the run; the base-station cell is kept free of buildings
// when cfg.keep_bs_site_clear is set.
EnvMap make_env(const RunConfig& cfg);

EstimatorBank make_bank(const RunConfig& cfg);

// Flies cfg.train.pretrain_episodes random positions, uniform over the region
// and [0, pretrain_max_altitude_km], training every network on each.
std::vector<PretrainEpisode> pretrain(const RunConfig& cfg, const EnvMap& env,
                                      EstimatorBank& bank);

// The T-slot loop: estimate, solve, evaluate on the true channels, then train
// on the slot's targets. When `channel_trace` is set, the true channels are
// written to it as CSV rows (without header).
std::vector<SlotRecord> run(const RunConfig& cfg, const EnvMap& env,
                            EstimatorBank& bank,
                            std::ostream* channel_trace = nullptr);

struct Summary {
  int slots = 0;
  int feasible_slots = 0;
  double feasibility_pct = 0.0;
  // Means over feasible slots; empty when there are none.
  std::optional<double> mean_E_eu;
  std::optional<double> max_E_eu;
  std::optional<int> argmax_E_eu_slot;
  std::optional<bool> argmax_interior;  // 1 < t* < T
  std::optional<double> mean_tr_V_w;
  std::optional<double> mean_p_w;
  std::optional<double> mean_R_dl_bps;
  std::optional<double> mean_R_ul_bps;
  std::optional<double> mean_tightness;
  double final_mape_ul = 0.0;
  double final_mape_dl = 0.0;
  // Feasible slots whose true-channel constraints are violated (slack below
  // -1e-6); only slots carrying a realized report are counted.
  int realized_violations = 0;
  std::optional<double> worst_realized_slack;
};

Summary summarize(const std::vector<SlotRecord>& records);

std::string csv_header();
void write_csv(std::ostream& os, const std::vector<SlotRecord>& records);
void write_csv(const std::filesystem::path& path, const std::vector<SlotRecord>& records);
// Reads the CSV columns back; extra fields are left at their defaults.
std::vector<SlotRecord> read_csv(std::istream& is);
std::vector<SlotRecord> read_csv(const std::filesystem::path& path);

std::string summary_to_json(const Summary& s);
void write_summary(const std::filesystem::path& path, const Summary& s);

}  // namespace uavpc
