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

#include "uavpc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "uavpc/channel.hpp"
#include "uavpc/solver.hpp"

namespace uavpc {

namespace {

ChannelVector estimated_channel(const EstimatorBank& bank, Direction dir,
                                const Position& uav, const RadioConfig& radio,
                                int slot) {
  ChannelVector ch;
  ch.dir = dir;
  ch.slot = slot;
  ch.distance_m = distance_m(uav, radio.bs);
  ch.theta = bank.estimate(dir, uav, radio.bs);
  const double d2 = ch.distance_m * ch.distance_m;
  ch.h.resize(ch.theta.size());
  for (std::size_t k = 0; k < ch.theta.size(); ++k) ch.h[k] = ch.theta[k] / d2;
  return ch;
}

std::vector<cdouble> training_targets(const RunConfig& cfg, const EnvMap& env,
                                      Direction dir, const Position& uav,
                                      const ChannelVector& truth) {
  if (cfg.train.target_mode == TargetMode::Full) return truth.theta;
  return large_scale_channel(dir, uav, env, cfg.radio, truth.slot).theta;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

template <class T>
double mean_of(const std::vector<SlotRecord>& recs, T field) {
  double s = 0.0;
  int n = 0;
  for (const auto& r : recs)
    if (r.feasible) {
      s += field(r);
      ++n;
    }
  return s / n;
}

}  // namespace

EnvMap make_env(const RunConfig& cfg) {
  std::vector<Position> clear;
  if (cfg.keep_bs_site_clear) clear.push_back(cfg.radio.bs);
  return generate_env(cfg.buildings, cfg.seeds.env, clear);
}

EstimatorBank make_bank(const RunConfig& cfg) {
  return EstimatorBank(cfg.radio.K, cfg.buildings.area_side_km, cfg.train, cfg.seeds);
}

std::vector<PretrainEpisode> pretrain(const RunConfig& cfg, const EnvMap& env,
                                      EstimatorBank& bank) {
  cfg.validate();
  if (bank.K() != cfg.radio.K) throw std::invalid_argument("pretrain: K mismatch");
  Rng pos_rng = cfg.seeds.pretrain_positions();
  std::uniform_real_distribution<double> horiz(0.0, cfg.buildings.area_side_km);
  std::uniform_real_distribution<double> vert(0.0, cfg.pretrain_max_altitude_km);
  std::vector<PretrainEpisode> log;
  log.reserve(static_cast<std::size_t>(cfg.train.pretrain_episodes));
  for (int e = 1; e <= cfg.train.pretrain_episodes; ++e) {
    Position uav;
    do {
      uav.x = horiz(pos_rng);
      uav.y = horiz(pos_rng);
      uav.g = vert(pos_rng);
    } while (!(distance_m(uav, cfg.radio.bs) > 0.0));
    PretrainEpisode ep;
    ep.episode = e;
    for (int d = 0; d < 2; ++d) {
      const auto dir = static_cast<Direction>(d);
      Rng fade = cfg.seeds.pretrain_fading(e, d);
      const ChannelVector truth = true_channel_at(uav, 0, dir, env, cfg.radio, fade);
      const auto targets = training_targets(cfg, env, dir, uav, truth);
      const double m = bank.observe(dir, uav, cfg.radio.bs, targets);
      (dir == Direction::BtU ? ep.mape_ul : ep.mape_dl) = m;
    }
    ep.window_mape_max = bank.max_window_mape();
    log.push_back(ep);
  }
  return log;
}

std::vector<SlotRecord> run(const RunConfig& cfg, const EnvMap& env,
                            EstimatorBank& bank, std::ostream* channel_trace) {
  cfg.validate();
  if (bank.K() != cfg.radio.K) throw std::invalid_argument("run: K mismatch");
  const Trajectory traj = cfg.trajectory();
  std::vector<SlotRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.T));
  for (int t = 1; t <= cfg.T; ++t) {
    SlotRecord rec;
    rec.t = t;
    rec.uav = position_at(traj, t);

    ChannelVector truth[2];
    for (int d = 0; d < 2; ++d) {
      Rng fade = cfg.seeds.slot_fading(t, d);
      truth[d] = true_channel_at(rec.uav, t, static_cast<Direction>(d), env, cfg.radio, fade);
      if (channel_trace != nullptr) *channel_trace << channel_trace_rows(truth[d]);
    }
    rec.los = truth[0].los;
    const auto& ul_true = truth[static_cast<int>(Direction::BtU)];
    const auto& dl_true = truth[static_cast<int>(Direction::UtB)];

    ChannelVector ul_plan = ul_true;
    ChannelVector dl_plan = dl_true;
    if (cfg.estimation == EstimationMode::Dnn) {
      ul_plan = estimated_channel(bank, Direction::BtU, rec.uav, cfg.radio, t);
      dl_plan = estimated_channel(bank, Direction::UtB, rec.uav, cfg.radio, t);
    }

    const ConvexProblem plan = build_problem(ul_plan, dl_plan, cfg.link);
    const PowerSolution sol = solve(plan);
    rec.status = sol.status;
    rec.iterations = sol.iterations;
    rec.feasible = sol.feasible();
    if (rec.feasible) {
      const ConvexProblem actual = build_problem(ul_true, dl_true, cfg.link);
      rec.planned = check_feasible(sol, plan.h_ul, plan.g_dl, cfg.link);
      rec.realized = check_feasible(sol, actual.h_ul, actual.g_dl, cfg.link);
      rec.tr_V_w = sol.trace_V();
      rec.p_w = sol.p;
      rec.R_dl_bps = rec.realized->downlink_rate_bps;
      rec.R_ul_bps = std::max(0.0, rec.realized->uplink_rate_bps);
      rec.E_eu = energy_utility(sol, actual);
      rec.tightness = sol.tightness;
    }

    for (int d = 0; d < 2; ++d) {
      const auto dir = static_cast<Direction>(d);
      const auto targets = training_targets(cfg, env, dir, rec.uav, truth[d]);
      bank.observe(dir, rec.uav, cfg.radio.bs, targets);
    }
    rec.mape_ul = bank.mean_window_mape(Direction::BtU);
    rec.mape_dl = bank.mean_window_mape(Direction::UtB);
    records.push_back(rec);
  }
  return records;
}

Summary summarize(const std::vector<SlotRecord>& records) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  Summary s;
  s.slots = static_cast<int>(records.size());
  s.final_mape_ul = records.back().mape_ul;
  s.final_mape_dl = records.back().mape_dl;
  double best = -std::numeric_limits<double>::infinity();
  double worst_slack = std::numeric_limits<double>::infinity();
  int first_t = records.front().t;
  int last_t = records.back().t;
  for (const auto& r : records) {
    first_t = std::min(first_t, r.t);
    last_t = std::max(last_t, r.t);
    if (!r.feasible) continue;
    ++s.feasible_slots;
    if (r.E_eu > best) {
      best = r.E_eu;
      s.argmax_E_eu_slot = r.t;
    }
    if (!r.realized) continue;
    worst_slack = std::min(worst_slack, r.realized->worst());
    if (!r.realized->ok(1e-6)) ++s.realized_violations;
  }
  s.feasibility_pct = 100.0 * s.feasible_slots / s.slots;
  if (s.feasible_slots == 0) return s;
  s.max_E_eu = best;
  s.argmax_interior = *s.argmax_E_eu_slot > first_t && *s.argmax_E_eu_slot < last_t;
  s.mean_E_eu = mean_of(records, [](const SlotRecord& r) { return r.E_eu; });
  s.mean_tr_V_w = mean_of(records, [](const SlotRecord& r) { return r.tr_V_w; });
  s.mean_p_w = mean_of(records, [](const SlotRecord& r) { return r.p_w; });
  s.mean_R_dl_bps = mean_of(records, [](const SlotRecord& r) { return r.R_dl_bps; });
  s.mean_R_ul_bps = mean_of(records, [](const SlotRecord& r) { return r.R_ul_bps; });
  s.mean_tightness = mean_of(records, [](const SlotRecord& r) { return r.tightness; });
  if (std::isfinite(worst_slack)) s.worst_realized_slack = worst_slack;
  return s;
}

std::string csv_header() {
  return "t,tr_V_w,p_w,R_dl_bps,R_ul_bps,E_eu,mape_ul,mape_dl,feasible,tightness";
}

void write_csv(std::ostream& os, const std::vector<SlotRecord>& records) {
  std::ostringstream buf;
  buf.imbue(std::locale::classic());
  buf.precision(12);
  buf << csv_header() << '\n';
  for (const auto& r : records) {
    buf << r.t << ',' << r.tr_V_w << ',' << r.p_w << ',' << r.R_dl_bps << ','
        << r.R_ul_bps << ',' << r.E_eu << ',' << r.mape_ul << ',' << r.mape_dl
        << ',' << (r.feasible ? 1 : 0) << ',' << r.tightness << '\n';
  }
  os << buf.str();
}

void write_csv(const std::filesystem::path& path, const std::vector<SlotRecord>& records) {
  auto os = open_out(path);
  write_csv(os, records);
  if (!os) throw std::runtime_error("error writing " + path.string());
}

std::vector<SlotRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != csv_header())
    throw std::runtime_error("read_csv: unexpected header");
  std::vector<SlotRecord> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    row.imbue(std::locale::classic());
    SlotRecord r;
    char c1, c2, c3, c4, c5, c6, c7, c8, c9;
    int feasible = 0;
    row >> r.t >> c1 >> r.tr_V_w >> c2 >> r.p_w >> c3 >> r.R_dl_bps >> c4 >>
        r.R_ul_bps >> c5 >> r.E_eu >> c6 >> r.mape_ul >> c7 >> r.mape_dl >> c8 >>
        feasible >> c9 >> r.tightness;
    if (!row || c1 != ',' || c9 != ',')
      throw std::runtime_error("read_csv: malformed line " + std::to_string(lineno));
    r.feasible = feasible != 0;
    r.status = r.feasible ? SolveStatus::Optimal : SolveStatus::MaxIterations;
    out.push_back(r);
  }
  return out;
}

std::vector<SlotRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  return read_csv(is);
}

std::string summary_to_json(const Summary& s) {
  nlohmann::ordered_json j;
  auto opt = [&j](const char* key, const auto& v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  j["slots"] = s.slots;
  j["feasible_slots"] = s.feasible_slots;
  j["feasibility_pct"] = s.feasibility_pct;
  opt("mean_E_eu", s.mean_E_eu);
  opt("max_E_eu", s.max_E_eu);
  opt("argmax_E_eu_slot", s.argmax_E_eu_slot);
  opt("argmax_interior", s.argmax_interior);
  opt("mean_tr_V_w", s.mean_tr_V_w);
  opt("mean_p_w", s.mean_p_w);
  opt("mean_R_dl_bps", s.mean_R_dl_bps);
  opt("mean_R_ul_bps", s.mean_R_ul_bps);
  opt("mean_tightness", s.mean_tightness);
  j["final_mape_ul"] = s.final_mape_ul;
  j["final_mape_dl"] = s.final_mape_dl;
  j["realized_violations"] = s.realized_violations;
  opt("worst_realized_slack", s.worst_realized_slack);
  return j.dump(2) + "\n";
}

void write_summary(const std::filesystem::path& path, const Summary& s) {
  auto os = open_out(path);
  os << summary_to_json(s);
  if (!os) throw std::runtime_error("error writing " + path.string());
}

}  // namespace uavpc
