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

#include "uavpc/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavpc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size())
    throw std::invalid_argument("config: '" + key + "' expects a number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw std::invalid_argument("config: '" + key + "' expects an integer");
  return static_cast<int>(x);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto x = std::stoull(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("config: '" + key + "' expects an unsigned integer");
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("config: '" + key + "' expects true/false");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(key, trim(item)));
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& k, const std::string& v) {
        member(c) = to_double(k, v);
      };
    };
    // link
    num("W_hz", [](RunConfig& c) -> double& { return c.link.W_hz; });
    t["N0_dbm_hz"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.link.set_noise_dbm_per_hz(to_double(k, v));
    };
    num("Fu_bits", [](RunConfig& c) -> double& { return c.link.Fu_bits; });
    num("Du_s", [](RunConfig& c) -> double& { return c.link.Du_s; });
    num("eps", [](RunConfig& c) -> double& { return c.link.eps; });
    num("snr_th_db", [](RunConfig& c) -> double& { return c.link.snr_th_db; });
    num("Re_th_bps", [](RunConfig& c) -> double& { return c.link.Re_th_bps; });
    num("pB_max_w", [](RunConfig& c) -> double& { return c.link.pB_max_w; });
    num("pv_max_w", [](RunConfig& c) -> double& { return c.link.pv_max_w; });
    num("Tf_s", [](RunConfig& c) -> double& { return c.link.Tf_s; });
    num("eta", [](RunConfig& c) -> double& { return c.link.eta; });
    // radio
    num("Gt_dbi", [](RunConfig& c) -> double& { return c.radio.gt_dbi; });
    num("Gr_dbi", [](RunConfig& c) -> double& { return c.radio.gr_dbi; });
    t["K"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.radio.K = to_int(k, v);
    };
    num("fc_ghz", [](RunConfig& c) -> double& { return c.radio.carrier_ghz; });
    num("rician_db", [](RunConfig& c) -> double& { return c.radio.rician_db; });
    num("bs_x_km", [](RunConfig& c) -> double& { return c.radio.bs.x; });
    num("bs_y_km", [](RunConfig& c) -> double& { return c.radio.bs.y; });
    num("bs_g_km", [](RunConfig& c) -> double& { return c.radio.bs.g; });
    num("downtilt_deg", [](RunConfig& c) -> double& { return c.radio.downtilt_deg; });
    num("bs_azimuth_deg", [](RunConfig& c) -> double& { return c.radio.bs_azimuth_deg; });
    num("min_uav_height_m", [](RunConfig& c) -> double& { return c.radio.min_uav_height_m; });
    // trajectories
    t["traj"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.trajectory_kind = trajectory_kind_from_string(v);
    };
    t["T_slots"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.T = to_int(k, v);
    };
    num("c2t_center_x_km", [](RunConfig& c) -> double& { return c.c2t.center.x; });
    num("c2t_center_y_km", [](RunConfig& c) -> double& { return c.c2t.center.y; });
    num("c2t_altitude_km", [](RunConfig& c) -> double& { return c.c2t.center.g; });
    num("c2t_radius_km", [](RunConfig& c) -> double& { return c.c2t.radius_km; });
    num("c2t_revolutions", [](RunConfig& c) -> double& { return c.c2t.revolutions; });
    t["c2t_phase_deg"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.c2t.start_phase_rad = to_double(k, v) * std::numbers::pi / 180.0;
    };
    t["c2t_clockwise"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.c2t.clockwise = to_bool(k, v);
    };
    num("vat_start_x_km", [](RunConfig& c) -> double& { return c.vat.start.x; });
    num("vat_start_y_km", [](RunConfig& c) -> double& { return c.vat.start.y; });
    num("vat_start_g_km", [](RunConfig& c) -> double& { return c.vat.start.g; });
    num("vat_end_x_km", [](RunConfig& c) -> double& { return c.vat.end.x; });
    num("vat_end_y_km", [](RunConfig& c) -> double& { return c.vat.end.y; });
    num("vat_end_g_km", [](RunConfig& c) -> double& { return c.vat.end.g; });
    // buildings
    num("alpha", [](RunConfig& c) -> double& { return c.buildings.alpha; });
    num("beta_per_km2", [](RunConfig& c) -> double& { return c.buildings.beta_per_km2; });
    num("sigma_m", [](RunConfig& c) -> double& { return c.buildings.sigma_m; });
    num("height_clip_m", [](RunConfig& c) -> double& { return c.buildings.height_clip_m; });
    num("area_side_km", [](RunConfig& c) -> double& { return c.buildings.area_side_km; });
    t["bs_site_clear"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.keep_bs_site_clear = to_bool(k, v);
    };
    // training
    t["hidden"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.hidden = to_int_list(k, v);
    };
    t["minibatch"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.minibatch = to_int(k, v);
    };
    t["train_interval"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.train_interval = to_int(k, v);
    };
    t["capacity"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.capacity = to_int(k, v);
    };
    num("learning_rate", [](RunConfig& c) -> double& { return c.train.learning_rate; });
    t["pretrain_episodes"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.pretrain_episodes = to_int(k, v);
    };
    t["mape_window"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.train.mape_window = to_int(k, v);
    };
    t["target_mode"] = [](RunConfig& c, const std::string&, const std::string& v) {
      c.train.target_mode = target_mode_from_string(v);
    };
    num("pretrain_max_altitude_km",
        [](RunConfig& c) -> double& { return c.pretrain_max_altitude_km; });
    // seeds and modes
    t["seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      apply_root_seed(c, to_u64(k, v));
    };
    t["env_seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seeds.env = to_u64(k, v);
    };
    t["fading_seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seeds.fading = to_u64(k, v);
    };
    t["training_seed"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.seeds.training = to_u64(k, v);
    };
    t["estimation"] = [](RunConfig& c, const std::string&, const std::string& v) {
      if (v == "dnn")
        c.estimation = EstimationMode::Dnn;
      else if (v == "exact")
        c.estimation = EstimationMode::Exact;
      else
        throw std::invalid_argument("config: estimation must be dnn or exact");
    };
    return t;
  }();
  return table;
}

}  // namespace

Trajectory::Kind trajectory_kind_from_string(const std::string& s) {
  if (s == "c2t") return Trajectory::Kind::Circular;
  if (s == "vat") return Trajectory::Kind::VerticalAscent;
  throw std::invalid_argument("unknown trajectory '" + s + "' (expected c2t or vat)");
}

const char* to_string(Trajectory::Kind k) {
  return k == Trajectory::Kind::Circular ? "c2t" : "vat";
}

Trajectory RunConfig::trajectory() const {
  Trajectory t = trajectory_kind == Trajectory::Kind::Circular ? c2t : vat;
  t.horizon = T;
  return t;
}

void RunConfig::validate() const {
  link.validate();
  radio.validate();
  buildings.validate();
  train.validate();
  trajectory().validate();
  if (!(pretrain_max_altitude_km > 0.0))
    throw std::invalid_argument("config: pretrain_max_altitude_km must be > 0");
  const double side = buildings.area_side_km;
  if (radio.bs.x < 0.0 || radio.bs.x > side || radio.bs.y < 0.0 || radio.bs.y > side ||
      radio.bs.g < 0.0)
    throw std::invalid_argument("config: base station lies outside the region");
}

void apply_root_seed(RunConfig& cfg, std::uint64_t root) {
  cfg.seeds = SeedPlan::from_root(root);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream os;
  os.precision(17);
  os << "# link\n"
     << "W_hz=" << c.link.W_hz << '\n'
     << "N0_dbm_hz=" << 10.0 * std::log10(c.link.N0_w_per_hz * 1e3) << '\n'
     << "Fu_bits=" << c.link.Fu_bits << '\n'
     << "Du_s=" << c.link.Du_s << '\n'
     << "eps=" << c.link.eps << '\n'
     << "snr_th_db=" << c.link.snr_th_db << '\n'
     << "Re_th_bps=" << c.link.Re_th_bps << '\n'
     << "pB_max_w=" << c.link.pB_max_w << '\n'
     << "pv_max_w=" << c.link.pv_max_w << '\n'
     << "Tf_s=" << c.link.Tf_s << '\n'
     << "eta=" << c.link.eta << '\n'
     << "# radio\n"
     << "Gt_dbi=" << c.radio.gt_dbi << '\n'
     << "Gr_dbi=" << c.radio.gr_dbi << '\n'
     << "K=" << c.radio.K << '\n'
     << "fc_ghz=" << c.radio.carrier_ghz << '\n'
     << "rician_db=" << c.radio.rician_db << '\n'
     << "bs_x_km=" << c.radio.bs.x << '\n'
     << "bs_y_km=" << c.radio.bs.y << '\n'
     << "bs_g_km=" << c.radio.bs.g << '\n'
     << "downtilt_deg=" << c.radio.downtilt_deg << '\n'
     << "bs_azimuth_deg=" << c.radio.bs_azimuth_deg << '\n'
     << "min_uav_height_m=" << c.radio.min_uav_height_m << '\n'
     << "# trajectory\n"
     << "traj=" << to_string(c.trajectory_kind) << '\n'
     << "T_slots=" << c.T << '\n'
     << "c2t_center_x_km=" << c.c2t.center.x << '\n'
     << "c2t_center_y_km=" << c.c2t.center.y << '\n'
     << "c2t_altitude_km=" << c.c2t.center.g << '\n'
     << "c2t_radius_km=" << c.c2t.radius_km << '\n'
     << "c2t_revolutions=" << c.c2t.revolutions << '\n'
     << "c2t_phase_deg=" << c.c2t.start_phase_rad * 180.0 / std::numbers::pi << '\n'
     << "c2t_clockwise=" << (c.c2t.clockwise ? "true" : "false") << '\n'
     << "vat_start_x_km=" << c.vat.start.x << '\n'
     << "vat_start_y_km=" << c.vat.start.y << '\n'
     << "vat_start_g_km=" << c.vat.start.g << '\n'
     << "vat_end_x_km=" << c.vat.end.x << '\n'
     << "vat_end_y_km=" << c.vat.end.y << '\n'
     << "vat_end_g_km=" << c.vat.end.g << '\n'
     << "# buildings\n"
     << "alpha=" << c.buildings.alpha << '\n'
     << "beta_per_km2=" << c.buildings.beta_per_km2 << '\n'
     << "sigma_m=" << c.buildings.sigma_m << '\n'
     << "height_clip_m=" << c.buildings.height_clip_m << '\n'
     << "area_side_km=" << c.buildings.area_side_km << '\n'
     << "bs_site_clear=" << (c.keep_bs_site_clear ? "true" : "false") << '\n'
     << "# training\n"
     << "hidden=";
  for (std::size_t i = 0; i < c.train.hidden.size(); ++i)
    os << (i ? "," : "") << c.train.hidden[i];
  os << '\n'
     << "minibatch=" << c.train.minibatch << '\n'
     << "train_interval=" << c.train.train_interval << '\n'
     << "capacity=" << c.train.capacity << '\n'
     << "learning_rate=" << c.train.learning_rate << '\n'
     << "pretrain_episodes=" << c.train.pretrain_episodes << '\n'
     << "mape_window=" << c.train.mape_window << '\n'
     << "target_mode=" << to_string(c.train.target_mode) << '\n'
     << "pretrain_max_altitude_km=" << c.pretrain_max_altitude_km << '\n'
     << "# seeds and modes\n"
     << "env_seed=" << c.seeds.env << '\n'
     << "fading_seed=" << c.seeds.fading << '\n'
     << "training_seed=" << c.seeds.training << '\n'
     << "estimation=" << (c.estimation == EstimationMode::Dnn ? "dnn" : "exact") << '\n';
  return os.str();
}

}  // namespace uavpc
