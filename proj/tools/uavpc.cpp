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

// Command-line front end: environment generation, pre-training, closed-loop
// runs, single-slot solves and CSV reports.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uavpc/config.hpp"
#include "uavpc/harness.hpp"
#include "uavpc/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace uavpc;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
};

void add_common(CLI::App* app, Common& c, const std::string& out_help) {
  app->add_option("--seed", c.seed, "Root seed for the environment, fading and training streams");
  app->add_option("--config", c.config, "key=value configuration file")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, out_help);
}

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig{} : load_config(c.config);
  if (c.seed) apply_root_seed(cfg, *c.seed);
  cfg.validate();
  return cfg;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

EnvMap env_for(const RunConfig& cfg, const std::string& env_path) {
  return env_path.empty() ? make_env(cfg) : load_env(env_path);
}

void write_pretrain_log(const fs::path& path, const std::vector<PretrainEpisode>& log) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << "episode,mape_ul,mape_dl,window_mape_max\n";
  for (const auto& e : log)
    os << e.episode << ',' << e.mape_ul << ',' << e.mape_dl << ',' << e.window_mape_max << '\n';
  write_text(path, os.str());
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// Instance format: {"h_ul": [[re, im], ...], "g_dl": g, "params": {key: value}}
// where params uses the configuration keys (W_hz, pB_max_w, ...).
json solve_instance(const json& in, const RunConfig& base) {
  std::ostringstream text;
  text.precision(17);
  text << config_to_text(base);
  if (in.contains("params"))
    for (const auto& [key, value] : in.at("params").items()) {
      text << key << '=';
      if (value.is_string())
        text << value.get<std::string>();
      else
        text << value.dump();
      text << '\n';
    }
  const LinkParams lp = parse_config(text.str()).link;

  const auto& h = in.at("h_ul");
  Eigen::VectorXcd h_ul(static_cast<Eigen::Index>(h.size()));
  for (std::size_t k = 0; k < h.size(); ++k)
    h_ul(static_cast<Eigen::Index>(k)) = {h[k].at(0).get<double>(), h[k].at(1).get<double>()};
  const ConvexProblem prob = build_problem(h_ul, in.at("g_dl").get<double>(), lp);
  const PowerSolution sol = solve(prob);

  json out;
  out["status"] = to_string(sol.status);
  out["V_re"] = matrix_json(sol.V.real());
  out["V_im"] = matrix_json(sol.V.imag());
  out["p"] = sol.p;
  out["phi"] = sol.phi;
  json v = json::array();
  for (Eigen::Index k = 0; k < sol.v.size(); ++k) v.push_back({sol.v(k).real(), sol.v(k).imag()});
  out["v"] = v;
  out["tr_V"] = sol.trace_V();
  out["tightness"] = sol.tightness;
  out["E_eu"] = sol.E_eu;
  out["iterations"] = sol.iterations;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint BS/UAV power control with learned channel estimates"};
  app.require_subcommand(1);

  Common genc;
  auto* gen = app.add_subcommand("gen-env", "Generate a building realization (JSON)");
  add_common(gen, genc, "Output JSON path (default env.json)");

  Common prec;
  std::string pre_env;
  std::optional<int> episodes;
  auto* pre = app.add_subcommand("pretrain", "Pre-train the 2K estimators on random positions");
  add_common(pre, prec, "Output weights directory (default weights)");
  pre->add_option("--env", pre_env, "Environment JSON (generated from the seed when omitted)");
  pre->add_option("--episodes", episodes, "Pre-training episodes (overrides the config)");

  Common runc;
  std::string run_env, run_weights, traj, trace;
  std::optional<int> slots;
  auto* runc_app = app.add_subcommand("run", "Run the closed loop along a trajectory");
  add_common(runc_app, runc, "Output directory for slots.csv and summary.json (default out)");
  runc_app->add_option("--traj", traj, "Trajectory")->check(CLI::IsMember({"c2t", "vat"}));
  runc_app->add_option("--env", run_env, "Environment JSON");
  runc_app->add_option("--weights", run_weights, "Pre-trained weights directory (pre-trains in-process when omitted)");
  runc_app->add_option("--slots", slots, "Number of slots T (overrides the config)");
  runc_app->add_option("--channel-trace", trace, "Also write the true channels to this CSV");

  Common solc;
  std::string sol_in;
  auto* sol = app.add_subcommand("solve-one", "Solve a single slot from a JSON instance");
  add_common(sol, solc, "Output JSON path (stdout when omitted)");
  sol->add_option("--input", sol_in, "Instance JSON")->required()->check(CLI::ExistingFile);

  Common repc;
  std::string rep_in;
  auto* rep = app.add_subcommand("report", "Summarize a slot CSV");
  add_common(rep, repc, "Output summary JSON path (stdout when omitted)");
  rep->add_option("--input", rep_in, "Slot CSV")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const RunConfig cfg = load(genc);
      const fs::path out = genc.out.empty() ? "env.json" : genc.out;
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      save_env(make_env(cfg), out);
      std::cout << "wrote " << out.string() << '\n';
    } else if (pre->parsed()) {
      RunConfig cfg = load(prec);
      if (episodes) cfg.train.pretrain_episodes = *episodes;
      cfg.validate();
      const fs::path out = prec.out.empty() ? "weights" : prec.out;
      const EnvMap env = env_for(cfg, pre_env);
      EstimatorBank bank = make_bank(cfg);
      const auto log = pretrain(cfg, env, bank);
      bank.save(out);
      write_pretrain_log(out / "pretrain.csv", log);
      std::cout << "pre-trained " << cfg.train.pretrain_episodes << " episodes; max window MAPE "
                << bank.max_window_mape() << "; wrote " << out.string() << '\n';
    } else if (runc_app->parsed()) {
      RunConfig cfg = load(runc);
      if (!traj.empty()) cfg.trajectory_kind = trajectory_kind_from_string(traj);
      if (slots) cfg.T = *slots;
      cfg.validate();
      const fs::path out = runc.out.empty() ? "out" : runc.out;
      const EnvMap env = env_for(cfg, run_env);
      EstimatorBank bank = run_weights.empty() ? make_bank(cfg) : EstimatorBank::load(run_weights);
      if (bank.K() != cfg.radio.K)
        throw std::runtime_error("weights were trained for K=" + std::to_string(bank.K()));
      if (run_weights.empty()) pretrain(cfg, env, bank);

      std::ostringstream trace_rows;
      const auto records = run(cfg, env, bank, trace.empty() ? nullptr : &trace_rows);
      write_csv(out / "slots.csv", records);
      const Summary s = summarize(records);
      write_summary(out / "summary.json", s);
      write_text(out / "config.txt", config_to_text(cfg));
      if (!trace.empty()) write_text(trace, channel_trace_header() + trace_rows.str());
      std::cout << "ran " << records.size() << " slots (" << to_string(cfg.trajectory_kind)
                << "), feasibility " << s.feasibility_pct << "%; wrote " << out.string() << '\n';
    } else if (sol->parsed()) {
      const RunConfig cfg = load(solc);
      const json result = solve_instance(json::parse(read_text(sol_in)), cfg);
      if (solc.out.empty())
        std::cout << result.dump(2) << '\n';
      else
        write_text(solc.out, result.dump(2) + "\n");
    } else if (rep->parsed()) {
      load(repc);
      const Summary s = summarize(read_csv(fs::path(rep_in)));
      if (repc.out.empty())
        std::cout << summary_to_json(s);
      else
        write_summary(repc.out, s);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
