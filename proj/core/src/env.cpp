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

#include "uavpc/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "uavpc/rng.hpp"

namespace uavpc {

namespace {

constexpr double kMetresPerKm = 1000.0;

struct Interval {
  double lo;
  double hi;
};

// Parametric range [lo, hi] of t in [0, 1] for which p0 + t*d lies in
// [lower, upper]. Empty when lo > hi.
Interval clip_slab(double p0, double d, double lower, double upper) {
  if (d == 0.0) {
    if (p0 < lower || p0 > upper) return {1.0, 0.0};
    return {0.0, 1.0};
  }
  double t0 = (lower - p0) / d;
  double t1 = (upper - p0) / d;
  if (t0 > t1) std::swap(t0, t1);
  return {std::max(0.0, t0), std::min(1.0, t1)};
}

bool lexicographically_less(const Position& a, const Position& b) {
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.g < b.g;
}

}  // namespace

double distance_m(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dg = a.g - b.g;
  return kMetresPerKm * std::sqrt(dx * dx + dy * dy + dg * dg);
}

void BuildingParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("BuildingParams: alpha must lie in [0, 1]");
  if (!(beta_per_km2 >= 0.0))
    throw std::invalid_argument("BuildingParams: beta must be >= 0");
  if (!(sigma_m > 0.0))
    throw std::invalid_argument("BuildingParams: sigma must be > 0");
  if (!(height_clip_m > 0.0))
    throw std::invalid_argument("BuildingParams: height clip must be > 0");
  if (!(area_side_km > 0.0))
    throw std::invalid_argument("BuildingParams: area side must be > 0");
}

double BuildingParams::footprint_side_m() const {
  if (beta_per_km2 == 0.0) return 0.0;
  return kMetresPerKm * std::sqrt(alpha / beta_per_km2);
}

EnvMap::EnvMap(double region_km, std::uint64_t seed,
               std::vector<Building> buildings)
    : region_km_(region_km), seed_(seed), buildings_(std::move(buildings)) {}

double EnvMap::built_area_fraction() const {
  double covered = 0.0;
  for (const auto& b : buildings_) covered += b.side_m * b.side_m;
  const double side_m = region_km_ * kMetresPerKm;
  return covered / (side_m * side_m);
}

double EnvMap::max_height_m() const {
  double h = 0.0;
  for (const auto& b : buildings_) h = std::max(h, b.height_m);
  return h;
}

bool EnvMap::contains(const Position& p) const {
  return p.x >= 0.0 && p.x <= region_km_ && p.y >= 0.0 && p.y <= region_km_ &&
         p.g >= 0.0;
}

bool operator==(const Building& a, const Building& b) {
  return a.cx_m == b.cx_m && a.cy_m == b.cy_m && a.side_m == b.side_m &&
         a.height_m == b.height_m;
}

bool operator==(const EnvMap& a, const EnvMap& b) {
  return a.region_km_ == b.region_km_ && a.seed_ == b.seed_ &&
         a.buildings_ == b.buildings_;
}

EnvMap generate_env(const BuildingParams& params, std::uint64_t seed,
                    std::span<const Position> clear_sites) {
  params.validate();
  const double area_km2 = params.area_side_km * params.area_side_km;
  const auto count =
      static_cast<std::size_t>(std::llround(params.beta_per_km2 * area_km2));
  if (count == 0) return EnvMap(params.area_side_km, seed, {});

  const double side_m = params.area_side_km * kMetresPerKm;
  const double width = params.footprint_side_m();

  auto cell_blocked = [&](std::size_t i, std::size_t j, double pitch) {
    const double cx = (static_cast<double>(i) + 0.5) * pitch;
    const double cy = (static_cast<double>(j) + 0.5) * pitch;
    return std::any_of(clear_sites.begin(), clear_sites.end(),
                       [&](const Position& p) {
                         return std::abs(p.x * kMetresPerKm - cx) <= 0.5 * width &&
                                std::abs(p.y * kMetresPerKm - cy) <= 0.5 * width;
                       });
  };

  auto per_side = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(count))));
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (;;) {
    const double pitch = side_m / static_cast<double>(per_side);
    cells.clear();
    for (std::size_t i = 0; i < per_side; ++i)
      for (std::size_t j = 0; j < per_side; ++j)
        if (!cell_blocked(i, j, pitch)) cells.emplace_back(i, j);
    if (cells.size() >= count) break;
    ++per_side;
  }
  const double pitch = side_m / static_cast<double>(per_side);
  if (width > pitch) {
    throw std::invalid_argument(
        "generate_env: footprint side exceeds grid pitch (alpha too large "
        "for beta)");
  }

  Rng rng = make_stream(seed, StreamTag::Environment);
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  chosen.reserve(count);
  std::sample(cells.begin(), cells.end(), std::back_inserter(chosen), count,
              rng);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Building> buildings;
  buildings.reserve(count);
  for (const auto& [i, j] : chosen) {
    double h = 0.0;
    while (h <= 0.0) {
      const double u = 1.0 - unit(rng);  // (0, 1]
      h = params.sigma_m * std::sqrt(-2.0 * std::log(u));
    }
    buildings.push_back({(static_cast<double>(i) + 0.5) * pitch,
                         (static_cast<double>(j) + 0.5) * pitch, width,
                         std::min(h, params.height_clip_m)});
  }
  return EnvMap(params.area_side_km, seed, std::move(buildings));
}

bool is_los(const Position& a, const Position& b, const EnvMap& env) {
  // Evaluate in a canonical endpoint order so the result is bit-symmetric.
  const Position& p = lexicographically_less(b, a) ? b : a;
  const Position& q = lexicographically_less(b, a) ? a : b;

  const double x0 = p.x * kMetresPerKm;
  const double y0 = p.y * kMetresPerKm;
  const double z0 = p.g * kMetresPerKm;
  const double dx = q.x * kMetresPerKm - x0;
  const double dy = q.y * kMetresPerKm - y0;
  const double dz = q.g * kMetresPerKm - z0;

  for (const auto& bld : env.buildings()) {
    const double half = 0.5 * bld.side_m;
    const Interval ix = clip_slab(x0, dx, bld.cx_m - half, bld.cx_m + half);
    if (ix.lo > ix.hi) continue;
    const Interval iy = clip_slab(y0, dy, bld.cy_m - half, bld.cy_m + half);
    const double lo = std::max(ix.lo, iy.lo);
    const double hi = std::min(ix.hi, iy.hi);
    if (lo > hi) continue;
    // Altitude is linear along the segment, so its minimum over the crossed
    // stretch sits at one of the two ends.
    const double lowest = std::min(z0 + lo * dz, z0 + hi * dz);
    if (lowest <= bld.height_m) return false;
  }
  return true;
}

std::string env_to_json(const EnvMap& env) {
  nlohmann::json j;
  j["seed"] = env.seed();
  j["region_km"] = env.region_km();
  auto& arr = j["buildings"] = nlohmann::json::array();
  for (const auto& b : env.buildings()) {
    arr.push_back({{"cx_m", b.cx_m},
                   {"cy_m", b.cy_m},
                   {"side_m", b.side_m},
                   {"height_m", b.height_m}});
  }
  return j.dump(1);
}

EnvMap env_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Building> buildings;
  for (const auto& b : j.at("buildings")) {
    buildings.push_back({b.at("cx_m").get<double>(), b.at("cy_m").get<double>(),
                         b.at("side_m").get<double>(),
                         b.at("height_m").get<double>()});
  }
  return EnvMap(j.at("region_km").get<double>(),
                j.at("seed").get<std::uint64_t>(), std::move(buildings));
}

void save_env(const EnvMap& env, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << env_to_json(env) << '\n';
}

EnvMap load_env(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return env_from_json(ss.str());
}

Trajectory Trajectory::circular(Position center, double radius_km,
                                int horizon) {
  Trajectory t;
  t.kind = Kind::Circular;
  t.center = center;
  t.radius_km = radius_km;
  t.horizon = horizon;
  return t;
}

Trajectory Trajectory::vertical_ascent(Position start, Position end,
                                       int horizon) {
  Trajectory t;
  t.kind = Kind::VerticalAscent;
  t.start = start;
  t.end = end;
  t.horizon = horizon;
  return t;
}

void Trajectory::validate() const {
  if (horizon < 1) throw std::invalid_argument("Trajectory: horizon must be >= 1");
  if (kind == Kind::Circular) {
    if (!(radius_km > 0.0))
      throw std::invalid_argument("Trajectory: radius must be > 0");
    if (!(revolutions > 0.0))
      throw std::invalid_argument("Trajectory: revolutions must be > 0");
    if (center.g < 0.0)
      throw std::invalid_argument("Trajectory: altitude must be >= 0");
  } else {
    if (start == end)
      throw std::invalid_argument("Trajectory: start and end coincide");
    if (start.g < 0.0 || end.g < 0.0)
      throw std::invalid_argument("Trajectory: altitude must be >= 0");
  }
}

Position position_at(const Trajectory& traj, int t) {
  if (t < 1 || t > traj.horizon)
    throw std::out_of_range("position_at: slot outside [1, T]");
  const double step = static_cast<double>(t - 1);
  if (traj.kind == Trajectory::Kind::Circular) {
    const double sense = traj.clockwise ? -1.0 : 1.0;
    const double angle =
        traj.start_phase_rad + sense * 2.0 * std::numbers::pi *
                                   traj.revolutions * step /
                                   static_cast<double>(traj.horizon);
    return {traj.center.x + traj.radius_km * std::cos(angle),
            traj.center.y + traj.radius_km * std::sin(angle), traj.center.g};
  }
  if (traj.horizon == 1) return traj.start;
  const double f = step / static_cast<double>(traj.horizon - 1);
  return {traj.start.x + f * (traj.end.x - traj.start.x),
          traj.start.y + f * (traj.end.y - traj.start.y),
          traj.start.g + f * (traj.end.g - traj.start.g)};
}

}  // namespace uavpc
