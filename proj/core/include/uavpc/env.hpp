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
#include <span>
#include <string>
#include <vector>

namespace uavpc {

// Cartesian position in kilometres; `g` is the altitude above ground.
struct Position {
  double x = 0.0;
  double y = 0.0;
  double g = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Euclidean distance in metres.
double distance_m(const Position& a, const Position& b);

// Statistical description of the built-up area (ITU-R P.1410 style).
struct BuildingParams {
  double alpha = 0.3;           // fraction of land covered by buildings
  double beta_per_km2 = 300.0;  // buildings per square kilometre
  double sigma_m = 30.0;        // Rayleigh scale of the building heights
  double height_clip_m = 40.0;  // heights are clipped to this value
  double area_side_km = 1.0;    // the region is [0, side] x [0, side]

  void validate() const;
  double footprint_side_m() const;
};

struct Building {
  double cx_m = 0.0;
  double cy_m = 0.0;
  double side_m = 0.0;
  double height_m = 0.0;
};

class EnvMap {
 public:
  EnvMap() = default;
  EnvMap(double region_km, std::uint64_t seed, std::vector<Building> buildings);

  double region_km() const { return region_km_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Building>& buildings() const { return buildings_; }

  double built_area_fraction() const;
  double max_height_m() const;
  bool contains(const Position& p) const;

  friend bool operator==(const EnvMap&, const EnvMap&);

 private:
  double region_km_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<Building> buildings_;
};

bool operator==(const Building& a, const Building& b);

// Builds round(beta * area) square buildings of side 1000*sqrt(alpha/beta) m
// on a regular grid. Which grid cells are occupied and how tall each building
// is are drawn from `seed`. Grid cells whose footprint would contain one of
// `clear_sites` (e.g. the base-station mast) are never occupied.
EnvMap generate_env(const BuildingParams& params, std::uint64_t seed,
                    std::span<const Position> clear_sites = {});

// True when the straight segment a-b passes strictly above every building
// footprint it crosses. Symmetric in (a, b).
bool is_los(const Position& a, const Position& b, const EnvMap& env);

void save_env(const EnvMap& env, const std::filesystem::path& path);
EnvMap load_env(const std::filesystem::path& path);
std::string env_to_json(const EnvMap& env);
EnvMap env_from_json(const std::string& text);

struct Trajectory {
  enum class Kind { Circular, VerticalAscent };

  Kind kind = Kind::Circular;
  int horizon = 100;  // T, number of slots

  // Circular (C2T).
  Position center{0.5, 0.5, 0.05};
  double radius_km = 0.375;
  double revolutions = 1.0;  // full turns over the horizon
  double start_phase_rad = 0.0;
  bool clockwise = false;

  // Vertical ascent (VAT).
  Position start{0.5, 0.5, 0.0};
  Position end{0.5, 0.5, 0.35};

  static Trajectory circular(Position center, double radius_km, int horizon);
  static Trajectory vertical_ascent(Position start, Position end, int horizon);

  void validate() const;
};

// Position at slot t, 1 <= t <= horizon.
Position position_at(const Trajectory& traj, int t);

}  // namespace uavpc
