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

#include "uavpc/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace uavpc {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }

double wrap_degrees(double deg) {
  deg = std::fmod(deg + 180.0, 360.0);
  if (deg < 0.0) deg += 360.0;
  return deg - 180.0;
}

}  // namespace

const char* to_string(Direction dir) {
  return dir == Direction::BtU ? "BtU" : "UtB";
}

void RadioConfig::validate() const {
  if (K < 1) throw std::invalid_argument("RadioConfig: K must be >= 1");
  if (!(carrier_ghz > 0.0))
    throw std::invalid_argument("RadioConfig: carrier frequency must be > 0");
  if (!(beamwidth_3db_deg > 0.0))
    throw std::invalid_argument("RadioConfig: beamwidth must be > 0");
  if (!(min_uav_height_m > 0.0))
    throw std::invalid_argument("RadioConfig: min UAV height must be > 0");
}

double path_loss_db(double d3d_m, double h_uav_m, bool los, double fc_ghz) {
  if (!(d3d_m > 0.0)) throw std::domain_error("path_loss_db: distance must be > 0");
  if (!(h_uav_m > 0.0)) throw std::domain_error("path_loss_db: height must be > 0");
  if (!(fc_ghz > 0.0)) throw std::domain_error("path_loss_db: frequency must be > 0");
  if (los) return 28.0 + 22.0 * std::log10(d3d_m) + 20.0 * std::log10(fc_ghz);
  return -17.5 + (46.0 - 7.0 * std::log10(h_uav_m)) * std::log10(d3d_m) +
         20.0 * std::log10(40.0 * std::numbers::pi * fc_ghz / 3.0);
}

double bs_element_gain_db(const Position& bs, const Position& uav,
                          const RadioConfig& cfg) {
  const double dx = uav.x - bs.x;
  const double dy = uav.y - bs.y;
  const double dg = uav.g - bs.g;
  const double horizontal = std::hypot(dx, dy);
  const double elevation_deg = std::atan2(dg, horizontal) * kDegPerRad;
  const double azimuth_deg =
      horizontal > 0.0 ? std::atan2(dy, dx) * kDegPerRad : cfg.bs_azimuth_deg;

  // Boresight points downtilt_deg below the horizon.
  const double vert_off = elevation_deg + cfg.downtilt_deg;
  const double horiz_off = wrap_degrees(azimuth_deg - cfg.bs_azimuth_deg);

  const double a_v = -std::min(
      12.0 * std::pow(vert_off / cfg.beamwidth_3db_deg, 2), cfg.side_lobe_db);
  const double a_h = -std::min(
      12.0 * std::pow(horiz_off / cfg.beamwidth_3db_deg, 2), cfg.front_back_db);
  return cfg.element_gain_max_dbi - std::min(-(a_v + a_h), cfg.front_back_db);
}

cdouble sample_fading(bool los, double rician_db, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  if (!los) return {normal(rng), normal(rng)};
  if (std::isinf(rician_db) && rician_db > 0.0) return {1.0, 0.0};
  const double kappa = std::pow(10.0, rician_db / 10.0);
  const double specular = std::sqrt(kappa / (kappa + 1.0));
  const double diffuse = std::sqrt(1.0 / (kappa + 1.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {specular + diffuse * re, diffuse * im};
}

double large_scale_amplitude(Direction dir, const Position& uav,
                             const EnvMap& env, const RadioConfig& cfg,
                             bool* los_out) {
  const double d = distance_m(uav, cfg.bs);
  if (!(d > 0.0))
    throw std::domain_error("channel: UAV coincides with the base station");
  const bool los = is_los(cfg.bs, uav, env);
  if (los_out != nullptr) *los_out = los;
  const double h_uav = std::max(uav.g * 1000.0, cfg.min_uav_height_m);
  const double pl = path_loss_db(d, h_uav, los, cfg.carrier_ghz);
  const double tx_gain = dir == Direction::BtU
                             ? bs_element_gain_db(cfg.bs, uav, cfg)
                             : cfg.gt_dbi;
  return db_to_amplitude(tx_gain) * db_to_amplitude(cfg.gr_dbi) *
         db_to_amplitude(-pl);
}

ChannelVector synthesize_channel(Direction dir, const Position& uav,
                                 const EnvMap& env, const RadioConfig& cfg,
                                 std::span<const cdouble> fading, int slot) {
  if (fading.size() != static_cast<std::size_t>(cfg.K))
    throw std::invalid_argument("synthesize_channel: need one fading factor per antenna");
  ChannelVector ch;
  ch.dir = dir;
  ch.slot = slot;
  ch.distance_m = distance_m(uav, cfg.bs);
  const double amp = large_scale_amplitude(dir, uav, env, cfg, &ch.los);
  const double d2 = ch.distance_m * ch.distance_m;
  ch.h.resize(fading.size());
  ch.theta.resize(fading.size());
  for (std::size_t k = 0; k < fading.size(); ++k) {
    ch.h[k] = amp * fading[k];
    ch.theta[k] = ch.h[k] * d2;
  }
  return ch;
}

ChannelVector large_scale_channel(Direction dir, const Position& uav,
                                  const EnvMap& env, const RadioConfig& cfg,
                                  int slot) {
  const std::vector<cdouble> ones(static_cast<std::size_t>(cfg.K), cdouble{1.0, 0.0});
  return synthesize_channel(dir, uav, env, cfg, ones, slot);
}

ChannelVector true_channel_at(const Position& uav, int slot, Direction dir,
                              const EnvMap& env, const RadioConfig& cfg,
                              Rng& rng) {
  const bool los = is_los(cfg.bs, uav, env);
  std::vector<cdouble> fading(static_cast<std::size_t>(cfg.K));
  for (auto& f : fading) f = sample_fading(los, cfg.rician_db, rng);
  return synthesize_channel(dir, uav, env, cfg, fading, slot);
}

ChannelVector true_channel(int t, Direction dir, const EnvMap& env,
                           const Trajectory& traj, const RadioConfig& cfg,
                           Rng& rng) {
  return true_channel_at(position_at(traj, t), t, dir, env, cfg, rng);
}

std::string channel_trace_header() {
  return "t,dir,k,re_h,im_h,re_theta,im_theta,D_m,los\n";
}

std::string channel_trace_rows(const ChannelVector& ch) {
  std::ostringstream os;
  os.precision(12);
  for (std::size_t k = 0; k < ch.h.size(); ++k) {
    os << ch.slot << ',' << to_string(ch.dir) << ',' << k + 1 << ','
       << ch.h[k].real() << ',' << ch.h[k].imag() << ',' << ch.theta[k].real()
       << ',' << ch.theta[k].imag() << ',' << ch.distance_m << ','
       << (ch.los ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace uavpc
