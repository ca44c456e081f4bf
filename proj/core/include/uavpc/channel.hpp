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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "uavpc/env.hpp"
#include "uavpc/rng.hpp"

namespace uavpc {

using cdouble = std::complex<double>;

enum class Direction { BtU = 0, UtB = 1 };

const char* to_string(Direction dir);

struct RadioConfig {
  double carrier_ghz = 2.0;
  int K = 8;
  double gt_dbi = 1.0;  // UAV antenna
  double gr_dbi = 1.0;  // receive gain, both ends
  double rician_db = 15.0;
  Position bs{0.25, 0.375, 0.025};
  double downtilt_deg = 0.0;
  double bs_azimuth_deg = 0.0;  // boresight azimuth, counter-clockwise from +x

  // BS element pattern.
  double element_gain_max_dbi = 8.0;
  double beamwidth_3db_deg = 65.0;
  double front_back_db = 30.0;  // A_m
  double side_lobe_db = 30.0;   // SLA_V

  // Path-loss formulas are undefined at zero height; lower altitudes are
  // evaluated at this height.
  double min_uav_height_m = 1.5;

  void validate() const;
};

// Urban-macro aerial path loss in dB. LoS: 28 + 22 log10 d + 20 log10 fc.
// NLoS: -17.5 + (46 - 7 log10 h) log10 d + 20 log10(40 pi fc / 3).
double path_loss_db(double d3d_m, double h_uav_m, bool los, double fc_ghz);

// Element gain (dBi) of a BS antenna element towards the UAV.
double bs_element_gain_db(const Position& bs, const Position& uav,
                          const RadioConfig& cfg);

// One small-scale fading draw with unit mean-square. NLoS: Rayleigh;
// LoS: Rician with K-factor rician_db (+inf gives the deterministic 1).
cdouble sample_fading(bool los, double rician_db, Rng& rng);

struct ChannelVector {
  Direction dir = Direction::BtU;
  int slot = 0;
  std::vector<cdouble> h;      // per-antenna channel amplitude
  std::vector<cdouble> theta;  // h * D^2
  double distance_m = 0.0;
  bool los = false;

  std::size_t size() const { return h.size(); }
};

// Gains and path loss shared by all antennas, as a linear amplitude.
double large_scale_amplitude(Direction dir, const Position& uav,
                             const EnvMap& env, const RadioConfig& cfg,
                             bool* los_out = nullptr);

// Channel for a UAV at `uav` with the given per-antenna fading factors.
ChannelVector synthesize_channel(Direction dir, const Position& uav,
                                 const EnvMap& env, const RadioConfig& cfg,
                                 std::span<const cdouble> fading, int slot = 0);

// Deterministic part of the channel (all fading factors equal to one).
ChannelVector large_scale_channel(Direction dir, const Position& uav,
                                  const EnvMap& env, const RadioConfig& cfg,
                                  int slot = 0);

// Ground-truth channel at slot t; fading drawn independently per antenna
// from `rng`.
ChannelVector true_channel(int t, Direction dir, const EnvMap& env,
                           const Trajectory& traj, const RadioConfig& cfg,
                           Rng& rng);

ChannelVector true_channel_at(const Position& uav, int slot, Direction dir,
                              const EnvMap& env, const RadioConfig& cfg,
                              Rng& rng);

// CSV header and rows for channel traces:
// t,dir,k,re_h,im_h,re_theta,im_theta,D_m,los
std::string channel_trace_header();
std::string channel_trace_rows(const ChannelVector& ch);

}  // namespace uavpc
