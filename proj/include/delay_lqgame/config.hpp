// Copyright 2026 The delay-lqgame Authors
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

// Experiment configuration documents and the bundled experiment presets.
//
// Document schema (unknown keys are rejected everywhere):
//
//   {
//     "plant":   {"A": [[...], ...], "B": [M x N, ...],
//                 "delays": [tau | {"sc": .., "ca": ..}, ...], "h": h},
//     "weights": {"Q": [...], "QN": [...] (optional, defaults to Q),
//                 "R": [...], "horizon": N},
//     "x0":      [...]              (optional, defaults to zeros),
//     "scheme":  "proposed"         (optional),
//     "sweep":   {"delays_grid": [[...], [...]]}  (optional)
//   }

#include <filesystem>
#include <string>
#include <string_view>

#include "delay_lqgame/model.hpp"

namespace delay_lqgame {

/// Parses and validates a configuration document. Throws ParseError for
/// schema violations and ValidationError for invariant violations.
ExperimentConfig load_config(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Inverse of load_config; delays are written pre-summed, QN explicitly.
std::string serialize_config(const ExperimentConfig& config);

/// Two-state, two-controller benchmark: A = [[0, 1], [-3, -4]],
/// B_1 = B_2 = [0; 1], Q_i = QN_i = 100 I, R_i = 1, h = 0.05, N = 50,
/// x0 = [1, 0], delays 0.01 each, sweep grid {0, 0.004, ..., 0.02}^2.
ExperimentConfig preset_generic();

/// Nine-state two-area load frequency control model with
/// x = [df1 dPg1 dXg1 df2 dPg2 dXg2 dPtie dPc1 dPc2], T12 = 2.4, Kp = 1,
/// Tp = 0.2, Tt = 0.3, Tg = 0.08, r = 0.2545, R_i = 1, h = 0.01, N = 50.
/// Controller i drives dPc_i. Only dPtie is weighted. x0 is a 0.1 frequency
/// deviation in area 1; sweep grid {0, 0.008/3, 0.016/3, 0.008}^2.
ExperimentConfig preset_lfc();

}  // namespace delay_lqgame
