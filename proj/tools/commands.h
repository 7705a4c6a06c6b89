// Copyright 2021 Google LLC
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef PROBMETRO_TOOLS_COMMANDS_H
#define PROBMETRO_TOOLS_COMMANDS_H

#include <cstdint>
#include <ostream>
#include <string>

namespace probmetro::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSolver = 3;

struct RunConfig {
  int n = 0;  // 0: take it from the probe file
  double r = 0.8;
  bool r_given = false;
  std::string probe = "multicopy";
  std::string s_grid = "default";
  std::string solver = "activeset";
  std::string format = "csv";
  bool format_given = false;
  int threads = 1;
  std::uint64_t seed = 1;
  // probe
  std::string mode = "multicopy";
  double S = 1.0;
  // ultimate, asymptote
  std::string n_list;
  std::string quantity = "all";
  double s_bar = 0.3;
  // verify
  std::string inject_fault;
};

int cmd_decompose(const RunConfig& config, std::ostream& out);
int cmd_tradeoff(const RunConfig& config, std::ostream& out);
int cmd_ultimate(const RunConfig& config, std::ostream& out);
int cmd_scavenge(const RunConfig& config, std::ostream& out);
int cmd_asymptote(const RunConfig& config, std::ostream& out);
int cmd_probe(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);

}  // namespace probmetro::cli

#endif  // PROBMETRO_TOOLS_COMMANDS_H
