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
#ifndef PROBMETRO_PROBE_OPTIMIZER_H
#define PROBMETRO_PROBE_OPTIMIZER_H

#include <string>

#include "probmetro/spin_blocks.h"

namespace probmetro {

enum class ProbeMode { kMulticopy, kAsymptoticOptimal, kConjectured, kNumericOptimal };

ProbeMode parse_probe_mode(const std::string& name);
std::string probe_mode_name(ProbeMode mode);

struct ProbeOptimizationOptions {
  double S = 1.0;            // success probability of the re-optimized measurement
  double tolerance = 1e-8;   // stop once sigma^2 moves less than this
  int max_iterations = 200;
  int max_n = 60;
};

struct ProbeOptimization {
  ProbeSpec probe;
  double sigma2 = 0.0;
  int iterations = 0;
};

// Alternates a probe update at fixed filters with measurement
// re-optimization. At S = 1 the probe step is exact (Perron vector).
ProbeOptimization optimize_probe(int n, double r,
                                 const ProbeOptimizationOptions& options = {});

// sigma^2 of the optimal measurement at success S for a given probe.
double probe_precision(const ProbeSpec& probe, const NoiseModel& noise,
                       double S = 1.0);

ProbeSpec make_probe(ProbeMode mode, int n, double r,
                     const ProbeOptimizationOptions& options = {});

}  // namespace probmetro

#endif  // PROBMETRO_PROBE_OPTIMIZER_H
