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
#ifndef PROBMETRO_PROBE_IO_H
#define PROBMETRO_PROBE_IO_H

#include <iosfwd>
#include <string>

#include "probmetro/spin_blocks.h"

namespace probmetro {

// Text format: a line "n=<int>", then n+1 amplitudes for m = J down to -J,
// one per line. '#' starts a comment. Throws ValidationError.
ProbeSpec parse_probe(std::istream& in);
ProbeSpec read_probe_file(const std::string& path);

void write_probe(std::ostream& out, const ProbeSpec& probe,
                 const std::string& comment = "");
void write_probe_file(const std::string& path, const ProbeSpec& probe,
                      const std::string& comment = "");

}  // namespace probmetro

#endif  // PROBMETRO_PROBE_IO_H
