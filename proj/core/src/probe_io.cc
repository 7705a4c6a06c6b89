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
#include "probmetro/probe_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "probmetro/errors.h"
#include "probmetro/number_format.h"

namespace probmetro {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <typename T>
T parse_value(const std::string& text, int line_no) {
  T v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ValidationError("probe line " + std::to_string(line_no) +
                          ": cannot parse '" + text + "'");
  }
  return v;
}

}  // namespace

ProbeSpec parse_probe(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  std::vector<double> amps;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (n < 0) {
      if (line.rfind("n=", 0) != 0) {
        throw ValidationError("probe file must start with 'n=<int>'");
      }
      n = parse_value<int>(trim(line.substr(2)), line_no);
      if (n < 1) throw ValidationError("probe needs n >= 1");
      continue;
    }
    amps.push_back(parse_value<double>(line, line_no));
  }
  if (n < 0) throw ValidationError("probe file has no 'n=' header");
  return ProbeSpec::Custom(n, std::move(amps));
}

ProbeSpec read_probe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open probe file " + path);
  return parse_probe(in);
}

void write_probe(std::ostream& out, const ProbeSpec& probe,
                 const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "n=" << probe.n() << "\n";
  for (double c : probe.amplitudes()) out << format_number(c, 17) << "\n";
}

void write_probe_file(const std::string& path, const ProbeSpec& probe,
                      const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write probe file " + path);
  write_probe(out, probe, comment);
}

}  // namespace probmetro
