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
#ifndef PROBMETRO_TOOLS_TABLE_H
#define PROBMETRO_TOOLS_TABLE_H

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace probmetro::cli {

using Cell = std::variant<double, long long, std::string, bool>;

// Rows of numbers plus "# key=value" metadata, written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> meta;

  void add_meta(std::string key, Cell value) {
    meta.emplace_back(std::move(key), std::move(value));
  }
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& name);
void write_table(std::ostream& out, const Table& table, Format format);

}  // namespace probmetro::cli

#endif  // PROBMETRO_TOOLS_TABLE_H
