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
#include "table.h"

#include <cmath>
#include <string>

#include "json.hpp"
#include "probmetro/errors.h"
#include "probmetro/number_format.h"

namespace probmetro::cli {
namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* b = std::get_if<bool>(&cell)) return *b ? "true" : "false";
  return std::get<std::string>(cell);
}

// Round through the 12-digit text so JSON and CSV carry the same value.
nlohmann::json cell_json(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return std::stod(format_number(*d));
  }
  if (const auto* i = std::get_if<long long>(&cell)) return *i;
  if (const auto* b = std::get_if<bool>(&cell)) return *b;
  return std::get<std::string>(cell);
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ValidationError("unknown output format '" + name + "'");
}

void write_table(std::ostream& out, const Table& table, Format format) {
  if (format == Format::kCsv) {
    for (const auto& [key, value] : table.meta) {
      out << "# " << key << "=" << cell_text(value) << "\n";
    }
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        out << (c ? "," : "") << cell_text(row[c]);
      }
      out << "\n";
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.meta) doc["meta"][key] = cell_json(value);
  doc["columns"] = table.columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json item = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
      item[table.columns[c]] = cell_json(row[c]);
    }
    doc["rows"].push_back(std::move(item));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace probmetro::cli
