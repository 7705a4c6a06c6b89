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

#ifndef PROBMETRO_NUMBER_FORMAT_H
#define PROBMETRO_NUMBER_FORMAT_H

#include <string>

namespace probmetro {

// Locale independent %.<digits>g. nan and inf print as "nan", "inf", "-inf".
std::string format_number(double x, int significant_digits = 12);

}  // namespace probmetro

#endif  // PROBMETRO_NUMBER_FORMAT_H
