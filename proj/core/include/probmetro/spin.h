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

#ifndef PROBMETRO_SPIN_H
#define PROBMETRO_SPIN_H

#include <compare>

namespace probmetro {

// Half-integer spin, stored doubled so odd qubit counts stay integral.
class Spin {
 public:
  constexpr Spin() = default;
  static constexpr Spin FromTwice(int twice) { return Spin(twice); }
  static constexpr Spin MaxForQubits(int n) { return Spin(n); }

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  // Number of magnetic sublevels, 2j+1.
  constexpr int dim() const { return twice_ + 1; }

  // Twice m for the i-th sublevel, i = 0 is m = -j.
  constexpr int twice_m(int i) const { return 2 * i - twice_; }
  // Sublevel index of twice m.
  constexpr int index_of(int twice_m) const { return (twice_m + twice_) / 2; }

  friend constexpr auto operator<=>(Spin, Spin) = default;

 private:
  constexpr explicit Spin(int twice) : twice_(twice) {}
  int twice_ = 0;
};

}  // namespace probmetro

#endif  // PROBMETRO_SPIN_H
