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

#ifndef PROBMETRO_PARALLEL_H
#define PROBMETRO_PARALLEL_H

#include <cstddef>
#include <functional>

namespace probmetro {

// Runs body(i) for i in [0, count) on at most max_threads workers.
// max_threads <= 1 runs inline. The first exception thrown is rethrown.
void parallel_for(std::size_t count, int max_threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace probmetro

#endif  // PROBMETRO_PARALLEL_H
