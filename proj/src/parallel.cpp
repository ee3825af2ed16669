// Copyright 2026 The signvmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "signvmc/parallel.hpp"

#include <atomic>
#include <string>

namespace signvmc {
namespace {

std::atomic<int> &configured() {
  static std::atomic<int> value{0};
  return value;
}

}  // namespace

int default_thread_count() {
  if (const char *env = std::getenv("SIGNVMC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (...) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void set_thread_count(int n) { configured().store(n > 0 ? n : 0); }

int thread_count() {
  const int n = configured().load();
  return n > 0 ? n : default_thread_count();
}

}  // namespace signvmc
