//
// Copyright 2026 The FHDP Authors.
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
//

#include "fhdp/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fhdp {
namespace {

std::atomic<int> g_override{0};

int WorkersFromEnvironment() {
  if (const char* env = std::getenv("FHDP_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int DefaultWorkers() {
  const int forced = g_override.load();
  return forced > 0 ? forced : WorkersFromEnvironment();
}

void SetDefaultWorkers(int workers) { g_override.store(std::max(0, workers)); }

void ParallelFor(size_t n, const std::function<void(size_t)>& fn, int workers) {
  if (workers <= 0) workers = DefaultWorkers();
  const size_t w = std::min<size_t>(static_cast<size_t>(workers), n);
  if (w <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (size_t t = 0; t < w; ++t) {
    const size_t lo = n * t / w;
    const size_t hi = n * (t + 1) / w;
    threads.emplace_back([lo, hi, &fn] {
      for (size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace fhdp
