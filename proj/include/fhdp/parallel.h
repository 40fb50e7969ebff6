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

// Minimal fork-join helpers. Work is split into contiguous index blocks, so
// results written by index are independent of the worker count.

#ifndef FHDP_PARALLEL_H_
#define FHDP_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace fhdp {

// Worker count from FHDP_WORKERS, else the hardware concurrency, at least 1.
int DefaultWorkers();

// Overrides the process-wide default. Zero restores the environment value.
void SetDefaultWorkers(int workers);

// Calls fn(i) for i in [0, n). fn must only write state owned by index i.
void ParallelFor(size_t n, const std::function<void(size_t)>& fn,
                 int workers = 0);

}  // namespace fhdp

#endif  // FHDP_PARALLEL_H_
