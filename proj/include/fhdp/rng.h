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

// Counter-based random numbers. Philox4x32-10 maps (counter, key) to four
// 32-bit words, so draw i of a stream depends only on (seed, stream, i) and
// parallel consumers can split an index range without coordination.

#ifndef FHDP_RNG_H_
#define FHDP_RNG_H_

#include <array>
#include <cstdint>

namespace fhdp {

class Philox4x32 {
 public:
  using Counter = std::array<uint32_t, 4>;
  using Key = std::array<uint32_t, 2>;

  static Counter Block(Counter counter, Key key);
};

// A stream of uniforms addressed by index.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0);

  // 64 random bits for index i.
  uint64_t Bits(uint64_t i) const;

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double Uniform(uint64_t i) const;

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

 private:
  uint64_t seed_;
  uint64_t stream_;
};

// Sequential cursor over a CounterRng for code that consumes draws in order.
class RngCursor {
 public:
  explicit RngCursor(CounterRng rng, uint64_t start = 0)
      : rng_(rng), next_(start) {}

  double NextUniform() { return rng_.Uniform(next_++); }
  uint64_t NextBits() { return rng_.Bits(next_++); }
  uint64_t position() const { return next_; }

 private:
  CounterRng rng_;
  uint64_t next_;
};

}  // namespace fhdp

#endif  // FHDP_RNG_H_
