// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace qchan::rng {

/// Philox4x32-10 counter-based generator. The key is the 64-bit seed; the
/// high half of the counter is the stream index, so (seed, stream) pairs give
/// independent, platform-stable sequences.
class Philox {
 public:
  using result_type = std::uint64_t;

  Philox(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Raw block for counter value (ctr, stream) under the given key.
  static std::array<std::uint32_t, 4> block(std::uint64_t seed, std::uint64_t ctr, std::uint64_t stream);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 2;  // 64-bit words consumed from buf_
};

/// Poisson variate: inversion below mean 30, PTRS transformed rejection above.
std::uint64_t poisson(Philox& g, double mean);

}  // namespace qchan::rng
