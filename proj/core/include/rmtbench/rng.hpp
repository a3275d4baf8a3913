// Copyright 2026 The rmtbench Authors
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

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>

namespace rmtbench {

// Counter-based Philox4x32-10 stream (Salmon et al., Random123).
//
// The 64-bit master seed is the Philox key. The 128-bit counter is split
// into a 64-bit block position (low words) and the 64-bit stream index (high
// words), so every (master_seed, stream_index) pair addresses an independent
// sequence and no state is shared between streams. Satisfies
// UniformRandomBitGenerator with 64-bit output.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
      : master_seed_(master_seed), stream_index_(stream_index) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  // Child stream keyed by (this stream's identity, child). Used to give
  // independent sub-streams to separate purposes of one ensemble member.
  RngStream substream(std::uint64_t child) const noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept;

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept;
  // Complex Gaussian with real and imaginary parts ~ Normal(0, 1/2).
  std::complex<double> complex_normal() noexcept;

 private:
  void refill() noexcept;

  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffered_words_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// One Philox4x32-10 block; exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key) noexcept;

}  // namespace rmtbench
