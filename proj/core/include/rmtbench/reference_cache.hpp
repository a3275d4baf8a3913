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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>

#include "rmtbench/rmt_stats.hpp"

namespace rmtbench {

// Binary cache file: magic "RMTREF01", then little-endian u64 N, r, seed,
// stream, sample_count, followed by sample_count sorted doubles.
void save_reference(const std::filesystem::path& path, const ReferenceOutputDistribution& ref);
// Throws kIoError / kMalformedInput.
ReferenceOutputDistribution load_reference(const std::filesystem::path& path);

// Build-once, read-many store of reference distributions keyed by
// (N, r, seed, sample_count). Concurrent requests for one key compute it once.
// With a directory, entries are loaded from and persisted to disk.
class ReferenceCache {
 public:
  using Handle = std::shared_ptr<const ReferenceOutputDistribution>;

  explicit ReferenceCache(std::optional<std::filesystem::path> directory = std::nullopt);

  Handle get(std::size_t N, std::size_t r, std::uint64_t seed, std::size_t sample_count);

  std::optional<std::filesystem::path> file_for(std::size_t N, std::size_t r, std::uint64_t seed,
                                                std::size_t sample_count) const;

 private:
  using Key = std::tuple<std::size_t, std::size_t, std::uint64_t, std::size_t>;

  Handle build(const Key& key) const;

  std::optional<std::filesystem::path> directory_;
  std::mutex mutex_;
  std::map<Key, std::shared_future<Handle>> entries_;
};

}  // namespace rmtbench
