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

#include "rmtbench/reference_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "rmtbench/errors.hpp"

namespace rmtbench {
namespace {

constexpr std::array<char, 8> kMagic = {'R', 'M', 'T', 'R', 'E', 'F', '0', '1'};

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw Error(ErrorCode::kMalformedInput, "truncated reference file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes[i]} << (8 * i);
  return v;
}

}  // namespace

void save_reference(const std::filesystem::path& path, const ReferenceOutputDistribution& ref) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp);
    out.write(kMagic.data(), kMagic.size());
    write_u64(out, ref.params.N);
    write_u64(out, ref.params.r);
    write_u64(out, ref.seed);
    write_u64(out, ref.stream);
    write_u64(out, ref.samples.size());
    for (double x : ref.samples.samples()) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      write_u64(out, bits);
    }
    if (!out) throw Error(ErrorCode::kIoError, "failed writing " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ReferenceOutputDistribution load_reference(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw Error(ErrorCode::kMalformedInput, path.string() + " is not a reference cache file");
  const auto n = read_u64(in);
  const auto r = read_u64(in);
  const auto seed = read_u64(in);
  const auto stream = read_u64(in);
  const auto count = read_u64(in);
  if (count == 0 || count > (std::uint64_t{1} << 34))
    throw Error(ErrorCode::kMalformedInput, "implausible sample count in " + path.string());
  std::vector<double> samples(count);
  for (auto& x : samples) {
    const std::uint64_t bits = read_u64(in);
    std::memcpy(&x, &bits, sizeof x);
  }
  return ReferenceOutputDistribution{make_mp_params(n, r), EmpiricalDistribution(std::move(samples)), count, seed,
                                     stream};
}

ReferenceCache::ReferenceCache(std::optional<std::filesystem::path> directory) : directory_(std::move(directory)) {}

std::optional<std::filesystem::path> ReferenceCache::file_for(std::size_t N, std::size_t r, std::uint64_t seed,
                                                              std::size_t sample_count) const {
  if (!directory_) return std::nullopt;
  return *directory_ / ("reference_N" + std::to_string(N) + "_r" + std::to_string(r) + "_seed" +
                        std::to_string(seed) + "_n" + std::to_string(sample_count) + ".bin");
}

ReferenceCache::Handle ReferenceCache::build(const Key& key) const {
  const auto [n, r, seed, count] = key;
  if (auto file = file_for(n, r, seed, count); file && std::filesystem::exists(*file)) {
    auto loaded = load_reference(*file);
    if (loaded.params.N == n && loaded.params.r == r && loaded.seed == seed && loaded.sample_count == count)
      return std::make_shared<const ReferenceOutputDistribution>(std::move(loaded));
  }
  auto ref = std::make_shared<const ReferenceOutputDistribution>(
      reference_output_distribution(make_mp_params(n, r), count, RngStream(seed, 0)));
  if (auto file = file_for(n, r, seed, count)) {
    std::filesystem::create_directories(*directory_);
    save_reference(*file, *ref);
  }
  return ref;
}

ReferenceCache::Handle ReferenceCache::get(std::size_t N, std::size_t r, std::uint64_t seed,
                                           std::size_t sample_count) {
  const Key key{N, r, seed, sample_count};
  std::promise<Handle> promise;
  std::shared_future<Handle> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      future = promise.get_future().share();
      entries_.emplace(key, future);
      owner = true;
    } else {
      future = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(build(key));
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(mutex_);
      entries_.erase(key);
    }
  }
  return future.get();
}

}  // namespace rmtbench
