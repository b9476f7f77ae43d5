/**
 * Copyright 2026 The ironykit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace irony {

enum class ErrorCode {
  io = 1,
  format = 2,
  invalid_argument = 3,
  state = 4,
  numeric = 5,
};

/// Domain error carrying a coarse code for the C API boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

namespace log {
/// Non-fatal diagnostics (duplicate vocab entries, clamped parameters, ...).
/// The handler is process-global; tests install a capturing handler.
void warn(const std::string& msg);
void set_handler(std::function<void(const std::string&)> handler);
void reset_handler();
}  // namespace log

/// Deterministic RNG. All sampling goes through explicit algorithms on the
/// mt19937_64 stream so results are identical across standard libraries
/// (std::uniform_int_distribution and friends are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n) via rejection sampling.
  std::size_t index(std::size_t n);

  /// Standard normal via Box-Muller (one value per two draws).
  double normal();

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

/// FNV-1a 64-bit over a byte buffer; used for file digests in run manifests
/// and vocabulary fingerprints in model files.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Fixed-point percentage with one decimal, e.g. 67.0.
std::string format_pct(double v);

std::string trim(const std::string& s);
std::vector<std::string> split_ws(const std::string& s);

}  // namespace irony
