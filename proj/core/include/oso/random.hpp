// Copyright 2026 The OSO Bandit Authors.
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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace oso {

// SplitMix64 finalizer. Used to turn (key, id) pairs into well-separated
// engine seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// A seed-addressed random stream.
///
/// Every stream carries a 64-bit key. `substream(id)` derives a child whose
/// key depends only on the parent key and `id`, never on how many numbers the
/// parent has produced. Simulations address randomness by logical coordinates
/// (link, coherence interval, Monte Carlo chunk) so results do not depend on
/// evaluation order or thread count.
class RandomStream {
 public:
  using engine_type = std::mt19937_64;

  explicit RandomStream(std::uint64_t key) : key_(key), engine_(mix64(key)) {}

  std::uint64_t key() const { return key_; }

  RandomStream substream(std::uint64_t id) const {
    return RandomStream(mix64(key_ ^ mix64(id + 0x632BE59BD9B4E019ull)));
  }
  RandomStream substream(std::uint64_t a, std::uint64_t b) const {
    return substream(a).substream(b);
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  // Circularly-symmetric CN(0,1): real and imaginary parts each N(0, 1/2).
  std::complex<double> complex_normal() {
    constexpr double kScale = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kScale * re, kScale * im};
  }

  // Gamma with the given shape and *rate*.
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }

  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  engine_type& engine() { return engine_; }

 private:
  std::uint64_t key_;
  engine_type engine_;
};

}  // namespace oso
