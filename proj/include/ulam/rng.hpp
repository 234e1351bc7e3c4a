#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace ulam::rng {

using Counter = std::array<std::uint64_t, 4>;
using Key = std::array<std::uint64_t, 2>;

// Philox4x64 with 10 rounds (Salmon et al., SC'11); bit-compatible with the
// Random123 reference and numpy's Philox bit generator.
Counter philox4x64(Counter counter, Key key);

struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  friend bool operator==(const SeededStream&, const SeededStream&) = default;
};

// Draws for one sample: key (seed, stream_id), counter (block, sample_index,
// 0, 0). Each sample owns a disjoint counter range, so any partition of the
// sample indices across workers reproduces the same values.
class SampleEngine {
 public:
  using result_type = std::uint64_t;

  SampleEngine(SeededStream stream, std::uint64_t sample_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on {0, ..., bound - 1} by Lemire's multiply-and-reject; no
  // modulo bias. Requires bound >= 1.
  std::uint64_t bounded(std::uint64_t bound);
  // Poisson(mean): sequential inversion below 30, PTRS (Hormann 1993) above.
  std::uint64_t poisson(double mean);

 private:
  Key key_;
  Counter counter_;
  Counter block_{};
  int used_ = 4;
};

}  // namespace ulam::rng
