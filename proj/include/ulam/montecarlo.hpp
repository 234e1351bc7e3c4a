#pragma once

#include <cstdint>
#include <vector>

#include "ulam/painleve.hpp"
#include "ulam/rng.hpp"

namespace ulam::montecarlo {

using rng::SeededStream;

enum class SampleKind { Lis, Hammersley };

struct SampleStats {
  SampleKind kind = SampleKind::Lis;
  // N for permutation samples, lambda for Hammersley samples.
  double parameter = 0.0;
  bool scaled = false;
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations
  // Sorted ascending; the empirical CDF is the right-continuous step
  // function through these points.
  std::vector<double> samples;
  std::vector<SeededStream> seed_record;
  // Sample indices [first, first + count) drawn from seed_record.front().
  std::uint64_t first_index = 0;

  // Unbiased; zero for fewer than two samples.
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  // Fraction of samples <= x.
  double empirical_cdf(double x) const;
};

// Samples first..first+count-1 of the stream. Sample i shuffles {1..N}
// with Fisher-Yates driven by SampleEngine(stream, i) and records its LIS.
SampleStats sample_lis_range(int N, std::uint64_t first, std::uint64_t count, SeededStream stream);

// All samples 0..samples-1, split into `shards` contiguous index ranges run
// on separate threads and merged in index order. The result does not depend
// on `shards`.
SampleStats sample_lis(int N, std::uint64_t samples, SeededStream stream, int shards = 1);

// L(lambda): K ~ Poisson(lambda) uniform points in the unit square (the
// sqrt(lambda) scale does not change the order structure), LIS of the second
// coordinates after sorting by the first.
SampleStats sample_hammersley_range(double lambda, std::uint64_t first, std::uint64_t count, SeededStream stream);
SampleStats sample_hammersley(double lambda, std::uint64_t samples, SeededStream stream, int shards = 1);

// Combines two batches (pairwise update of mean and m2, merged sorted
// samples). Throws UsageError for batches of different kinds or parameters.
SampleStats merge(const SampleStats& a, const SampleStats& b);

// x -> (x - 2 sqrt N) / N^{1/6}. Throws UsageError when the stats were not
// drawn at this N or are already scaled.
SampleStats scaled_samples(const SampleStats& stats, int N);

// sup_x |F_n(x) - F(x)| with F interpolated from the table; samples outside
// the grid are clipped to its ends. Throws DomainError for empty stats.
double ks_distance(const SampleStats& stats, const painleve::TracyWidomTable& table);

// Draws from F itself by inverting the interpolated table.
SampleStats sample_from_table(const painleve::TracyWidomTable& table, std::uint64_t samples, SeededStream stream);

struct SweepPoint {
  int N = 0;
  SampleStats stats;
};

struct LimitConstants {
  double c0 = 0.0, c0_stderr = 0.0;  // Var(l_N) ~ c0 N^{1/3}
  double c1 = 0.0, c1_stderr = 0.0;  // E(l_N) - 2 sqrt N ~ c1 N^{1/6}
};

// Least squares through the origin. Throws UsageError for fewer than three
// points or N not strictly increasing.
LimitConstants estimate_limit_constants(const std::vector<SweepPoint>& sweep);

}  // namespace ulam::montecarlo
