#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"

using namespace ulam::combinat;

namespace {

// O(N^2) dynamic program.
int lis_quadratic(const std::vector<int>& a) {
  std::vector<int> best(a.size(), 1);
  int out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (a[j] < a[i]) best[i] = std::max(best[i], best[j] + 1);
    }
    out = std::max(out, best[i]);
  }
  return out;
}

// Standard Young tableaux by removing the largest entry from each corner.
long long syt_recursive(std::vector<int> mu) {
  while (!mu.empty() && mu.back() == 0) mu.pop_back();
  if (mu.empty()) return 1;
  long long total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const bool corner = i + 1 == mu.size() || mu[i + 1] < mu[i];
    if (!corner) continue;
    auto smaller = mu;
    --smaller[i];
    total += syt_recursive(smaller);
  }
  return total;
}

// Partitions of n with parts <= k by the usual coin-change recursion.
long long partitions_bounded(int n, int k) {
  std::vector<long long> ways(static_cast<std::size_t>(n) + 1, 0);
  ways[0] = 1;
  for (int part = 1; part <= k; ++part) {
    for (int w = part; w <= n; ++w) ways[static_cast<std::size_t>(w)] += ways[static_cast<std::size_t>(w - part)];
  }
  return ways[static_cast<std::size_t>(n)];
}

}  // namespace

TEST_CASE("patience sorting agrees with the quadratic recursion") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 40;
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    std::shuffle(v.begin(), v.end(), gen);
    CHECK(lis_length(Permutation(v)) == lis_quadratic(v));
  }
  CHECK(lis_length(Permutation::identity(9)) == 9);
  CHECK(lis_length(Permutation::reversal(9)) == 1);
  CHECK(lis_length(Permutation({3, 1, 2})) == 2);
}

TEST_CASE("patience sorting on doubles is strict") {
  const std::vector<double> v = {0.5, 0.5, 0.7, 0.1, 0.9};
  CHECK(patience_length(std::span<const double>(v)) == 3);
}

TEST_CASE("permutation and partition validation") {
  CHECK_THROWS_AS(Permutation({1, 1, 2}), ulam::DomainError);
  CHECK_THROWS_AS(Permutation({0, 1}), ulam::DomainError);
  CHECK_THROWS_AS(Partition({1, 2}), ulam::DomainError);
  CHECK_THROWS_AS(Partition({2, 0}), ulam::DomainError);
  CHECK_THROWS_AS(Partition::parse("3,,1"), ulam::DomainError);
  CHECK(Partition::parse("3,2").to_string() == "3,2");
  CHECK(Partition::parse("").weight() == 0);
  CHECK(transpose(Partition({3, 1})) == Partition({2, 1, 1}));
}

TEST_CASE("hook formula counts tableaux") {
  for (int N = 1; N <= 10; ++N) {
    PartitionStream stream(N, N);
    while (auto mu = stream.next()) {
      std::vector<int> parts(mu->parts().begin(), mu->parts().end());
      CHECK(hook_count(*mu) == syt_recursive(parts));
      CHECK(hook_count(transpose(*mu)) == hook_count(*mu));
    }
  }
  CHECK(hook_count(Partition()) == 1);
  CHECK_THROWS_AS(hook_count(Partition({201})), ulam::CapacityError);
}

TEST_CASE("partition stream enumerates each partition once in reverse lexicographic order") {
  for (int N = 0; N <= 30; ++N) {
    for (int k : {1, 2, 5, 30}) {
      PartitionStream stream(N, k);
      long long count = 0;
      std::vector<int> previous;
      while (auto mu = stream.next()) {
        ++count;
        std::vector<int> parts(mu->parts().begin(), mu->parts().end());
        CHECK(mu->weight() == N);
        CHECK(mu->first_row() <= k);
        if (!previous.empty()) CHECK(std::lexicographical_compare(parts.begin(), parts.end(), previous.begin(), previous.end()));
        previous = parts;
      }
      CHECK(count == partitions_bounded(N, k));
      long long visited = 0;
      for_each_partition(N, k, [&](std::span<const int>) { ++visited; });
      CHECK(visited == count);
    }
  }
}

TEST_CASE("exact distribution matches enumeration of permutations") {
  for (int N = 1; N <= 8; ++N) {
    const auto brute = brute_force_distribution(N);
    for (int n = 1; n <= N; ++n) CHECK(distribution_exact(N, n) == brute[static_cast<std::size_t>(n - 1)]);
  }
  // All but the 1 + 4^2 permutations of shape (5) or (4,1).
  CHECK(distribution_exact(5, 3).to_string() == "103/120");
  CHECK(distribution_exact(12, 12).to_string() == "1/1");
  CHECK(distribution_exact(12, 1).to_string() == "1/479001600");
  CHECK_THROWS_AS(distribution_exact(61, 5), ulam::CapacityError);
  CHECK_THROWS_AS(brute_force_distribution(11), ulam::CapacityError);
}

TEST_CASE("square sums restricted by rows equal those restricted by columns") {
  for (int N = 1; N <= 20; ++N) {
    const auto by_first_row = cumulative_square_sums(N, N);
    for (int n = 1; n <= N; ++n) CHECK(square_sum_rows_at_most(N, n) == by_first_row[static_cast<std::size_t>(n - 1)]);
  }
}

TEST_CASE("exact probabilities are reduced") {
  const ExactProbability p(6, 8);
  CHECK(p.to_string() == "3/4");
  CHECK(p.to_double() == doctest::Approx(0.75));
  CHECK(ExactProbability(1, 3) <= ExactProbability(1, 2));
  CHECK_FALSE(ExactProbability(2, 3) <= ExactProbability(1, 2));
}

TEST_CASE("every permutation has a monotone run of length at least sqrt(N)") {
  // Erdos-Szekeres: LIS * LDS >= N.
  for (int N = 1; N <= 7; ++N) {
    std::vector<int> v(static_cast<std::size_t>(N));
    std::iota(v.begin(), v.end(), 1);
    do {
      std::vector<int> reversed(v.rbegin(), v.rend());
      CHECK(lis_quadratic(v) * lis_quadratic(reversed) >= N);
    } while (std::next_permutation(v.begin(), v.end()));
  }
  CHECK(erdos_szekeres_floor(101) == doctest::Approx(5.0));
}
