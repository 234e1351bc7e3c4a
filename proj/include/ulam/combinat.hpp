#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ulam::combinat {

using BigCount = boost::multiprecision::cpp_int;

// One-line notation of a bijection of {1..n}.
class Permutation {
 public:
  // Throws DomainError unless `values` is a bijection of {1..values.size()}.
  explicit Permutation(std::vector<int> values);
  static Permutation identity(int n);
  static Permutation reversal(int n);

  std::size_t size() const { return values_.size(); }
  std::span<const int> values() const { return values_; }

 private:
  std::vector<int> values_;
};

// Weakly decreasing sequence of positive parts. The empty partition has
// weight 0 and no rows.
class Partition {
 public:
  Partition() = default;
  // Throws DomainError unless parts are positive and weakly decreasing.
  explicit Partition(std::vector<int> parts);

  std::span<const int> parts() const { return parts_; }
  int weight() const { return weight_; }
  int rows() const { return static_cast<int>(parts_.size()); }
  int first_row() const { return parts_.empty() ? 0 : parts_.front(); }

  // Comma-separated parts, e.g. "3,2"; the empty partition is "".
  std::string to_string() const;
  static Partition parse(std::string_view text);

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

// Exact probability kept in lowest terms.
class ExactProbability {
 public:
  ExactProbability(BigCount numerator, BigCount denominator);

  const BigCount& numerator() const { return numerator_; }
  const BigCount& denominator() const { return denominator_; }
  double to_double() const;
  // "numerator/denominator"
  std::string to_string() const;

  friend bool operator==(const ExactProbability&, const ExactProbability&) = default;
  friend bool operator<=(const ExactProbability& a, const ExactProbability& b) {
    return a.numerator_ * b.denominator_ <= b.numerator_ * a.denominator_;
  }

 private:
  BigCount numerator_;
  BigCount denominator_;
};

struct Limits {
  int hook_weight = 200;
  int exact_weight = 60;
  int brute_force = 10;
};

// Number of piles left by patience sorting, i.e. the length of the longest
// strictly increasing subsequence. Each value goes on the leftmost pile whose
// top is >= value (lower_bound); for distinct values this is the usual strict
// convention. `tops` is scratch space that callers may reuse across calls.
template <class T>
int patience_length(std::span<const T> values, std::vector<T>& tops) {
  tops.clear();
  for (const T& v : values) {
    const auto pos = static_cast<std::size_t>(std::lower_bound(tops.begin(), tops.end(), v) - tops.begin());
    if (pos == tops.size()) {
      tops.push_back(v);
    } else {
      tops[pos] = v;
    }
  }
  return static_cast<int>(tops.size());
}

template <class T>
int patience_length(std::span<const T> values) {
  std::vector<T> tops;
  return patience_length(values, tops);
}

int lis_length(const Permutation& p);

Partition transpose(const Partition& mu);

// f(mu), the number of standard Young tableaux of shape mu, from the
// Frobenius-Young product N! prod_{i<j}(h_i - h_j) / prod h_i! with
// h_j = mu_j + r - j. Throws CapacityError above `weight_limit`.
BigCount hook_count(const Partition& mu, int weight_limit = Limits{}.hook_weight);

// Partitions of `weight` with first row at most `max_first_row`, produced in
// reverse lexicographic order: (3,2), (3,1,1), (2,2,1), ... Restartable only
// by constructing a new stream.
class PartitionStream {
 public:
  PartitionStream(int weight, int max_first_row);
  std::optional<Partition> next();

 private:
  std::vector<int> current_;
  int weight_;
  int max_part_;
  bool started_ = false;
  bool done_ = false;
};

// Visits the same partitions as PartitionStream without materialising
// Partition objects; the span is valid only during the callback.
template <class Visitor>
void for_each_partition(int weight, int max_first_row, Visitor&& visit) {
  if (weight < 0 || max_first_row < 1) return;
  if (weight == 0) {
    visit(std::span<const int>{});
    return;
  }
  std::vector<int> a;
  a.reserve(static_cast<std::size_t>(weight));
  const int top = std::min(weight, max_first_row);
  for (int rest = weight; rest > 0; rest -= std::min(rest, top)) a.push_back(std::min(rest, top));
  for (;;) {
    visit(std::span<const int>(a));
    // Rightmost part greater than one.
    int i = static_cast<int>(a.size()) - 1;
    int ones = 0;
    while (i >= 0 && a[static_cast<std::size_t>(i)] == 1) {
      ++ones;
      --i;
    }
    if (i < 0) return;
    const int v = a[static_cast<std::size_t>(i)] - 1;
    a.resize(static_cast<std::size_t>(i));
    a.push_back(v);
    int rest = ones + 1;
    while (rest > 0) {
      const int part = std::min(rest, v);
      a.push_back(part);
      rest -= part;
    }
  }
}

// sum over mu |- weight with mu_1 <= n of f(mu)^2, for n = 1..max_n
// (index n - 1). Entries for n >= weight equal weight!.
std::vector<BigCount> cumulative_square_sums(int weight, int max_n, int weight_limit = Limits{}.exact_weight);

// Same sum restricted by the number of rows instead of the first row.
BigCount square_sum_rows_at_most(int weight, int max_rows, int weight_limit = Limits{}.exact_weight);

// q_{n,N} = P(l_N <= n) = (sum_{mu |- N, mu_1 <= n} f(mu)^2) / N!.
// Throws CapacityError for N above `weight_limit`.
ExactProbability distribution_exact(int N, int n, int weight_limit = Limits{}.exact_weight);

// q_{n,N} for n = 1..N by enumerating all N! permutations (index n - 1).
// Throws CapacityError above `limit`.
std::vector<ExactProbability> brute_force_distribution(int N, int limit = Limits{}.brute_force);

// Lower bound (1/2) sqrt(N - 1) on E(l_N).
double erdos_szekeres_floor(int N);

BigCount factorial(int n);

}  // namespace ulam::combinat
