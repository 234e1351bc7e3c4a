#include "ulam/combinat.hpp"

#include <charconv>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ulam/errors.hpp"

namespace ulam::combinat {

Permutation::Permutation(std::vector<int> values) : values_(std::move(values)) {
  const auto n = values_.size();
  std::vector<char> seen(n + 1, 0);
  for (int v : values_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[static_cast<std::size_t>(v)]) {
      throw DomainError("Permutation: values must be a bijection of {1..n}");
    }
    seen[static_cast<std::size_t>(v)] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1);
  return Permutation(std::move(v));
}

Permutation Permutation::reversal(int n) {
  std::vector<int> v(static_cast<std::size_t>(n));
  std::iota(v.rbegin(), v.rend(), 1);
  return Permutation(std::move(v));
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw DomainError("Partition: parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw DomainError("Partition: parts must be weakly decreasing");
    weight_ += parts_[i];
  }
}

std::string Partition::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(parts_[i]);
  }
  return out;
}

Partition Partition::parse(std::string_view text) {
  std::vector<int> parts;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto token = text.substr(0, comma);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw DomainError("Partition::parse: malformed part '" + std::string(token) + "'");
    }
    parts.push_back(value);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return Partition(std::move(parts));
}

ExactProbability::ExactProbability(BigCount numerator, BigCount denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (denominator_ <= 0) throw DomainError("ExactProbability: denominator must be positive");
  if (numerator_ < 0 || numerator_ > denominator_) throw DomainError("ExactProbability: value outside [0, 1]");
  const BigCount g = boost::multiprecision::gcd(numerator_, denominator_);
  if (g > 1) {
    numerator_ /= g;
    denominator_ /= g;
  }
  if (numerator_ == 0) denominator_ = 1;
}

double ExactProbability::to_double() const {
  using boost::multiprecision::cpp_bin_float_50;
  return static_cast<double>(cpp_bin_float_50(numerator_) / cpp_bin_float_50(denominator_));
}

std::string ExactProbability::to_string() const { return numerator_.str() + "/" + denominator_.str(); }

int lis_length(const Permutation& p) { return patience_length(p.values()); }

Partition transpose(const Partition& mu) {
  std::vector<int> cols(static_cast<std::size_t>(mu.first_row()), 0);
  for (int part : mu.parts()) {
    for (int c = 0; c < part; ++c) ++cols[static_cast<std::size_t>(c)];
  }
  return Partition(std::move(cols));
}

BigCount factorial(int n) {
  BigCount f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

BigCount hook_count(const Partition& mu, int weight_limit) {
  if (mu.weight() > weight_limit) {
    throw CapacityError("hook_count: weight " + std::to_string(mu.weight()) + " exceeds limit " +
                        std::to_string(weight_limit));
  }
  const int r = mu.rows();
  std::vector<int> h(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) h[static_cast<std::size_t>(j)] = mu.parts()[static_cast<std::size_t>(j)] + r - (j + 1);
  BigCount numerator = factorial(mu.weight());
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) numerator *= h[static_cast<std::size_t>(i)] - h[static_cast<std::size_t>(j)];
  }
  BigCount denominator = 1;
  for (int v : h) denominator *= factorial(v);
  return numerator / denominator;
}

PartitionStream::PartitionStream(int weight, int max_first_row) : weight_(weight), max_part_(max_first_row) {
  if (weight < 0) throw DomainError("PartitionStream: negative weight");
  if (max_first_row < 1) throw DomainError("PartitionStream: first-row bound must be >= 1");
}

std::optional<Partition> PartitionStream::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    const int top = std::min(weight_, max_part_);
    for (int rest = weight_; rest > 0; rest -= std::min(rest, top)) current_.push_back(std::min(rest, top));
    if (weight_ == 0) done_ = true;
    return Partition(current_);
  }
  int i = static_cast<int>(current_.size()) - 1;
  int ones = 0;
  while (i >= 0 && current_[static_cast<std::size_t>(i)] == 1) {
    ++ones;
    --i;
  }
  if (i < 0) {
    done_ = true;
    return std::nullopt;
  }
  const int v = current_[static_cast<std::size_t>(i)] - 1;
  current_.resize(static_cast<std::size_t>(i));
  current_.push_back(v);
  for (int rest = ones + 1; rest > 0; rest -= std::min(rest, v)) current_.push_back(std::min(rest, v));
  return Partition(current_);
}

namespace {

// Evaluates the Frobenius-Young product for every partition of a fixed weight
// N by tracking prime exponents: all of h_i - h_j, h_i and N are at most N, so
// the product factors over the primes <= N and no big-integer division is
// needed.
class HookEvaluator {
 public:
  explicit HookEvaluator(int weight) : weight_(weight) {
    std::vector<char> composite(static_cast<std::size_t>(weight) + 1, 0);
    for (int p = 2; p <= weight; ++p) {
      if (composite[static_cast<std::size_t>(p)]) continue;
      primes_.push_back(p);
      for (int q = 2 * p; q <= weight; q += p) composite[static_cast<std::size_t>(q)] = 1;
    }
    const std::size_t np = primes_.size();
    valuation_.assign((static_cast<std::size_t>(weight) + 1) * np, 0);
    factorial_valuation_.assign((static_cast<std::size_t>(weight) + 1) * np, 0);
    for (int k = 1; k <= weight; ++k) {
      for (std::size_t ip = 0; ip < np; ++ip) {
        int v = 0;
        for (int m = k; m % primes_[ip] == 0; m /= primes_[ip]) ++v;
        valuation_[static_cast<std::size_t>(k) * np + ip] = v;
        factorial_valuation_[static_cast<std::size_t>(k) * np + ip] =
            factorial_valuation_[static_cast<std::size_t>(k - 1) * np + ip] + v;
      }
    }
    exponents_.resize(np);
    difference_count_.resize(static_cast<std::size_t>(weight) + 1);
    h_.reserve(static_cast<std::size_t>(weight));
  }

  BigCount count(std::span<const int> parts) {
    const std::size_t np = primes_.size();
    const int r = static_cast<int>(parts.size());
    h_.clear();
    for (int j = 0; j < r; ++j) h_.push_back(parts[static_cast<std::size_t>(j)] + r - (j + 1));

    std::fill(difference_count_.begin(), difference_count_.end(), 0);
    for (int i = 0; i < r; ++i) {
      for (int j = i + 1; j < r; ++j) ++difference_count_[static_cast<std::size_t>(h_[i] - h_[j])];
    }
    for (std::size_t ip = 0; ip < np; ++ip) {
      exponents_[ip] = factorial_valuation_[static_cast<std::size_t>(weight_) * np + ip];
    }
    for (int v : h_) {
      for (std::size_t ip = 0; ip < np; ++ip) exponents_[ip] -= factorial_valuation_[static_cast<std::size_t>(v) * np + ip];
    }
    for (int d = 2; d <= weight_; ++d) {
      const int c = difference_count_[static_cast<std::size_t>(d)];
      if (c == 0) continue;
      for (std::size_t ip = 0; ip < np; ++ip) exponents_[ip] += c * valuation_[static_cast<std::size_t>(d) * np + ip];
    }

    BigCount result = 1;
    std::uint64_t chunk = 1;
    for (std::size_t ip = 0; ip < np; ++ip) {
      const auto p = static_cast<std::uint64_t>(primes_[ip]);
      for (int e = exponents_[ip]; e > 0; --e) {
        if (chunk > (UINT64_MAX / p)) {
          result *= chunk;
          chunk = 1;
        }
        chunk *= p;
      }
    }
    result *= chunk;
    return result;
  }

 private:
  int weight_;
  std::vector<int> primes_;
  std::vector<int> valuation_;
  std::vector<int> factorial_valuation_;
  std::vector<int> exponents_;
  std::vector<int> difference_count_;
  std::vector<int> h_;
};

void check_exact_capacity(int weight, int weight_limit, const char* who) {
  if (weight < 0) throw DomainError(std::string(who) + ": N must be >= 0");
  if (weight > weight_limit) {
    throw CapacityError(std::string(who) + ": N = " + std::to_string(weight) + " exceeds exact capacity " +
                        std::to_string(weight_limit));
  }
}

}  // namespace

std::vector<BigCount> cumulative_square_sums(int weight, int max_n, int weight_limit) {
  check_exact_capacity(weight, weight_limit, "cumulative_square_sums");
  if (max_n < 1) throw DomainError("cumulative_square_sums: n must be >= 1");
  std::vector<BigCount> by_first_row(static_cast<std::size_t>(max_n) + 1, 0);
  if (weight == 0) {
    std::fill(by_first_row.begin(), by_first_row.end(), BigCount(1));
    return {by_first_row.begin() + 1, by_first_row.end()};
  }
  HookEvaluator hooks(weight);
  const int bound = std::min(max_n, weight);
  for_each_partition(weight, bound, [&](std::span<const int> parts) {
    const BigCount f = hooks.count(parts);
    by_first_row[static_cast<std::size_t>(parts.front())] += f * f;
  });
  std::vector<BigCount> cumulative(static_cast<std::size_t>(max_n));
  BigCount running = 0;
  for (int n = 1; n <= max_n; ++n) {
    running += by_first_row[static_cast<std::size_t>(n)];
    cumulative[static_cast<std::size_t>(n - 1)] = running;
  }
  return cumulative;
}

BigCount square_sum_rows_at_most(int weight, int max_rows, int weight_limit) {
  check_exact_capacity(weight, weight_limit, "square_sum_rows_at_most");
  if (weight == 0) return 1;
  HookEvaluator hooks(weight);
  BigCount total = 0;
  for_each_partition(weight, weight, [&](std::span<const int> parts) {
    if (static_cast<int>(parts.size()) > max_rows) return;
    const BigCount f = hooks.count(parts);
    total += f * f;
  });
  return total;
}

ExactProbability distribution_exact(int N, int n, int weight_limit) {
  if (n < 1) throw DomainError("distribution_exact: n must be >= 1");
  check_exact_capacity(N, weight_limit, "distribution_exact");
  if (n >= N) return ExactProbability(1, 1);
  const auto sums = cumulative_square_sums(N, n, weight_limit);
  return ExactProbability(sums.back(), factorial(N));
}

std::vector<ExactProbability> brute_force_distribution(int N, int limit) {
  if (N < 1) throw DomainError("brute_force_distribution: N must be >= 1");
  if (N > limit) {
    throw CapacityError("brute_force_distribution: N = " + std::to_string(N) + " exceeds limit " +
                        std::to_string(limit));
  }
  std::vector<int> perm(static_cast<std::size_t>(N));
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<long long> tally(static_cast<std::size_t>(N) + 1, 0);
  std::vector<int> tops;
  do {
    ++tally[static_cast<std::size_t>(patience_length(std::span<const int>(perm), tops))];
  } while (std::next_permutation(perm.begin(), perm.end()));

  const BigCount total = factorial(N);
  std::vector<ExactProbability> out;
  out.reserve(static_cast<std::size_t>(N));
  long long running = 0;
  for (int n = 1; n <= N; ++n) {
    running += tally[static_cast<std::size_t>(n)];
    out.emplace_back(BigCount(running), total);
  }
  return out;
}

double erdos_szekeres_floor(int N) {
  if (N < 1) throw DomainError("erdos_szekeres_floor: N must be >= 1");
  return 0.5 * std::sqrt(static_cast<double>(N - 1));
}

}  // namespace ulam::combinat
