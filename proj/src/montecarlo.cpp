#include "ulam/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <thread>

#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"

namespace ulam::montecarlo {

namespace {

// Moments are accumulated in sorted order so that they do not depend on how
// the samples were split across workers.
void finish(SampleStats& s) {
  std::sort(s.samples.begin(), s.samples.end());
  s.count = s.samples.size();
  double mean = 0.0, m2 = 0.0;
  std::uint64_t k = 0;
  for (double x : s.samples) {
    ++k;
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  s.mean = mean;
  s.m2 = m2;
}

SampleStats run_sharded(std::uint64_t samples, int shards,
                        const std::function<SampleStats(std::uint64_t, std::uint64_t)>& range) {
  if (samples == 0) throw DomainError("sampling: need at least one sample");
  shards = std::max(1, std::min<int>(shards, static_cast<int>(std::min<std::uint64_t>(samples, 256))));
  if (shards == 1) return range(0, samples);
  std::vector<SampleStats> parts(static_cast<std::size_t>(shards));
  std::vector<std::thread> workers;
  const std::uint64_t per = samples / static_cast<std::uint64_t>(shards);
  const std::uint64_t extra = samples % static_cast<std::uint64_t>(shards);
  std::uint64_t first = 0;
  for (int k = 0; k < shards; ++k) {
    const std::uint64_t count = per + (static_cast<std::uint64_t>(k) < extra ? 1 : 0);
    workers.emplace_back([&, k, first, count] { parts[static_cast<std::size_t>(k)] = range(first, count); });
    first += count;
  }
  for (auto& w : workers) w.join();
  SampleStats out = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) out = merge(out, parts[k]);
  finish(out);
  return out;
}

}  // namespace

double SampleStats::empirical_cdf(double x) const {
  if (samples.empty()) return 0.0;
  const auto it = std::upper_bound(samples.begin(), samples.end(), x);
  return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
}

SampleStats sample_lis_range(int N, std::uint64_t first, std::uint64_t count, SeededStream stream) {
  if (N < 1) throw DomainError("sample_lis: N must be >= 1");
  SampleStats s;
  s.kind = SampleKind::Lis;
  s.parameter = N;
  s.seed_record = {stream};
  s.first_index = first;
  s.samples.reserve(count);
  std::vector<std::uint32_t> perm(static_cast<std::size_t>(N));
  std::vector<std::uint32_t> tops;
  for (std::uint64_t i = first; i < first + count; ++i) {
    rng::SampleEngine engine(stream, i);
    std::iota(perm.begin(), perm.end(), 1u);
    for (std::size_t j = perm.size() - 1; j > 0; --j) {
      const auto r = static_cast<std::size_t>(engine.bounded(j + 1));
      std::swap(perm[j], perm[r]);
    }
    s.samples.push_back(combinat::patience_length(std::span<const std::uint32_t>(perm), tops));
  }
  finish(s);
  return s;
}

SampleStats sample_lis(int N, std::uint64_t samples, SeededStream stream, int shards) {
  if (N < 1) throw DomainError("sample_lis: N must be >= 1");
  return run_sharded(samples, shards, [&](std::uint64_t first, std::uint64_t count) {
    return sample_lis_range(N, first, count, stream);
  });
}

SampleStats sample_hammersley_range(double lambda, std::uint64_t first, std::uint64_t count, SeededStream stream) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("sample_hammersley: lambda must be > 0");
  SampleStats s;
  s.kind = SampleKind::Hammersley;
  s.parameter = lambda;
  s.seed_record = {stream};
  s.first_index = first;
  s.samples.reserve(count);
  std::vector<std::pair<double, double>> points;
  std::vector<double> ys, tops;
  for (std::uint64_t i = first; i < first + count; ++i) {
    rng::SampleEngine engine(stream, i);
    const auto k = engine.poisson(lambda);
    points.resize(static_cast<std::size_t>(k));
    for (auto& p : points) {
      p.first = engine.uniform();
      p.second = engine.uniform();
    }
    std::sort(points.begin(), points.end());
    ys.resize(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) ys[j] = points[j].second;
    s.samples.push_back(combinat::patience_length(std::span<const double>(ys), tops));
  }
  finish(s);
  return s;
}

SampleStats sample_hammersley(double lambda, std::uint64_t samples, SeededStream stream, int shards) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("sample_hammersley: lambda must be > 0");
  return run_sharded(samples, shards, [&](std::uint64_t first, std::uint64_t count) {
    return sample_hammersley_range(lambda, first, count, stream);
  });
}

SampleStats merge(const SampleStats& a, const SampleStats& b) {
  if (a.kind != b.kind || a.parameter != b.parameter || a.scaled != b.scaled) {
    throw UsageError("merge: batches come from different experiments");
  }
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  SampleStats out;
  out.kind = a.kind;
  out.parameter = a.parameter;
  out.scaled = a.scaled;
  out.count = a.count + b.count;
  const double na = static_cast<double>(a.count), nb = static_cast<double>(b.count);
  const double n = na + nb;
  const double delta = b.mean - a.mean;
  out.mean = a.mean + delta * nb / n;
  out.m2 = a.m2 + b.m2 + delta * delta * na * nb / n;
  out.samples.resize(a.samples.size() + b.samples.size());
  std::merge(a.samples.begin(), a.samples.end(), b.samples.begin(), b.samples.end(), out.samples.begin());
  out.seed_record = a.seed_record;
  for (const auto& s : b.seed_record) {
    if (std::find(out.seed_record.begin(), out.seed_record.end(), s) == out.seed_record.end()) {
      out.seed_record.push_back(s);
    }
  }
  out.first_index = std::min(a.first_index, b.first_index);
  return out;
}

SampleStats scaled_samples(const SampleStats& stats, int N) {
  if (stats.kind != SampleKind::Lis || stats.parameter != static_cast<double>(N)) {
    throw UsageError("scaled_samples: stats were not drawn at N = " + std::to_string(N));
  }
  if (stats.scaled) throw UsageError("scaled_samples: samples are already scaled");
  const double center = 2.0 * std::sqrt(static_cast<double>(N));
  const double scale = std::pow(static_cast<double>(N), 1.0 / 6.0);
  SampleStats out = stats;
  out.scaled = true;
  for (double& x : out.samples) x = (x - center) / scale;
  out.mean = (stats.mean - center) / scale;
  out.m2 = stats.m2 / (scale * scale);
  return out;
}

double ks_distance(const SampleStats& stats, const painleve::TracyWidomTable& table) {
  if (stats.samples.empty()) throw DomainError("ks_distance: no samples");
  if (table.t.size() < 2) throw DomainError("ks_distance: table too small");
  const double lo = table.t.front(), hi = table.t.back();
  const auto& x = stats.samples;
  const double n = static_cast<double>(x.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double F = painleve::interpolate_cdf(table, std::clamp(x[i], lo, hi));
    // The empirical CDF jumps from i/n to j/n at x[i].
    worst = std::max({worst, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(j) / n)});
    i = j;
  }
  return worst;
}

SampleStats sample_from_table(const painleve::TracyWidomTable& table, std::uint64_t samples, SeededStream stream) {
  if (samples == 0) throw DomainError("sample_from_table: need at least one sample");
  SampleStats s;
  s.kind = SampleKind::Lis;
  s.parameter = 0.0;
  s.scaled = true;
  s.seed_record = {stream};
  s.samples.reserve(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    rng::SampleEngine engine(stream, i);
    const double u = engine.uniform();
    double a = table.t.front(), b = table.t.back();
    for (int it = 0; it < 60; ++it) {
      const double m = 0.5 * (a + b);
      (painleve::interpolate_cdf(table, m) < u ? a : b) = m;
    }
    s.samples.push_back(0.5 * (a + b));
  }
  finish(s);
  return s;
}

LimitConstants estimate_limit_constants(const std::vector<SweepPoint>& sweep) {
  if (sweep.size() < 3) throw UsageError("estimate_limit_constants: need at least three sweep points");
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    if (!(sweep[i].N > sweep[i - 1].N)) throw UsageError("estimate_limit_constants: N must increase strictly");
  }
  // Slope through the origin and its standard error.
  auto fit = [&](auto&& xf, auto&& yf, double& slope, double& stderr_out) {
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : sweep) {
      sxx += xf(p) * xf(p);
      sxy += xf(p) * yf(p);
    }
    slope = sxy / sxx;
    double rss = 0.0;
    for (const auto& p : sweep) {
      const double r = yf(p) - slope * xf(p);
      rss += r * r;
    }
    stderr_out = std::sqrt(rss / static_cast<double>(sweep.size() - 1) / sxx);
  };
  LimitConstants out;
  fit([](const SweepPoint& p) { return std::cbrt(static_cast<double>(p.N)); },
      [](const SweepPoint& p) { return p.stats.variance(); }, out.c0, out.c0_stderr);
  fit([](const SweepPoint& p) { return std::pow(static_cast<double>(p.N), 1.0 / 6.0); },
      [](const SweepPoint& p) { return p.stats.mean - 2.0 * std::sqrt(static_cast<double>(p.N)); }, out.c1,
      out.c1_stderr);
  return out;
}

}  // namespace ulam::montecarlo
