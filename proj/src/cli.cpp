#include "ulam/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ulam/asymptotics.hpp"
#include "ulam/combinat.hpp"
#include "ulam/errors.hpp"
#include "ulam/montecarlo.hpp"
#include "ulam/painleve.hpp"
#include "ulam/special_functions.hpp"
#include "ulam/toeplitz.hpp"

namespace ulam::cli {

namespace {

using json = nlohmann::ordered_json;

// Locale-independent, 17 significant digits.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct OutputOptions {
  bool as_json = false;
  std::string path;
};

void add_output_options(CLI::App* sub, OutputOptions& o) {
  sub->add_flag("--json", o.as_json, "Emit a single JSON document instead of CSV");
  sub->add_option("-o,--output", o.path, "Write to this file instead of standard output");
}

struct CacheOptions {
  std::string dir;
  bool disabled = false;
};

void add_cache_options(CLI::App* sub, CacheOptions& c) {
  sub->add_option("--cache-dir", c.dir, "Directory for cached Painleve solutions (default: $ULAM_CACHE_DIR)");
  sub->add_flag("--no-cache", c.disabled, "Always re-solve");
}

std::filesystem::path cache_directory(const CacheOptions& c) {
  if (c.disabled) return {};
  if (!c.dir.empty()) return c.dir;
  if (const char* env = std::getenv("ULAM_CACHE_DIR"); env != nullptr && *env != '\0') return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg != nullptr && *xdg != '\0') {
    return std::filesystem::path(xdg) / "ulam";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return std::filesystem::path(home) / ".cache" / "ulam";
  }
  return {};
}

json document(const std::string& command, const json& parameters) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  doc["parameters"] = parameters;
  return doc;
}

void csv_header(std::ostream& os, const std::string& command, const json& parameters) {
  os << "# ulam " << command << " schema_version=" << kSchemaVersion << '\n';
  os << "# parameters: " << parameters.dump() << '\n';
}

// Writes through `fn` to the requested destination.
void emit(const OutputOptions& o, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
  if (o.path.empty()) {
    fn(out);
    return;
  }
  std::ofstream file(o.path, std::ios::trunc);
  if (!file) throw UsageError("cannot open output file " + o.path);
  fn(file);
  if (!file) throw Error("failed writing " + o.path);
}

// ---------------------------------------------------------------------------
// tw

struct TwArgs {
  double tmin = -6.0, tmax = 4.0, step = 0.05;
  painleve::SolverOptions solver;
  CacheOptions cache;
  OutputOptions output;
};

json solver_parameters(const painleve::SolverOptions& s) {
  return json{{"L_minus", s.L_minus}, {"L_plus", s.L_plus}, {"mesh_step", s.step}, {"richardson", s.richardson}};
}

json solver_summary(const painleve::PainleveSolution& sol) {
  return json{{"residual_bound", sol.residual_bound},
              {"residual_unrefined", sol.residual_unrefined},
              {"newton_iterations", sol.iterations},
              {"scheme_version", painleve::kSchemeVersion}};
}

int cmd_tw(const TwArgs& a, std::ostream& out) {
  const auto& s = a.solver;
  if (!(a.tmin < a.tmax)) throw DomainError("tw: need tmin < tmax");
  if (!(a.step > 0.0)) throw DomainError("tw: step must be > 0");
  if (a.tmin < s.L_minus + 1.0 || a.tmax > s.L_plus - 1.0) {
    throw DomainError("tw: [tmin, tmax] must lie inside [L_minus + 1, L_plus - 1]");
  }
  json params = {{"tmin", a.tmin}, {"tmax", a.tmax}, {"step", a.step}};
  params.update(solver_parameters(s));

  const auto sol = painleve::cached_solve(s, cache_directory(a.cache));
  const painleve::TracyWidomEvaluator ev(sol);
  const auto table = painleve::tracy_widom_table(ev, painleve::uniform_grid(a.tmin, a.tmax, a.step));
  const auto full = painleve::default_table(ev);
  json summary = {{"mean", full.mean}, {"variance", full.variance}};
  summary.update(solver_summary(sol));

  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("tw", params);
      doc["t"] = table.t;
      doc["F"] = table.F;
      doc["density"] = table.density;
      doc["summary"] = summary;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "tw", params);
    os << "t,F,density\n";
    for (std::size_t i = 0; i < table.t.size(); ++i) {
      os << num(table.t[i]) << ',' << num(table.F[i]) << ',' << num(table.density[i]) << '\n';
    }
    os << "# summary: " << summary.dump() << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// exact

struct ExactArgs {
  int N = 0;
  int n = 0;
  bool all_n = false;
  OutputOptions output;
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  if (a.N < 1) throw DomainError("exact: N must be >= 1");
  if (a.all_n == (a.n > 0)) throw UsageError("exact: give exactly one of --n and --all-n");
  std::vector<std::pair<int, combinat::ExactProbability>> rows;
  if (a.all_n) {
    const auto sums = combinat::cumulative_square_sums(a.N, a.N);
    const auto total = combinat::factorial(a.N);
    for (int n = 1; n <= a.N; ++n) rows.emplace_back(n, combinat::ExactProbability(sums[n - 1], total));
  } else {
    rows.emplace_back(a.n, combinat::distribution_exact(a.N, a.n));
  }
  json params = {{"N", a.N}};
  if (a.all_n) {
    params["all_n"] = true;
  } else {
    params["n"] = a.n;
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("exact", params);
      json list = json::array();
      for (const auto& [n, q] : rows) list.push_back({{"n", n}, {"q", q.to_string()}, {"decimal", q.to_double()}});
      doc["rows"] = list;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "exact", params);
    os << "n,q,decimal\n";
    for (const auto& [n, q] : rows) os << n << ',' << q.to_string() << ',' << num(q.to_double()) << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// poisson

struct PoissonArgs {
  int n = 0;
  double lambda = 0.0;
  std::string routes = "all";
  int k_max = 0;
  int N_max = -1;
  OutputOptions output;
};

int default_k_max(int n, double lambda) {
  return std::max({n + 20, 40, static_cast<int>(std::ceil(4.0 * std::sqrt(lambda))) + 20});
}

int default_N_max(double lambda) {
  return std::min(combinat::Limits{}.exact_weight,
                  static_cast<int>(std::ceil(lambda + 10.0 * std::sqrt(lambda) + 20.0)));
}

int cmd_poisson(const PoissonArgs& a, std::ostream& out) {
  if (a.n < 1) throw DomainError("poisson: n must be >= 1");
  if (!(a.lambda > 0.0) || !std::isfinite(a.lambda)) throw DomainError("poisson: lambda must be > 0");
  const bool det = a.routes == "all" || a.routes == "det";
  const bool kappa = a.routes == "all" || a.routes == "kappa";
  const bool series = a.routes == "all" || a.routes == "series";
  if (!det && !kappa && !series) throw UsageError("poisson: --routes must be all, det, kappa or series");
  const int k_max = a.k_max > 0 ? a.k_max : default_k_max(a.n, a.lambda);
  const int N_max = a.N_max >= 0 ? a.N_max : default_N_max(a.lambda);

  json params = {{"n", a.n}, {"lambda", a.lambda}, {"routes", a.routes}};
  if (kappa) params["k_max"] = k_max;
  if (series) params["N_max"] = N_max;

  json routes = json::object();
  std::vector<std::pair<std::string, double>> values;
  if (det) {
    const auto p = toeplitz::phi(a.n, a.lambda);
    routes["det"] = {{"phi", p.phi},
                     {"log_phi", p.log_phi},
                     {"log_det", p.determinant.log_value},
                     {"condition_estimate", p.determinant.condition_estimate},
                     {"extended_precision", p.determinant.extended},
                     {"clamped", p.clamped}};
    values.emplace_back("det", p.phi);
  }
  if (kappa) {
    const auto k = toeplitz::phi_via_kappa(a.n, a.lambda, k_max);
    routes["kappa"] = {{"phi", k.value}, {"log_phi", k.log_value}, {"truncation_estimate", k.truncation_estimate}};
    values.emplace_back("kappa", k.value);
  }
  if (series) {
    const auto s = toeplitz::phi_via_series(a.n, a.lambda, N_max);
    routes["series"] = {{"phi", s.value}, {"tail_bound", s.tail_bound}};
    values.emplace_back("series", s.value);
  }
  json deltas = json::object();
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      deltas[values[i].first + "_" + values[j].first] = std::abs(values[i].second - values[j].second);
    }
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("poisson", params);
      doc["routes"] = routes;
      doc["deltas"] = deltas;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "poisson", params);
    os << "route,phi\n";
    for (const auto& [name, v] : values) os << name << ',' << num(v) << '\n';
    os << "# diagnostics: " << routes.dump() << '\n';
    os << "# deltas: " << deltas.dump() << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// sample / hammersley

struct SampleArgs {
  int N = 0;
  double lambda = 0.0;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  int shards = 1;
  std::string raw;
  OutputOptions output;
};

void write_raw(const std::string& path, const json& header, const montecarlo::SampleStats& s) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw UsageError("cannot open raw sample file " + path);
  file << header.dump() << '\n';
  for (double x : s.samples) file << static_cast<long long>(x) << '\n';
  if (!file) throw Error("failed writing " + path);
}

json shard_map(std::uint64_t samples, int shards) {
  shards = std::max(1, std::min<int>(shards, static_cast<int>(std::min<std::uint64_t>(samples, 256))));
  json map = json::array();
  const std::uint64_t per = samples / static_cast<std::uint64_t>(shards);
  const std::uint64_t extra = samples % static_cast<std::uint64_t>(shards);
  std::uint64_t first = 0;
  for (int k = 0; k < shards; ++k) {
    const std::uint64_t count = per + (static_cast<std::uint64_t>(k) < extra ? 1 : 0);
    map.push_back({first, count});
    first += count;
  }
  return map;
}

json stats_json(const montecarlo::SampleStats& s) {
  return json{{"count", s.count},
              {"mean", s.mean},
              {"variance", s.variance()},
              {"min", s.samples.front()},
              {"max", s.samples.back()}};
}

int cmd_sample(const SampleArgs& a, std::ostream& out) {
  if (a.N < 1) throw DomainError("sample: N must be >= 1");
  if (a.samples < 1) throw DomainError("sample: need at least one sample");
  const montecarlo::SeededStream stream{a.seed, a.stream};
  const auto s = montecarlo::sample_lis(a.N, a.samples, stream, a.shards);
  const auto scaled = montecarlo::scaled_samples(s, a.N);
  const json params = {{"N", a.N}, {"samples", a.samples}, {"seed", a.seed}, {"stream", a.stream}, {"shards", a.shards}};
  json result = stats_json(s);
  result["mean_over_sqrt_N"] = s.mean / std::sqrt(static_cast<double>(a.N));
  result["scaled_mean"] = scaled.mean;
  result["scaled_variance"] = scaled.variance();
  result["erdos_szekeres_floor"] = combinat::erdos_szekeres_floor(a.N);
  if (!a.raw.empty()) {
    json header = {{"schema_version", kSchemaVersion}, {"kind", "lis"}, {"N", a.N}, {"seed", a.seed},
                   {"stream", a.stream}, {"samples", a.samples}, {"order", "ascending"},
                   {"shard_map", shard_map(a.samples, a.shards)}};
    write_raw(a.raw, header, s);
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("sample", params);
      doc["stats"] = result;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "sample", params);
    os << "statistic,value\n";
    for (const auto& [k, v] : result.items()) os << k << ',' << num(v.get<double>()) << '\n';
  });
  return kSuccess;
}

int cmd_hammersley(const SampleArgs& a, std::ostream& out) {
  if (!(a.lambda > 0.0) || !std::isfinite(a.lambda)) throw DomainError("hammersley: lambda must be > 0");
  if (a.samples < 1) throw DomainError("hammersley: need at least one sample");
  const montecarlo::SeededStream stream{a.seed, a.stream};
  const auto s = montecarlo::sample_hammersley(a.lambda, a.samples, stream, a.shards);
  const json params = {
      {"lambda", a.lambda}, {"samples", a.samples}, {"seed", a.seed}, {"stream", a.stream}, {"shards", a.shards}};
  json result = stats_json(s);
  result["two_sqrt_lambda"] = 2.0 * std::sqrt(a.lambda);
  if (!a.raw.empty()) {
    json header = {{"schema_version", kSchemaVersion}, {"kind", "hammersley"}, {"lambda", a.lambda},
                   {"seed", a.seed}, {"stream", a.stream}, {"samples", a.samples}, {"order", "ascending"},
                   {"shard_map", shard_map(a.samples, a.shards)}};
    write_raw(a.raw, header, s);
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("hammersley", params);
      doc["stats"] = result;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "hammersley", params);
    os << "statistic,value\n";
    for (const auto& [k, v] : result.items()) os << k << ',' << num(v.get<double>()) << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// rates

struct RatesArgs {
  std::vector<double> x;
  OutputOptions output;
};

int cmd_rates(const RatesArgs& a, std::ostream& out) {
  if (a.x.empty()) throw UsageError("rates: give at least one --x");
  for (double x : a.x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("rates: x must be finite and > 0");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  struct Row {
    double x, U, I, H;
  };
  std::vector<Row> rows;
  for (double x : a.x) {
    rows.push_back({x, x <= 2.0 ? asymptotics::rate_U(x) : nan, x >= 2.0 ? asymptotics::rate_I(x) : nan,
                    x <= 2.0 ? asymptotics::rate_H(x) : nan});
  }
  const json params = {{"x", a.x}};
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("rates", params);
      json list = json::array();
      for (const auto& r : rows) {
        list.push_back({{"x", r.x}, {"U", finite_or_null(r.U)}, {"I", finite_or_null(r.I)}, {"H", finite_or_null(r.H)}});
      }
      doc["rows"] = list;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "rates", params);
    os << "x,U,I,H\n";
    auto cell = [](double v) { return std::isnan(v) ? std::string() : num(v); };
    for (const auto& r : rows) os << num(r.x) << ',' << cell(r.U) << ',' << cell(r.I) << ',' << cell(r.H) << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// equilibrium

struct EquilibriumArgs {
  double gamma = 0.0;
  int points = 0;
  OutputOptions output;
};

int cmd_equilibrium(const EquilibriumArgs& a, std::ostream& out) {
  const auto mu = asymptotics::equilibrium_measure(a.gamma);
  if (a.points < 0) throw DomainError("equilibrium: points must be >= 0");
  json params = {{"gamma", a.gamma}, {"points", a.points}};
  json summary = {{"full_circle", mu.full_circle},
                  {"theta_c", mu.theta_c},
                  {"lagrange_l", mu.lagrange_l},
                  {"mass", asymptotics::equilibrium_mass(mu)},
                  {"residual_at_0", asymptotics::variational_residual(a.gamma, 0.0)},
                  {"residual_at_pi", asymptotics::variational_residual(a.gamma, std::numbers::pi)}};
  std::vector<std::pair<double, double>> grid;
  for (int k = 0; k < a.points; ++k) {
    const double theta =
        a.points == 1 ? 0.0 : -std::numbers::pi + 2.0 * std::numbers::pi * k / static_cast<double>(a.points - 1);
    grid.emplace_back(theta, mu.density(theta));
  }
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("equilibrium", params);
      doc["measure"] = summary;
      json th = json::array(), d = json::array();
      for (const auto& [t, v] : grid) {
        th.push_back(t);
        d.push_back(v);
      }
      doc["theta"] = th;
      doc["density"] = d;
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "equilibrium", params);
    os << "# measure: " << summary.dump() << '\n';
    os << "theta,density\n";
    for (const auto& [t, v] : grid) os << num(t) << ',' << num(v) << '\n';
  });
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  bool quick = false;
  CacheOptions cache;
  OutputOptions output;
};

struct CheckResult {
  std::string name;
  std::string anchor;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// Runs `fn`, which returns the measured value; passes when it is <= tol.
CheckResult run_check(const std::string& name, const std::string& anchor, double tol,
                      const std::function<double()>& fn) {
  CheckResult r{name, anchor, std::numeric_limits<double>::quiet_NaN(), tol, false, ""};
  try {
    r.measured = fn();
    r.pass = r.measured <= tol;
  } catch (const std::exception& e) {
    r.note = e.what();
  }
  return r;
}

std::vector<CheckResult> verification_suite(bool quick, const std::filesystem::path& cache) {
  std::vector<CheckResult> out;
  const int brute_max = quick ? 7 : 8;
  out.push_back(run_check("exact-vs-brute-force", "Schensted correspondence and hook formula", 0.0, [&] {
    double mismatches = 0;
    for (int N = 1; N <= brute_max; ++N) {
      const auto brute = combinat::brute_force_distribution(N);
      for (int n = 1; n <= N; ++n) {
        if (!(combinat::distribution_exact(N, n) == brute[static_cast<std::size_t>(n - 1)])) ++mismatches;
      }
    }
    return mismatches;
  }));
  const int rsk_max = quick ? 20 : 30;
  out.push_back(run_check("rsk-completeness", "sum of f(mu)^2 equals N!", 0.0, [&] {
    double mismatches = 0;
    for (int N = 0; N <= rsk_max; ++N) {
      const auto sums = combinat::cumulative_square_sums(N, std::max(N, 1));
      if (sums.back() != combinat::factorial(N)) ++mismatches;
    }
    return mismatches;
  }));
  out.push_back(run_check("poisson-triple-route", "Gessel identity", 1e-9, [&] {
    const std::vector<double> lambdas = quick ? std::vector<double>{1.0, 4.0} : std::vector<double>{0.25, 1, 4, 16};
    const int n_max = quick ? 8 : 12;
    const int N_max = quick ? 40 : 60;
    double worst = 0.0;
    for (double lambda : lambdas) {
      const auto det = toeplitz::phi_range(n_max, lambda);
      const auto series = toeplitz::phi_via_series_range(n_max, lambda, N_max);
      for (int n = 1; n <= n_max; ++n) {
        const double d = det[static_cast<std::size_t>(n - 1)].phi;
        const auto& s = series[static_cast<std::size_t>(n - 1)];
        const double k = toeplitz::phi_via_kappa(n, lambda, default_k_max(n, lambda)).value;
        worst = std::max({worst, std::abs(d - k), std::abs(d - s.value) - s.tail_bound});
      }
    }
    return worst;
  }));
  out.push_back(run_check("hankel-toeplitz-identity", "Hankel and Toeplitz determinants", 1e-9, [&] {
    double worst = 0.0;
    for (int r = 1; r <= (quick ? 4 : 6); ++r) {
      for (double lambda : {0.5, 1.0, 2.0}) worst = std::max(worst, toeplitz::verify_hankel_toeplitz(r, lambda));
    }
    return worst;
  }));

  std::optional<painleve::TracyWidomEvaluator> tw;
  std::optional<painleve::TracyWidomTable> table;
  try {
    tw.emplace(painleve::cached_solve({}, cache));
    table = painleve::default_table(*tw);
  } catch (const std::exception&) {
  }
  auto need_tw = [&] {
    if (!tw) throw SolverError("Painleve solve failed", {});
  };
  out.push_back(run_check("painleve-residual", "Painleve II equation", 1e-8, [&] {
    need_tw();
    return tw->solution().residual_bound;
  }));
  out.push_back(run_check("painleve-right-tail", "u ~ -Ai(x) as x -> +inf", 1e-6, [&] {
    need_tw();
    return std::abs(tw->solution().value(6.0) + airy(6.0).ai);
  }));
  out.push_back(run_check("painleve-left-tail", "u ~ -sqrt(-x/2) as x -> -inf", 2e-2, [&] {
    need_tw();
    return std::abs(tw->solution().value(-8.0) + 2.0) / 2.0;
  }));
  out.push_back(run_check("tw-mean", "Tracy-Widom mean -1.7711", 5e-3, [&] {
    need_tw();
    return std::abs(table->mean + 1.7711);
  }));
  out.push_back(run_check("tw-variance", "Tracy-Widom variance 0.8132", 5e-3, [&] {
    need_tw();
    return std::abs(table->variance - 0.8132);
  }));
  out.push_back(run_check("log-cdf-two-routes", "log F = integral of 2i m_{1,22}", 1e-9, [&] {
    need_tw();
    double worst = 0.0;
    for (double t : {-6.0, -2.0, 0.0, 2.0}) worst = std::max(worst, std::abs(tw->log_cdf(t) - tw->log_cdf_via_v(t)));
    return worst;
  }));
  out.push_back(run_check("kappa-supercritical", "kappa^2 for gamma > 1", 0.1, [&] {
    need_tw();
    const int q = 40;
    const double gamma = 2.0;
    const double lambda = std::pow(gamma * q / 2.0, 2);
    const double exact = toeplitz::kappa_sq(q - 1, lambda);
    const double pred = asymptotics::kappa_asymptotic(q, gamma, *tw).prediction;
    return std::abs(exact / pred - 1.0);
  }));
  out.push_back(run_check("critical-window-phi", "phi_n near log F(t) at t = 0", 0.05, [&] {
    need_tw();
    const int n = 100;
    const double lambda = std::pow((n + 1) / 2.0, 2);
    return std::abs(toeplitz::phi(n, lambda).log_phi - tw->log_cdf(0.0));
  }));
  out.push_back(run_check("monotone-in-N", "q_{n,N+1} <= q_{n,N}", 0.0, [&] {
    double violations = 0;
    const int N_top = quick ? 10 : 40;
    for (int N = 1; N < N_top; ++N) {
      for (int n = 1; n <= 12; ++n) {
        if (!(combinat::distribution_exact(N + 1, n) <= combinat::distribution_exact(N, n))) ++violations;
      }
    }
    return violations;
  }));
  out.push_back(run_check("depoisson-bracket", "de-Poissonization sandwich", 0.0, [&] {
    double misses = 0;
    const std::vector<int> Ns = quick ? std::vector<int>{25} : std::vector<int>{25, 36, 40};
    for (int N : Ns) {
      for (int n = 6; n <= 12; ++n) {
        const auto b = asymptotics::depoisson_bounds(n, N, 1.0);
        const double q = combinat::distribution_exact(N, n).to_double();
        if (!(b.lower <= q && q <= b.upper)) ++misses;
      }
    }
    return misses;
  }));
  out.push_back(run_check("rate-zeros", "U(2) = I(2) = H(2) = 0", 1e-15, [&] {
    return std::max({std::abs(asymptotics::rate_U(2.0)), std::abs(asymptotics::rate_I(2.0)),
                     std::abs(asymptotics::rate_H(2.0))});
  }));
  out.push_back(run_check("equilibrium-mass", "equilibrium measure is a probability", 1e-10, [&] {
    double worst = 0.0;
    for (double gamma : {0.1, 0.5, 1.0, 1.7, 2.0, 5.0}) {
      worst = std::max(worst, std::abs(asymptotics::equilibrium_mass(asymptotics::equilibrium_measure(gamma)) - 1.0));
    }
    return worst;
  }));
  out.push_back(run_check("variational-equality", "Euler-Lagrange equality on the support", 1e-6, [&] {
    double worst = 0.0;
    for (double gamma : {0.5, 2.0}) {
      const double edge = asymptotics::equilibrium_measure(gamma).theta_c;
      for (int k = -4; k <= 4; ++k) {
        worst = std::max(worst, std::abs(asymptotics::variational_residual(gamma, 0.95 * edge * k / 4.0)));
      }
    }
    return worst;
  }));
  out.push_back(run_check("variational-inequality", "strict inequality off the support", 0.0, [&] {
    const double r = asymptotics::variational_residual(2.0, std::numbers::pi);
    return r < 0.0 ? 0.0 : 1.0;
  }));
  return out;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const auto checks = verification_suite(a.quick, cache_directory(a.cache));
  const auto failing = std::find_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; });
  const json params = {{"quick", a.quick}};
  emit(a.output, out, [&](std::ostream& os) {
    if (a.output.as_json) {
      json doc = document("verify", params);
      json list = json::array();
      for (const auto& c : checks) {
        json item = {{"name", c.name},
                     {"anchor", c.anchor},
                     {"measured", finite_or_null(c.measured)},
                     {"tolerance", c.tolerance},
                     {"pass", c.pass}};
        if (!c.note.empty()) item["note"] = c.note;
        list.push_back(item);
      }
      doc["checks"] = list;
      doc["passed"] = failing == checks.end();
      os << doc.dump(2) << '\n';
      return;
    }
    csv_header(os, "verify", params);
    os << "name,anchor,measured,tolerance,pass\n";
    for (const auto& c : checks) {
      os << c.name << ",\"" << c.anchor << "\"," << num(c.measured) << ',' << num(c.tolerance) << ','
         << (c.pass ? "pass" : "FAIL") << '\n';
    }
  });
  if (failing != checks.end()) {
    err << "verify: check failed: " << failing->name;
    if (!failing->note.empty()) err << " (" << failing->note << ")";
    err << '\n';
    return kVerification;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Longest increasing subsequences, Toeplitz determinants and the Tracy-Widom law", "ulam"};
  app.require_subcommand(1);

  TwArgs tw;
  auto* tw_cmd = app.add_subcommand("tw", "Tracy-Widom distribution from the Hastings-McLeod solution");
  tw_cmd->add_option("--tmin", tw.tmin, "First grid point")->capture_default_str();
  tw_cmd->add_option("--tmax", tw.tmax, "Last grid point")->capture_default_str();
  tw_cmd->add_option("--step", tw.step, "Grid spacing")->capture_default_str();
  tw_cmd->add_option("--L-minus", tw.solver.L_minus, "Left end of the solver domain")->capture_default_str();
  tw_cmd->add_option("--L-plus", tw.solver.L_plus, "Right end of the solver domain")->capture_default_str();
  tw_cmd->add_option("--mesh-step", tw.solver.step, "Finite-difference step")->capture_default_str();
  add_cache_options(tw_cmd, tw.cache);
  add_output_options(tw_cmd, tw.output);

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact q_{n,N} = P(l_N <= n) from hook-length sums");
  exact_cmd->add_option("--N", exact.N, "Permutation size")->required();
  auto* exact_n = exact_cmd->add_option("--n", exact.n, "Bound on the LIS length");
  auto* exact_all = exact_cmd->add_flag("--all-n", exact.all_n, "Tabulate every n = 1..N");
  exact_n->excludes(exact_all);
  add_output_options(exact_cmd, exact.output);

  PoissonArgs poisson;
  auto* poisson_cmd = app.add_subcommand("poisson", "Poissonized distribution phi_n(lambda) by several routes");
  poisson_cmd->add_option("--n", poisson.n, "Bound on L(lambda)")->required();
  poisson_cmd->add_option("--lambda", poisson.lambda, "Poisson intensity (> 0)")->required();
  poisson_cmd->add_option("--routes", poisson.routes, "all, det, kappa or series")->capture_default_str();
  poisson_cmd->add_option("--k-max", poisson.k_max, "Last kappa^2 factor (default: automatic)");
  poisson_cmd->add_option("--N-max", poisson.N_max, "Last Poisson term of the series (default: automatic)");
  add_output_options(poisson_cmd, poisson.output);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Monte Carlo LIS of uniform random permutations");
  sample_cmd->add_option("--N", sample.N, "Permutation size")->required();
  SampleArgs hammer;
  auto* hammer_cmd = app.add_subcommand("hammersley", "Monte Carlo L(lambda) from a planar Poisson process");
  hammer_cmd->add_option("--lambda", hammer.lambda, "Poisson intensity (> 0)")->required();
  for (auto [cmd, args] : {std::pair{sample_cmd, &sample}, std::pair{hammer_cmd, &hammer}}) {
    cmd->add_option("--samples", args->samples, "Number of samples")->capture_default_str();
    cmd->add_option("--seed", args->seed, "Generator seed")->capture_default_str();
    cmd->add_option("--stream", args->stream, "Stream id")->capture_default_str();
    cmd->add_option("--shards", args->shards, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--raw", args->raw, "Also write the sorted samples to this file");
    add_output_options(cmd, args->output);
  }

  RatesArgs rates;
  auto* rates_cmd = app.add_subcommand("rates", "Large-deviation rate functions U, I and H");
  rates_cmd->add_option("--x", rates.x, "Evaluation points")->required();
  add_output_options(rates_cmd, rates.output);

  EquilibriumArgs eq;
  auto* eq_cmd = app.add_subcommand("equilibrium", "Equilibrium measure for V(z) = -(gamma/2)(z + 1/z)");
  eq_cmd->add_option("--gamma", eq.gamma, "Coupling (> 0)")->required();
  eq_cmd->add_option("--points", eq.points, "Density samples on [-pi, pi]")->capture_default_str();
  add_output_options(eq_cmd, eq.output);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Cross-route and oracle checks");
  verify_cmd->add_flag("--quick", verify.quick, "Smaller grids");
  add_cache_options(verify_cmd, verify.cache);
  add_output_options(verify_cmd, verify.output);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*tw_cmd) return cmd_tw(tw, out);
    if (*exact_cmd) return cmd_exact(exact, out);
    if (*poisson_cmd) return cmd_poisson(poisson, out);
    if (*sample_cmd) return cmd_sample(sample, out);
    if (*hammer_cmd) return cmd_hammersley(hammer, out);
    if (*rates_cmd) return cmd_rates(rates, out);
    if (*eq_cmd) return cmd_equilibrium(eq, out);
    if (*verify_cmd) return cmd_verify(verify, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kDomain;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace ulam::cli
