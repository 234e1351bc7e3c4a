#include "ulam/painleve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "ulam/errors.hpp"
#include "ulam/special_functions.hpp"

namespace ulam::painleve {

namespace {

struct Mesh {
  double L_minus;
  double h;
  std::size_t intervals;
  double x(std::size_t i) const { return L_minus + static_cast<double>(i) * h; }
};

Mesh make_mesh(double L_minus, double L_plus, double step) {
  const double count = (L_plus - L_minus) / step;
  const double rounded = std::round(count);
  if (std::abs(count - rounded) > 1e-8 * std::max(1.0, count)) {
    throw DomainError("solve_hastings_mcleod: step must divide L_plus - L_minus");
  }
  return {L_minus, step, static_cast<std::size_t>(rounded)};
}

double smoothstep(double s) {
  s = std::clamp(s, 0.0, 1.0);
  return s * s * (3.0 - 2.0 * s);
}

// -Ai(x) on the right, -sqrt(-x/2) on the left, blended over [-1, 0].
double initial_guess(double x) {
  const double left = x < 0.0 ? -std::sqrt(-x / 2.0) : 0.0;
  if (x <= -1.0) return left;
  const double right = -airy(std::min(x, 20.0)).ai;
  const double s = smoothstep(x + 1.0);
  return (1.0 - s) * left + s * right;
}

struct NewtonResult {
  std::vector<double> u;
  std::vector<double> trace;
  int iterations = 0;
};

// Newton on the three-point discretization with Dirichlet ends already set
// in u.front() and u.back().
NewtonResult newton_solve(const Mesh& mesh, std::vector<double> u, double tolerance, int max_iterations) {
  const std::size_t n = mesh.intervals;
  const double inv_h2 = 1.0 / (mesh.h * mesh.h);
  std::vector<double> diag(n + 1), rhs(n + 1), cprime(n + 1);
  NewtonResult out;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    for (std::size_t i = 1; i < n; ++i) {
      const double x = mesh.x(i);
      rhs[i] = -((u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2 - 2.0 * u[i] * u[i] * u[i] - x * u[i]);
      diag[i] = -2.0 * inv_h2 - 6.0 * u[i] * u[i] - x;
    }
    // Thomas algorithm; both off-diagonals equal inv_h2.
    cprime[1] = inv_h2 / diag[1];
    rhs[1] /= diag[1];
    for (std::size_t i = 2; i < n; ++i) {
      const double m = diag[i] - inv_h2 * cprime[i - 1];
      cprime[i] = inv_h2 / m;
      rhs[i] = (rhs[i] - inv_h2 * rhs[i - 1]) / m;
    }
    for (std::size_t i = n - 2; i >= 1; --i) rhs[i] -= cprime[i] * rhs[i + 1];

    double norm = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
      u[i] += rhs[i];
      norm = std::max(norm, std::abs(rhs[i]));
    }
    out.trace.push_back(norm);
    out.iterations = iter;
    if (!std::isfinite(norm) || norm > 1e3) {
      throw SolverError("solve_hastings_mcleod: Newton iteration diverged", out.trace);
    }
    if (norm < tolerance) {
      out.u = std::move(u);
      return out;
    }
  }
  throw SolverError("solve_hastings_mcleod: Newton iteration did not converge", out.trace);
}

double residual_norm(const Mesh& mesh, const std::vector<double>& u) {
  const std::size_t n = mesh.intervals;
  const double scale = 1.0 / (12.0 * mesh.h * mesh.h);
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 <= n; ++i) {
    const double upp = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) * scale;
    const double x = mesh.x(i);
    worst = std::max(worst, std::abs(upp - 2.0 * u[i] * u[i] * u[i] - x * u[i]));
  }
  return worst;
}

std::vector<double> derivative_fourth_order(const Mesh& mesh, const std::vector<double>& f) {
  const std::size_t n = mesh.intervals;
  const double s = 1.0 / (12.0 * mesh.h);
  std::vector<double> d(n + 1);
  for (std::size_t i = 2; i + 2 <= n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
  d[n] = (25.0 * f[n] - 48.0 * f[n - 1] + 36.0 * f[n - 2] - 16.0 * f[n - 3] + 3.0 * f[n - 4]) * s;
  d[n - 1] = (3.0 * f[n] + 10.0 * f[n - 1] - 18.0 * f[n - 2] + 6.0 * f[n - 3] - f[n - 4]) * s;
  return d;
}

struct Hermite {
  double value, slope;
};

Hermite hermite(double h, double s, double u0, double d0, double u1, double d1) {
  const double s2 = s * s, s3 = s2 * s;
  Hermite r;
  r.value = (2 * s3 - 3 * s2 + 1) * u0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * u1 + (s3 - s2) * h * d1;
  r.slope = (6 * s2 - 6 * s) / h * u0 + (3 * s2 - 4 * s + 1) * d0 + (-6 * s2 + 6 * s) / h * u1 + (3 * s2 - 2 * s) * d1;
  return r;
}

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                               0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

// Closed forms for the Airy tail: int_x^inf Ai^2 and int_x^inf y Ai^2.
void airy_tails(double x, double& first, double& second) {
  if (x > 20.0) {
    first = second = 0.0;
    return;
  }
  const auto a = airy(x);
  first = a.ai_prime * a.ai_prime - x * a.ai * a.ai;
  second = -(x * x * a.ai * a.ai - x * a.ai_prime * a.ai_prime + a.ai * a.ai_prime) / 3.0;
}

std::size_t locate(const PainleveSolution& s, double x) {
  const std::size_t n = s.mesh.size() - 1;
  const double pos = (x - s.L_minus) / s.step;
  if (pos <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(pos), n - 1);
}

}  // namespace

double PainleveSolution::value(double x) const {
  if (!(x >= L_minus && x <= L_plus)) throw DomainError("PainleveSolution: x outside the solution domain");
  const std::size_t i = locate(*this, x);
  return hermite(step, (x - mesh[i]) / step, u[i], u_prime[i], u[i + 1], u_prime[i + 1]).value;
}

double PainleveSolution::derivative(double x) const {
  if (!(x >= L_minus && x <= L_plus)) throw DomainError("PainleveSolution: x outside the solution domain");
  const std::size_t i = locate(*this, x);
  return hermite(step, (x - mesh[i]) / step, u[i], u_prime[i], u[i + 1], u_prime[i + 1]).slope;
}

PainleveSolution solve_hastings_mcleod(const SolverOptions& options) {
  if (!(options.L_minus <= -10.0)) throw DomainError("solve_hastings_mcleod: L_minus must be <= -10");
  if (!(options.L_plus >= 8.0 && options.L_plus <= 20.0)) {
    throw DomainError("solve_hastings_mcleod: L_plus must lie in [8, 20]");
  }
  if (!(options.step > 0.0 && options.step <= 0.02)) throw DomainError("solve_hastings_mcleod: step must be in (0, 0.02]");
  const Mesh coarse = make_mesh(options.L_minus, options.L_plus, options.step);

  const double left = -std::sqrt(-options.L_minus / 2.0);
  const double right = -airy(options.L_plus).ai;

  std::vector<double> guess(coarse.intervals + 1);
  for (std::size_t i = 0; i <= coarse.intervals; ++i) guess[i] = initial_guess(coarse.x(i));
  guess.front() = left;
  guess.back() = right;
  NewtonResult first = newton_solve(coarse, std::move(guess), options.newton_tolerance, options.max_iterations);

  PainleveSolution sol;
  sol.L_minus = options.L_minus;
  sol.L_plus = options.L_plus;
  sol.step = options.step;
  sol.mesh.resize(coarse.intervals + 1);
  for (std::size_t i = 0; i <= coarse.intervals; ++i) sol.mesh[i] = coarse.x(i);
  sol.residual_unrefined = residual_norm(coarse, first.u);
  sol.iterations = first.iterations;
  sol.newton_trace = first.trace;

  if (options.richardson) {
    const Mesh fine{options.L_minus, options.step / 2.0, coarse.intervals * 2};
    std::vector<double> start(fine.intervals + 1);
    for (std::size_t i = 0; i <= fine.intervals; ++i) {
      start[i] = i % 2 == 0 ? first.u[i / 2] : 0.5 * (first.u[i / 2] + first.u[i / 2 + 1]);
    }
    NewtonResult second = newton_solve(fine, std::move(start), options.newton_tolerance, options.max_iterations);
    sol.iterations += second.iterations;
    sol.newton_trace.insert(sol.newton_trace.end(), second.trace.begin(), second.trace.end());
    sol.u.resize(coarse.intervals + 1);
    for (std::size_t i = 0; i <= coarse.intervals; ++i) sol.u[i] = (4.0 * second.u[2 * i] - first.u[i]) / 3.0;
  } else {
    sol.u = std::move(first.u);
  }
  sol.u_prime = derivative_fourth_order(coarse, sol.u);
  sol.residual_bound = residual_norm(coarse, sol.u);
  if (sol.residual_bound > options.target_residual) {
    throw AccuracyError("solve_hastings_mcleod: residual " + std::to_string(sol.residual_bound) +
                        " exceeds target; refine the mesh");
  }
  return sol;
}

PainleveSolution solve_hastings_mcleod(double L_minus, double L_plus, double step) {
  SolverOptions o;
  o.L_minus = L_minus;
  o.L_plus = L_plus;
  o.step = step;
  return solve_hastings_mcleod(o);
}

TracyWidomEvaluator::TracyWidomEvaluator(PainleveSolution solution) : solution_(std::move(solution)) {
  const auto& s = solution_;
  const std::size_t n = s.mesh.size() - 1;
  tail_u2_.assign(n + 1, 0.0);
  tail_xu2_.assign(n + 1, 0.0);
  airy_tails(s.L_plus, tail_u2_[n], tail_xu2_[n]);
  for (std::size_t i = n; i-- > 0;) {
    double a = 0.0, b = 0.0;
    partial(i, s.mesh[i], a, b);
    tail_u2_[i] = tail_u2_[i + 1] + a;
    tail_xu2_[i] = tail_xu2_[i + 1] + b;
  }
}

void TracyWidomEvaluator::partial(std::size_t i, double x, double& first, double& second) const {
  const auto& s = solution_;
  const double b = s.mesh[i + 1];
  const double half = 0.5 * (b - x), mid = 0.5 * (b + x);
  first = second = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    const double y = mid + half * kGaussNodes[k];
    const double u = hermite(s.step, (y - s.mesh[i]) / s.step, s.u[i], s.u_prime[i], s.u[i + 1], s.u_prime[i + 1]).value;
    first += kGaussWeights[k] * u * u;
    second += kGaussWeights[k] * y * u * u;
  }
  first *= half;
  second *= half;
}

void TracyWidomEvaluator::check(double x) const {
  if (!(x >= solution_.L_minus) || std::isnan(x)) throw DomainError("TracyWidomEvaluator: argument below the solution domain");
}

double TracyWidomEvaluator::u_squared_tail(double x) const {
  check(x);
  if (x >= solution_.L_plus) {
    double a, b;
    airy_tails(x, a, b);
    return a;
  }
  const std::size_t i = locate(solution_, x);
  double a, b;
  partial(i, x, a, b);
  return a + tail_u2_[i + 1];
}

double TracyWidomEvaluator::weighted_tail(double x) const {
  check(x);
  if (x >= solution_.L_plus) {
    double a, b;
    airy_tails(x, a, b);
    return b;
  }
  const std::size_t i = locate(solution_, x);
  double a, b;
  partial(i, x, a, b);
  return b + tail_xu2_[i + 1];
}

double TracyWidomEvaluator::v(double x) const { return -u_squared_tail(x); }

double TracyWidomEvaluator::log_cdf(double t) const {
  check(t);
  double a, b;
  if (t >= solution_.L_plus) {
    airy_tails(t, a, b);
  } else {
    const std::size_t i = locate(solution_, t);
    partial(i, t, a, b);
    a += tail_u2_[i + 1];
    b += tail_xu2_[i + 1];
  }
  return -(b - t * a);
}

double TracyWidomEvaluator::cdf(double t) const { return std::exp(log_cdf(t)); }

double TracyWidomEvaluator::density(double t) const { return cdf(t) * u_squared_tail(t); }

double TracyWidomEvaluator::log_cdf_via_v(double t) const {
  check(t);
  const double Lp = solution_.L_plus;
  if (t >= Lp) return log_cdf(t);
  // int_{L+}^inf v = -int_{L+}^inf (x - L+) u^2, with u = -Ai there.
  double a, b;
  airy_tails(Lp, a, b);
  const double tail = -(b - Lp * a);
  std::size_t m = static_cast<std::size_t>(std::ceil((Lp - t) / solution_.step));
  if (m % 2 == 1) ++m;
  const double h = (Lp - t) / static_cast<double>(m);
  double sum = v(t) + v(Lp);
  for (std::size_t k = 1; k < m; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * v(t + static_cast<double>(k) * h);
  return sum * h / 3.0 + tail;
}

double m1_22(const PainleveSolution& solution, double x) {
  if (!(x >= solution.L_minus && x <= solution.L_plus)) throw DomainError("m1_22: x outside the solution domain");
  return TracyWidomEvaluator(solution).v(x);
}

std::vector<double> uniform_grid(double tmin, double tmax, double step) {
  if (!(step > 0.0) || !(tmax > tmin)) throw DomainError("uniform_grid: need tmin < tmax and step > 0");
  const auto count = static_cast<std::size_t>(std::floor((tmax - tmin) / step + 0.5)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = tmin + static_cast<double>(i) * step;
  return out;
}

TracyWidomTable tracy_widom_table(const TracyWidomEvaluator& evaluator, const std::vector<double>& t_grid) {
  const auto& s = evaluator.solution();
  if (t_grid.size() < 2) throw DomainError("tracy_widom_table: grid needs at least two points");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= s.L_minus + 1.0 - 1e-12 && t_grid[i] <= s.L_plus - 1.0 + 1e-12)) {
      throw DomainError("tracy_widom_table: grid leaves [L_minus + 1, L_plus - 1]");
    }
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("tracy_widom_table: grid must be strictly increasing");
  }
  TracyWidomTable table;
  table.t = t_grid;
  table.F.resize(t_grid.size());
  table.density.resize(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    table.F[i] = evaluator.cdf(t_grid[i]);
    table.density[i] = table.F[i] * evaluator.u_squared_tail(t_grid[i]);
  }
  const auto m = tw_moments(table, 2);
  table.mean = m[1] / m[0];
  table.variance = m[2] / m[0] - table.mean * table.mean;
  return table;
}

TracyWidomTable default_table(const TracyWidomEvaluator& evaluator) {
  const auto& s = evaluator.solution();
  return tracy_widom_table(evaluator, uniform_grid(s.L_minus + 1.0, s.L_plus - 1.0, 0.01));
}

std::vector<double> tw_moments(const TracyWidomTable& table, int m_max) {
  if (m_max < 0 || m_max > 6) throw DomainError("tw_moments: m_max must lie in [0, 6]");
  const auto& t = table.t;
  const std::size_t n = t.size();
  if (n < 2) throw DomainError("tw_moments: table too small");
  const double h = (t.back() - t.front()) / static_cast<double>(n - 1);
  bool uniform = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(t[i] - t[i - 1] - h) > 1e-9 * std::max(1.0, h)) uniform = false;
  }
  const bool simpson = uniform && (n - 1) % 2 == 0;

  std::vector<double> out(static_cast<std::size_t>(m_max) + 1);
  for (int m = 0; m <= m_max; ++m) {
    auto f = [&](std::size_t i) { return std::pow(t[i], m) * table.density[i]; };
    double sum = 0.0;
    if (simpson) {
      sum = f(0) + f(n - 1);
      for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i);
      sum *= h / 3.0;
    } else {
      for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (t[i] - t[i - 1]) * (f(i) + f(i - 1));
    }
    // Mass outside the grid, placed at the endpoints.
    sum += std::pow(t.front(), m) * table.F.front() + std::pow(t.back(), m) * (1.0 - table.F.back());
    out[static_cast<std::size_t>(m)] = sum;
  }
  return out;
}

double interpolate_cdf(const TracyWidomTable& table, double t) {
  const auto& g = table.t;
  if (t <= g.front()) return table.F.front();
  if (t >= g.back()) return table.F.back();
  const auto it = std::upper_bound(g.begin(), g.end(), t);
  const auto i = static_cast<std::size_t>(it - g.begin()) - 1;
  const double h = g[i + 1] - g[i];
  const double v =
      hermite(h, (t - g[i]) / h, table.F[i], table.density[i], table.F[i + 1], table.density[i + 1]).value;
  return std::clamp(v, 0.0, 1.0);
}

namespace {

constexpr char kMagic[8] = {'U', 'L', 'A', 'M', 'P', 'I', 'I', '\0'};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

void put_vector(std::ostream& os, const std::vector<double>& v) {
  put(os, static_cast<std::uint64_t>(v.size()));
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

bool get_vector(std::istream& is, std::vector<double>& v, std::uint64_t limit) {
  std::uint64_t n = 0;
  if (!get(is, n) || n > limit) return false;
  v.resize(n);
  return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double))));
}

}  // namespace

std::string cache_file_name(const SolverOptions& o) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "hastings_mcleod_%.17g_%.17g_%.17g_r%d_s%d.bin", o.L_minus, o.L_plus, o.step,
                o.richardson ? 1 : 0, kSchemeVersion);
  return buf;
}

void save_solution(const PainleveSolution& s, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("save_solution: cannot open " + path.string());
  os.write(kMagic, sizeof kMagic);
  put(os, static_cast<std::int32_t>(kSchemeVersion));
  put(os, s.L_minus);
  put(os, s.L_plus);
  put(os, s.step);
  put(os, s.residual_bound);
  put(os, s.residual_unrefined);
  put(os, static_cast<std::int32_t>(s.iterations));
  put_vector(os, s.newton_trace);
  put_vector(os, s.mesh);
  put_vector(os, s.u);
  put_vector(os, s.u_prime);
  if (!os) throw Error("save_solution: write failed for " + path.string());
}

std::optional<PainleveSolution> load_solution(const std::filesystem::path& path, const SolverOptions& o) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  std::int32_t version = 0, iterations = 0;
  PainleveSolution s;
  if (!get(is, version) || version != kSchemeVersion) return std::nullopt;
  if (!get(is, s.L_minus) || !get(is, s.L_plus) || !get(is, s.step)) return std::nullopt;
  if (s.L_minus != o.L_minus || s.L_plus != o.L_plus || s.step != o.step) return std::nullopt;
  if (!get(is, s.residual_bound) || !get(is, s.residual_unrefined) || !get(is, iterations)) return std::nullopt;
  s.iterations = iterations;
  constexpr std::uint64_t limit = 1u << 26;
  if (!get_vector(is, s.newton_trace, limit) || !get_vector(is, s.mesh, limit) || !get_vector(is, s.u, limit) ||
      !get_vector(is, s.u_prime, limit)) {
    return std::nullopt;
  }
  if (s.mesh.size() < 5 || s.u.size() != s.mesh.size() || s.u_prime.size() != s.mesh.size()) return std::nullopt;
  return s;
}

PainleveSolution cached_solve(const SolverOptions& options, const std::filesystem::path& cache_dir) {
  if (cache_dir.empty()) return solve_hastings_mcleod(options);
  const auto path = cache_dir / cache_file_name(options);
  if (auto hit = load_solution(path, options)) {
    if (hit->residual_bound <= options.target_residual) return *hit;
  }
  auto sol = solve_hastings_mcleod(options);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (!ec) {
    // Write to a temporary name first so concurrent readers never see a
    // partial file.
    auto tmp = path;
    tmp += ".tmp";
    try {
      save_solution(sol, tmp);
      std::filesystem::rename(tmp, path, ec);
    } catch (const Error&) {
      std::filesystem::remove(tmp, ec);
    }
  }
  return sol;
}

}  // namespace ulam::painleve
