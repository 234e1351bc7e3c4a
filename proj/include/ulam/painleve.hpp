#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ulam::painleve {

// Bumped whenever the discretization changes, so stale caches are ignored.
inline constexpr int kSchemeVersion = 1;

struct SolverOptions {
  double L_minus = -12.0;
  double L_plus = 10.0;
  double step = 0.005;
  double newton_tolerance = 1e-12;
  int max_iterations = 60;
  // Combine the solutions at h and h/2 as (4 u_{h/2} - u_h) / 3.
  bool richardson = true;
  // AccuracyError when the final residual exceeds this.
  double target_residual = 1e-8;
};

// Hastings-McLeod solution of u'' = 2u^3 + xu sampled on a uniform mesh.
struct PainleveSolution {
  double L_minus = 0.0;
  double L_plus = 0.0;
  double step = 0.0;
  std::vector<double> mesh;
  std::vector<double> u;
  std::vector<double> u_prime;
  // max |u'' - 2u^3 - xu| over the interior, u'' from the five-point
  // fourth-order stencil applied to the stored values.
  double residual_bound = 0.0;
  // The same measure for the plain second-order solution on this mesh,
  // before extrapolation. Scales like step^2.
  double residual_unrefined = 0.0;
  int iterations = 0;
  std::vector<double> newton_trace;

  // Cubic Hermite interpolation of u and u'. Throws DomainError outside
  // [L_minus, L_plus].
  double value(double x) const;
  double derivative(double x) const;
};

// Throws DomainError unless L_minus <= -10, L_plus >= 8, 0 < step <= 0.02 and
// the step divides the interval; SolverError when Newton fails to converge;
// AccuracyError when the residual misses options.target_residual.
PainleveSolution solve_hastings_mcleod(const SolverOptions& options = {});
PainleveSolution solve_hastings_mcleod(double L_minus, double L_plus, double step);

// Evaluates integrals of the solution, with the Airy tail beyond L_plus.
class TracyWidomEvaluator {
 public:
  explicit TracyWidomEvaluator(PainleveSolution solution);

  const PainleveSolution& solution() const { return solution_; }

  // int_x^inf u^2 and int_x^inf y u^2 dy.
  double u_squared_tail(double x) const;
  double weighted_tail(double x) const;

  // v(x) = 2i m_{1,22}(x) = -int_x^inf u^2.
  double v(double x) const;
  // log F(t) = -int_t^inf (x - t) u^2 dx.
  double log_cdf(double t) const;
  double cdf(double t) const;
  // F'(t) = F(t) int_t^inf u^2.
  double density(double t) const;
  // log F(t) = int_t^inf v(y) dy by composite Simpson; independent check of
  // log_cdf.
  double log_cdf_via_v(double t) const;

 private:
  void check(double x) const;
  // Contribution of [x, mesh[i+1]] where mesh[i] <= x.
  void partial(std::size_t i, double x, double& first, double& second) const;

  PainleveSolution solution_;
  std::vector<double> tail_u2_;   // int_{mesh[i]}^inf u^2
  std::vector<double> tail_xu2_;  // int_{mesh[i]}^inf x u^2
};

double m1_22(const PainleveSolution& solution, double x);

struct TracyWidomTable {
  std::vector<double> t;
  std::vector<double> F;
  std::vector<double> density;
  double mean = 0.0;
  double variance = 0.0;
};

// Throws DomainError unless the grid is strictly increasing and inside
// [L_minus + 1, L_plus - 1].
TracyWidomTable tracy_widom_table(const TracyWidomEvaluator& evaluator, const std::vector<double>& t_grid);

// Uniform grid tmin, tmin + step, ..., with the last point within step/2 of tmax.
std::vector<double> uniform_grid(double tmin, double tmax, double step);

// Default table on [L_minus + 1, L_plus - 1] with step 0.01.
TracyWidomTable default_table(const TracyWidomEvaluator& evaluator);

// int t^m dF for m = 0..m_max (m_max <= 6) by quadrature of the tabulated
// density (Simpson on uniform grids with an even number of intervals,
// trapezoid otherwise) and endpoint tail corrections.
std::vector<double> tw_moments(const TracyWidomTable& table, int m_max);

// Piecewise-cubic Hermite interpolation of F from the table, clamped to
// [0, 1]; F' is taken from the density column.
double interpolate_cdf(const TracyWidomTable& table, double t);

// Binary cache. The file records the domain, step and scheme version;
// load returns nullopt when the file is missing, unreadable or describes a
// different solve.
std::string cache_file_name(const SolverOptions& options);
void save_solution(const PainleveSolution& solution, const std::filesystem::path& path);
std::optional<PainleveSolution> load_solution(const std::filesystem::path& path, const SolverOptions& options);

// Loads from `cache_dir` when possible, otherwise solves and stores. An empty
// directory disables caching.
PainleveSolution cached_solve(const SolverOptions& options, const std::filesystem::path& cache_dir);

}  // namespace ulam::painleve
