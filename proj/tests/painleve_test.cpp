#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <boost/math/special_functions/airy.hpp>

#include "ulam/errors.hpp"
#include "ulam/painleve.hpp"

using namespace ulam::painleve;

namespace {

const PainleveSolution& reference() {
  static const PainleveSolution s = solve_hastings_mcleod();
  return s;
}

const TracyWidomEvaluator& evaluator() {
  static const TracyWidomEvaluator ev(reference());
  return ev;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ulam_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("Hastings-McLeod solution satisfies the equation and both tails") {
  const auto& s = reference();
  CHECK(s.residual_bound <= 1e-8);
  CHECK(s.iterations >= 1);
  for (double x : {4.0, 6.0, 8.0}) CHECK(std::abs(s.value(x) + boost::math::airy_ai(x)) <= 1e-9);
  // u(x) = -sqrt(-x/2) (1 + 1/(8x^3) - 73/(128x^6) + ...).
  const double x = -8.0;
  const double asym = -std::sqrt(-x / 2.0) * (1.0 + 1.0 / (8.0 * x * x * x) - 73.0 / (128.0 * std::pow(x, 6)));
  CHECK(std::abs(s.value(x) - asym) <= 1e-6);
  for (double y = s.L_minus; y <= s.L_plus; y += 0.5) CHECK(s.value(y) < 0.0);
  CHECK_THROWS_AS(s.value(s.L_plus + 0.1), ulam::DomainError);
}

TEST_CASE("second-order residual shrinks by four when the step halves") {
  const auto coarse = solve_hastings_mcleod(-12.0, 10.0, 0.01);
  const double ratio = coarse.residual_unrefined / reference().residual_unrefined;
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
  CHECK(std::abs(coarse.value(0.0) - reference().value(0.0)) < 1e-9);
}

TEST_CASE("leading-order left boundary value does not disturb the interior") {
  const auto wide = solve_hastings_mcleod(-14.0, 10.0, 0.005);
  const TracyWidomEvaluator ev_wide(wide);
  double du = 0.0, dF = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    du = std::max(du, std::abs(wide.value(x) - reference().value(x)));
    dF = std::max(dF, std::abs(ev_wide.cdf(x) - evaluator().cdf(x)));
  }
  CHECK(du < 1e-6);
  CHECK(dF < 1e-8);
}

TEST_CASE("solver argument checks") {
  CHECK_THROWS_AS(solve_hastings_mcleod(-9.0, 10.0, 0.005), ulam::DomainError);
  CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 7.0, 0.005), ulam::DomainError);
  CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 10.0, 0.03), ulam::DomainError);
  CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 10.0, 0.0), ulam::DomainError);
  CHECK_THROWS_AS(solve_hastings_mcleod(-12.0, 10.0, 0.007), ulam::DomainError);
}

TEST_CASE("v' = u^2 and the two log F routes agree") {
  const auto& ev = evaluator();
  const double h = 1e-4;
  for (double x : {-5.0, -1.0, 0.5, 3.0}) {
    const double u = ev.solution().value(x);
    CHECK((ev.v(x + h) - ev.v(x - h)) / (2 * h) == doctest::Approx(u * u).epsilon(1e-6));
    CHECK(m1_22(ev.solution(), x) == ev.v(x));
  }
  for (double t : {-8.0, -4.0, -2.0, 0.0, 2.0, 6.0}) CHECK(std::abs(ev.log_cdf(t) - ev.log_cdf_via_v(t)) <= 1e-10);
}

TEST_CASE("F is a distribution function with density F'") {
  const auto& ev = evaluator();
  const double h = 1e-4;
  double previous = 0.0;
  for (double t = -8.0; t <= 6.0; t += 0.25) {
    const double F = ev.cdf(t);
    CHECK(F >= previous);
    CHECK(F <= 1.0);
    previous = F;
    // F(t +- h) near 1 cancel, hence the absolute floor.
    CHECK(std::abs(ev.density(t) - (ev.cdf(t + h) - ev.cdf(t - h)) / (2 * h)) <= 1e-6 * ev.density(t) + 1e-11);
  }
  CHECK(ev.cdf(8.0) > 1.0 - 1e-12);
  CHECK(ev.cdf(-10.0) < 1e-20);
}

TEST_CASE("table moments") {
  const auto table = default_table(evaluator());
  const auto m = tw_moments(table, 2);
  CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m[1] == doctest::Approx(table.mean).epsilon(1e-12));
  CHECK(m[2] - m[1] * m[1] == doctest::Approx(table.variance).epsilon(1e-9));
  CHECK(std::abs(table.mean + 1.7711) <= 5e-3);
  CHECK(std::abs(table.variance - 0.8132) <= 5e-3);
  CHECK_THROWS_AS(tw_moments(table, 7), ulam::DomainError);
}

TEST_CASE("table interpolation and grid validation") {
  const auto& ev = evaluator();
  const auto table = tracy_widom_table(ev, uniform_grid(-6.0, 4.0, 0.05));
  CHECK(table.t.size() == 201);
  CHECK(interpolate_cdf(table, table.t[40]) == table.F[40]);
  CHECK(interpolate_cdf(table, -1.2345) == doctest::Approx(ev.cdf(-1.2345)).epsilon(1e-7));
  CHECK(interpolate_cdf(table, -50.0) == table.F.front());
  CHECK_THROWS_AS(tracy_widom_table(ev, {0.0, 0.0}), ulam::DomainError);
  CHECK_THROWS_AS(tracy_widom_table(ev, {-11.5, 0.0}), ulam::DomainError);
}

TEST_CASE("solution cache round trip") {
  const auto dir = scratch_dir("cache");
  SolverOptions options;
  const auto path = dir / cache_file_name(options);
  save_solution(reference(), path);
  const auto loaded = load_solution(path, options);
  REQUIRE(loaded.has_value());
  CHECK(loaded->u == reference().u);
  CHECK(loaded->u_prime == reference().u_prime);
  CHECK(loaded->residual_bound == reference().residual_bound);

  SolverOptions other = options;
  other.step = 0.01;
  CHECK_FALSE(load_solution(path, other).has_value());
  CHECK(cache_file_name(other) != cache_file_name(options));

  {
    std::ofstream broken(path, std::ios::binary | std::ios::trunc);
    broken << "not a solution";
  }
  CHECK_FALSE(load_solution(path, options).has_value());
  CHECK_FALSE(load_solution(dir / "missing.bin", options).has_value());

  std::filesystem::remove(path);
  const auto first = cached_solve(options, dir);
  CHECK(std::filesystem::exists(path));
  const auto second = cached_solve(options, dir);
  CHECK(second.u == first.u);
  std::filesystem::remove_all(dir);
}
