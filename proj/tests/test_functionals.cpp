#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <vector>

#include "funcrate/detail/compensated.hpp"
#include "funcrate/functionals.hpp"
#include "funcrate/processes.hpp"

using namespace funcrate;

namespace {

SamplePath ramp_path(double T, int n_fine) {
  // X_t = t exactly: drift 1, sigma 0 euler from 0 accumulates exact dyadics
  PathGrid grid(T, n_fine);
  CounterRng rng(0, 0);
  DiffusionPreset ramp = diffusion_preset("unit_drift");
  return sample_diffusion_euler(ramp.drift, ramp.sigma, 0.0, grid, rng);
}

// Route-A oracle: difference of the two integral sums, each accumulated in
// double-double and rounded once. Algebraically identical to the telescoped
// route, so the rounded doubles must coincide.
double discrepancy_by_difference(const TestFunction& h, const SamplePath& path, int n) {
  using namespace funcrate::detail;
  const int N = path.grid.n_fine;
  const int stride = N / n;
  DoubleDouble fine, coarse;
  for (int j = 0; j < N; ++j) fine = dd_add(fine, eval_h(h, path.values[j]));
  for (int k = 0; k < n; ++k) coarse = dd_add(coarse, eval_h(h, path.values[k * stride]));
  DoubleDouble ref = dd_mul(fine, path.grid.dt());
  DoubleDouble sum = dd_mul(coarse, path.grid.horizon / n);
  return dd_round(dd_sub(ref, sum));
}

}  // namespace

TEST_CASE("pointwise evaluation") {
  CHECK(eval_h(make_indicator(0, 1), 0.5) == 1.0);
  CHECK(eval_h(make_indicator(0, 1), 2.0) == 0.0);
  CHECK(eval_h(make_indicator(0, 1), 0.0) == 1.0);   // closed left endpoint
  CHECK(eval_h(make_indicator(0, 1), 1.0) == 0.0);   // open right endpoint
  CHECK(eval_h(make_linear(), 3.0) == 3.0);
  CHECK(eval_h(make_quadratic(), -3.0) == 9.0);
  CHECK(eval_h(make_holder_power(0.5), 4.0) == 2.0);
  CHECK(eval_h(make_holder_power(0.5), -4.0) == 2.0);
}

TEST_CASE("table interpolation and extrapolation") {
  TestFunction t = make_table({0.0, 1.0, 3.0}, {1.0, 3.0, -1.0});
  CHECK(eval_h(t, 0.5) == doctest::Approx(2.0));
  CHECK(eval_h(t, 2.0) == doctest::Approx(1.0));
  CHECK(eval_h(t, -5.0) == 1.0);   // constant extrapolation
  CHECK(eval_h(t, 10.0) == -1.0);
  CHECK_THROWS_AS(make_table({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_table({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_indicator(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_holder_power(0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_holder_power(1.5), std::invalid_argument);
}

TEST_CASE("table file loader") {
  const char* path = "funcrate_table_test.txt";
  {
    std::ofstream out(path);
    out << "# test table\n-1 2.0\n0.5 3.5   # inline comment\n2 0\n";
  }
  TestFunction t = load_table(path);
  CHECK(t.xs.size() == 3);
  CHECK(eval_h(t, -1.0) == 2.0);
  CHECK(eval_h(t, 2.0) == 0.0);
  std::remove(path);
  CHECK_THROWS_AS(load_table("does_not_exist.txt"), std::runtime_error);
}

TEST_CASE("riemann sum on the deterministic ramp") {
  SamplePath p = ramp_path(1.0, 1 << 12);
  CHECK(riemann_sum(make_linear(), p, 4) == 0.375);  // (1/4)(0 + 1/4 + 1/2 + 3/4)
  CHECK_THROWS_AS(riemann_sum(make_linear(), p, 3), std::invalid_argument);
}

TEST_CASE("constant integrand integrates to the horizon at every rung") {
  PathGrid grid(1.0, 256);
  CounterRng rng(21, 4);
  SamplePath p = sample_brownian(0.4, grid, rng);
  TestFunction one = make_table({0.0, 1.0}, {1.0, 1.0});  // h == 1 everywhere
  for (int n : {1, 2, 8, 64, 256}) {
    CHECK(riemann_sum(one, p, n) == 1.0);
    CHECK(discrepancy(one, p, n) == 0.0);
  }
  TestFunction zero = make_table({0.0, 1.0}, {0.0, 0.0});
  CHECK(reference_integral(zero, p) == 0.0);
  // a generic constant level cancels exactly too
  TestFunction level = make_table({0.0, 1.0}, {0.1, 0.1});
  for (int n : {2, 16, 128}) CHECK(discrepancy(level, p, n) == 0.0);
}

TEST_CASE("reference integral closed form on the ramp") {
  const int N = 1 << 12;
  SamplePath p = ramp_path(1.0, N);
  double want = (N - 1.0) / (2.0 * N);  // left-endpoint sum of t over dyadics, exact
  CHECK(reference_integral(make_linear(), p) == want);
  CHECK(reference_integral(make_linear(), p) == riemann_sum(make_linear(), p, N));
}

TEST_CASE("discrepancy closed form on the ramp") {
  const int N = 1 << 12;
  SamplePath p = ramp_path(1.0, N);
  double want = (N - 1.0) / (2.0 * N) - 0.375;
  CHECK(discrepancy(make_linear(), p, 4) == want);
  CHECK(discrepancy(make_linear(), p, 4) == doctest::Approx(0.1248779).epsilon(1e-6));
  CHECK(discrepancy(make_linear(), p, N) == 0.0);  // coinciding grids
}

TEST_CASE("monotone refinement on the ramp follows the closed form exactly") {
  const int N = 1 << 12;
  SamplePath p = ramp_path(1.0, N);
  for (int n : {4, 8, 16, 32, 64}) {
    double closed = 0.5 / n - 0.5 / N;  // dyadic, exactly representable
    CHECK(discrepancy(make_linear(), p, n) == closed);
  }
}

TEST_CASE("telescoped discrepancy equals the difference of sums bit for bit") {
  PathGrid grid(1.5, 1 << 10);
  std::vector<TestFunction> hs = {make_indicator(-0.5, 0.5), make_linear(), make_quadratic(),
                                  make_holder_power(0.5),
                                  make_table({-1.0, 0.0, 2.0}, {0.3, -1.0, 2.5})};
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    CounterRng rng(321, rep);
    SamplePath p = rep % 2 == 0 ? sample_brownian(0.1, grid, rng)
                                : sample_stable(StableIndex(1.5), -0.2, grid, rng);
    for (const auto& h : hs) {
      for (int n : {2, 8, 32, 256, 1024}) {
        double telescoped = discrepancy(h, p, n);
        double by_difference = discrepancy_by_difference(h, p, n);
        CHECK(telescoped == by_difference);
      }
    }
  }
}

TEST_CASE("ladder evaluation matches the per-rung calls bit for bit") {
  PathGrid grid(1.0, 1 << 11);
  CounterRng rng(9, 1);
  SamplePath p = sample_brownian(0.0, grid, rng);
  TestFunction h = make_indicator(0.0, 1.0);
  std::vector<int> ladder = {4, 16, 64, 512};
  std::vector<double> out(ladder.size());
  std::vector<double> scratch;
  discrepancy_ladder(h, p, ladder, out, scratch);
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    CHECK(out[i] == discrepancy(h, p, ladder[i]));
  }
}

TEST_CASE("norm_v analytic values") {
  WeightV vexp = make_v_exponential(1.0);
  WeightV vone = make_v_exponential(0.0);
  WeightV vpoly = make_v_polynomial(0.5, StableIndex(1.0));

  // indicator: sup 1/V(|x|) over [a, b] sits at the interval's closest
  // approach to the origin
  CHECK(norm_v(make_indicator(0, 1), vexp) == 1.0);
  CHECK(norm_v(make_indicator(0, 1), vone) == 1.0);
  CHECK(norm_v(make_indicator(0, 1), vpoly) == 1.0);
  CHECK(norm_v(make_indicator(-2, -1), vexp) == doctest::Approx(std::exp(-1.0)));
  CHECK(norm_v(make_indicator(2, 5), vexp) == doctest::Approx(std::exp(-2.0)));

  // calculus oracle: sup x^2 e^{-x} = 4 e^{-2}
  CHECK(norm_v(make_quadratic(), vexp) == doctest::Approx(4.0 * std::exp(-2.0)).epsilon(1e-12));
  // sup x e^{-x} = e^{-1}
  CHECK(norm_v(make_linear(), vexp) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // sup sqrt(x) e^{-x} = sqrt(1/2) e^{-1/2}
  CHECK(norm_v(make_holder_power(0.5), vexp) ==
        doctest::Approx(std::sqrt(0.5) * std::exp(-0.5)).epsilon(1e-12));
  // sup |x|^0.5 / (1+|x|)^0.5 = 1 in the limit
  CHECK(norm_v(make_holder_power(0.5), vpoly) == 1.0);

  TestFunction zero = make_table({0.0, 1.0}, {0.0, 0.0});
  CHECK(norm_v(zero, vexp) == 0.0);
}

TEST_CASE("norm_v rejects inadmissible pairs") {
  WeightV vone = make_v_exponential(0.0);
  WeightV vpoly = make_v_polynomial(0.5, StableIndex(1.0));
  CHECK_THROWS_AS(norm_v(make_linear(), vone), std::domain_error);
  CHECK_THROWS_AS(norm_v(make_linear(), vpoly), std::domain_error);   // beta < 1
  CHECK_THROWS_AS(norm_v(make_quadratic(), vpoly), std::domain_error);
  CHECK_THROWS_AS(norm_v(make_holder_power(0.7), vpoly), std::domain_error);  // beta < gamma
}

TEST_CASE("norm_v scales linearly in the integrand") {
  WeightV vexp = make_v_exponential(0.5);
  std::vector<double> xs = {-2.0, 0.0, 1.0, 4.0};
  std::vector<double> ys = {1.0, -0.5, 2.0, 0.25};
  double base = norm_v(make_table(xs, ys), vexp);
  for (double c : {0.0, 2.0, -3.0}) {
    std::vector<double> scaled = ys;
    for (auto& y : scaled) y *= c;
    CHECK(norm_v(make_table(xs, scaled), vexp) ==
          doctest::Approx(std::fabs(c) * base).epsilon(1e-12));
  }
}

TEST_CASE("norm_v with the trivial weight is the sup norm for bounded h") {
  WeightV vone = make_v_exponential(0.0);
  CHECK(norm_v(make_indicator(-3, 8), vone) == 1.0);
  TestFunction t = make_table({-1.0, 0.0, 1.0}, {0.5, -2.0, 1.0});
  CHECK(norm_v(t, vone) == doctest::Approx(2.0));
}

TEST_CASE("holder data") {
  HolderData lin = norm_holder(make_linear());
  CHECK(lin.gamma == 1.0);
  CHECK(lin.value == 1.0);
  HolderData h05 = norm_holder(make_holder_power(0.5));
  CHECK(h05.gamma == 0.5);
  CHECK(h05.value == 1.0);
  CHECK_THROWS_AS(norm_holder(make_indicator(0, 1)), std::domain_error);
  CHECK_THROWS_AS(norm_holder(make_quadratic()), std::domain_error);
  HolderData tab = norm_holder(make_table({0.0, 1.0, 2.0}, {0.0, 3.0, 2.0}));
  CHECK(tab.gamma == 1.0);
  CHECK(tab.value == 3.0);

  CHECK(is_holder(make_linear()));
  CHECK(is_holder(make_holder_power(0.3)));
  CHECK_FALSE(is_holder(make_indicator(0, 1)));
  CHECK_FALSE(is_holder(make_quadratic()));
}

TEST_CASE("square-root seminorm is attained: property check") {
  // sup ||x|^g - |y|^g| / |x - y|^g = 1, witnessed at (0, y) and never above
  CounterRng rng(77, 0);
  for (double g : {0.3, 0.5, 0.9}) {
    for (int i = 0; i < 10000; ++i) {
      double x = 20.0 * (rng.uniform01() - 0.5);
      double y = 20.0 * (rng.uniform01() - 0.5);
      if (x == y) continue;
      double num = std::fabs(std::pow(std::fabs(x), g) - std::pow(std::fabs(y), g));
      double den = std::pow(std::fabs(x - y), g);
      CHECK(num <= den * (1.0 + 1e-12));
    }
    double witness = std::pow(std::fabs(2.0), g) / std::pow(2.0, g);
    CHECK(witness == 1.0);
  }
}
