#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "funcrate/processes.hpp"
#include "support/test_support.hpp"

using namespace funcrate;
namespace ts = test_support;

namespace {

std::vector<double> endpoints(const ProcessSpec& spec, double x0, const PathGrid& grid, long M,
                              std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(M));
  for (long r = 0; r < M; ++r) {
    CounterRng rng(seed, static_cast<std::uint64_t>(r));
    out.push_back(sample_process(spec, x0, grid, rng).values.back());
  }
  return out;
}

}  // namespace

TEST_CASE("path grid validation") {
  CHECK_NOTHROW(PathGrid(1.0, 2));
  CHECK_NOTHROW(PathGrid(0.5, 4096));
  CHECK_THROWS_AS(PathGrid(1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(PathGrid(-1.0, 8), std::invalid_argument);
}

TEST_CASE("brownian sampler hits CLT moments") {
  const long M = 20000;
  PathGrid grid(1.0, 256);
  double mean = 0.0, sq = 0.0;
  for (long r = 0; r < M; ++r) {
    CounterRng rng(11, static_cast<std::uint64_t>(r));
    SamplePath p = sample_brownian(0.5, grid, rng);
    CHECK(p.values[0] == 0.5);
    double w = p.values.back() - 0.5;
    mean += w;
    sq += w * w;
  }
  mean /= M;
  sq /= M;
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(M)));
  CHECK(std::fabs(sq - 1.0) < 0.05);  // Var X_T = T = 1 within 5%
}

TEST_CASE("brownian sampler is reproducible bit for bit") {
  PathGrid grid(1.0, 64);
  CounterRng a(123, 9), b(123, 9), c(123, 10);
  SamplePath pa = sample_brownian(0.0, grid, a);
  SamplePath pb = sample_brownian(0.0, grid, b);
  SamplePath pc = sample_brownian(0.0, grid, c);
  CHECK(pa.values == pb.values);
  CHECK(pa.values != pc.values);
}

TEST_CASE("cms draw rejects an index outside (0, 2]") {
  CounterRng rng(1, 1);
  CHECK_THROWS_AS(cms_standard(StableIndex(3.0), rng), std::invalid_argument);
}

TEST_CASE("cms draws match the Cauchy law (KS at 0.001)") {
  const std::size_t M = 100000;
  std::vector<double> draws;
  draws.reserve(M);
  CounterRng rng(2027, 0);
  for (std::size_t i = 0; i < M; ++i) draws.push_back(cms_standard(StableIndex(1.0), rng));
  double d = ts::ks_statistic(draws, ts::cauchy_cdf);
  CHECK(d < ts::ks_threshold(0.001, M));
}

TEST_CASE("cms draws at alpha = 2 have variance 2 and gaussian law") {
  const std::size_t M = 100000;
  std::vector<double> draws;
  draws.reserve(M);
  CounterRng rng(2028, 0);
  double sq = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    double x = cms_standard(StableIndex(2.0), rng);
    draws.push_back(x);
    sq += x * x;
  }
  CHECK(std::fabs(sq / M - 2.0) < 0.1);  // within 5%
  double d = ts::ks_statistic(draws, [](double x) { return ts::normal_cdf(x, 0.0, 2.0); });
  CHECK(d < ts::ks_threshold(0.001, M));
}

TEST_CASE("cms draws at a generic index have the right fractional moment") {
  // E|X|^q for the standard symmetric alpha-stable law (CF e^{-|xi|^alpha}):
  // oracle by quadrature of the tail formula is overkill here; use alpha = 1
  // (Cauchy) where E|X|^{1/2} = sec(pi/4) = sqrt(2).
  const long M = 200000;
  CounterRng rng(5, 0);
  double acc = 0.0;
  for (long i = 0; i < M; ++i) {
    acc += std::sqrt(std::fabs(cms_standard(StableIndex(1.0), rng)));
  }
  CHECK(acc / M == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("stable path endpoint follows the self-similar law") {
  const long M = 20000;
  PathGrid grid(1.0, 128);
  std::vector<double> ends = endpoints({ProcessSpec::Kind::kStable, 1.0, ""}, 0.25, grid, M, 31);
  for (auto& e : ends) e -= 0.25;
  // X_T - x0 is standard Cauchy at T = 1
  double d = ts::ks_statistic(ends, ts::cauchy_cdf);
  CHECK(d < ts::ks_threshold(0.001, ends.size()));
}

TEST_CASE("stable endpoint law is resolution invariant") {
  const long M = 20000;
  ProcessSpec spec{ProcessSpec::Kind::kStable, 1.4, ""};
  std::vector<double> coarse = endpoints(spec, 0.0, PathGrid(1.0, 64), M, 77);
  std::vector<double> fine = endpoints(spec, 0.0, PathGrid(1.0, 128), M, 78);
  double d = ts::ks_two_sample(coarse, fine);
  CHECK(d < ts::ks_threshold_two_sample(0.001, coarse.size(), fine.size()));
}

TEST_CASE("stable paths start at x0") {
  PathGrid grid(1.0, 16);
  CounterRng rng(3, 3);
  SamplePath p = sample_stable(StableIndex(0.8), -2.0, grid, rng);
  CHECK(p.values[0] == -2.0);
  CHECK(p.values.size() == 17);
}

TEST_CASE("euler chain with zero drift and unit sigma matches brownian in law") {
  const long M = 20000;
  PathGrid grid(1.0, 64);
  std::vector<double> euler, brownian;
  for (long r = 0; r < M; ++r) {
    CounterRng rng(99, static_cast<std::uint64_t>(r));
    euler.push_back(sample_diffusion_euler([](double) { return 0.0; },
                                           [](double) { return 1.0; }, 0.0, grid, rng)
                        .values.back());
  }
  for (long r = 0; r < M; ++r) {
    CounterRng rng(100, static_cast<std::uint64_t>(r));
    brownian.push_back(sample_brownian(0.0, grid, rng).values.back());
  }
  double d = ts::ks_two_sample(euler, brownian);
  CHECK(d < ts::ks_threshold_two_sample(0.001, euler.size(), brownian.size()));
}

TEST_CASE("ornstein-uhlenbeck euler mean decays like e^{-T}") {
  const long M = 20000;
  PathGrid grid(1.0, 1024);
  DiffusionPreset ou = diffusion_preset("ou");
  double mean = 0.0;
  for (long r = 0; r < M; ++r) {
    CounterRng rng(41, static_cast<std::uint64_t>(r));
    mean += sample_diffusion_euler(ou.drift, ou.sigma, 1.0, grid, rng).values.back();
  }
  mean /= M;
  // stationary variance (1 - e^{-2})/2, CLT band plus O(dt) euler bias
  double se = std::sqrt((1.0 - std::exp(-2.0)) / 2.0 / M);
  CHECK(std::fabs(mean - std::exp(-1.0)) < 4.0 * se + 1e-3);
}

TEST_CASE("deterministic ramp is exact") {
  PathGrid grid(1.0, 4096);
  DiffusionPreset ramp = diffusion_preset("unit_drift");
  for (double x0 : {0.0, 1.0}) {
    CounterRng rng(8, 0);
    SamplePath p = sample_diffusion_euler(ramp.drift, ramp.sigma, x0, grid, rng);
    CHECK(p.values.back() == x0 + 1.0);
    CHECK(p.values[1024] == x0 + 0.25);
  }
}

TEST_CASE("non-finite coefficients abort with the failing step") {
  PathGrid grid(1.0, 8);
  CounterRng rng(4, 4);
  auto bad_drift = [](double x) { return x > 0.0 ? 0.0 / 0.0 : 0.0; };
  try {
    sample_diffusion_euler(bad_drift, [](double) { return 1.0; }, 1.0, grid, rng);
    FAIL("expected a simulation error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("subsample reads the exact fine nodes") {
  PathGrid grid(1.0, 8);
  SamplePath p{grid, 0.0, {0, 1, 2, 3, 4, 5, 6, 7, 8}};
  CHECK(subsample(p, 8) == p.values);
  CHECK(subsample(p, 2) == std::vector<double>{0, 4, 8});
  CHECK(subsample(p, 1) == std::vector<double>{0, 8});
  CHECK_THROWS_AS(subsample(p, 3), std::invalid_argument);
  CHECK_THROWS_AS(subsample(p, 16), std::invalid_argument);
}

TEST_CASE("subsample coupling is bit exact on sampled paths") {
  PathGrid grid(2.0, 1024);
  CounterRng rng(15, 2);
  SamplePath p = sample_stable(StableIndex(1.7), 0.3, grid, rng);
  for (int n : {1, 2, 4, 64, 512, 1024}) {
    std::vector<double> coarse = subsample(p, n);
    int stride = 1024 / n;
    for (int k = 0; k <= n; ++k) {
      CHECK(coarse[static_cast<std::size_t>(k)] ==
            p.values[static_cast<std::size_t>(k) * stride]);
    }
  }
}

TEST_CASE("brownian increment variance scales linearly in the gap") {
  // feeds the moment-scaling inequality: E|X_s - X_r|^2 = s - r
  const long M = 40000;
  PathGrid grid(1.0, 64);
  std::vector<std::pair<int, int>> pairs = {{0, 16}, {16, 48}, {32, 64}};
  std::vector<double> acc(pairs.size(), 0.0);
  for (long r = 0; r < M; ++r) {
    CounterRng rng(55, static_cast<std::uint64_t>(r));
    SamplePath p = sample_brownian(0.0, grid, rng);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      double inc = p.values[static_cast<std::size_t>(pairs[k].second)] -
                   p.values[static_cast<std::size_t>(pairs[k].first)];
      acc[k] += inc * inc;
    }
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    double gap = grid.time_at(pairs[k].second) - grid.time_at(pairs[k].first);
    CHECK(acc[k] / M == doctest::Approx(gap).epsilon(0.05));
  }
}

TEST_CASE("process spec helpers") {
  ProcessSpec brownian{ProcessSpec::Kind::kBrownian, 2.0, ""};
  ProcessSpec stable{ProcessSpec::Kind::kStable, 1.2, ""};
  ProcessSpec diffusion{ProcessSpec::Kind::kDiffusion, 2.0, "ou"};
  CHECK(scaling_alpha(brownian) == 2.0);
  CHECK(scaling_alpha(stable) == 1.2);
  CHECK(scaling_alpha(diffusion) == 2.0);
  CHECK(density_for(stable).process == ProcessKind::kSymmetricStable);
  CHECK(density_for(diffusion).process == ProcessKind::kBrownian);
  CHECK_THROWS_AS(diffusion_preset("nope"), std::invalid_argument);
}
