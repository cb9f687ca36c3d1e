#include "funcrate/rates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "funcrate/runner.hpp"

namespace funcrate {

namespace {

void require_rung(int n) {
  if (n < 2) throw std::invalid_argument("bounds need n >= 2 (log n must be positive)");
}

double log_shape(int n) { return std::log(static_cast<double>(n)) / n; }

}  // namespace

ReplicateMatrix simulate_discrepancies(const ExperimentConfig& cfg) {
  return simulate_discrepancies(cfg, cfg.replicates);
}

ReplicateMatrix simulate_discrepancies(const ExperimentConfig& cfg, long replicates) {
  ReplicateMatrix m;
  m.ladder = cfg.n_ladder;
  m.M = replicates;
  m.values.assign(static_cast<std::size_t>(replicates) * cfg.n_ladder.size(), 0.0);
  const PathGrid grid(cfg.horizon_T, cfg.n_fine);
  const std::size_t rungs = cfg.n_ladder.size();

  struct Scratch {
    std::vector<double> h_values;
  };
  thread_local Scratch scratch;

  for_each_replicate(replicates, cfg.seed, [&](long r, CounterRng& rng) {
    SamplePath path = sample_process(cfg.process, cfg.x0, grid, rng);
    std::span<double> row(m.values.data() + static_cast<std::size_t>(r) * rungs, rungs);
    discrepancy_ladder(cfg.h, path, cfg.n_ladder, row, scratch.h_values);
  });
  return m;
}

std::map<int, MCEstimate> strong_from_matrix(const ReplicateMatrix& m, double p) {
  if (m.M < 2) throw std::invalid_argument("need at least two replicates");
  std::map<int, MCEstimate> out;
  for (std::size_t rung = 0; rung < m.ladder.size(); ++rung) {
    double mean = 0.0;
    for (long r = 0; r < m.M; ++r) mean += std::pow(std::fabs(m.at(r, rung)), p);
    mean /= static_cast<double>(m.M);
    double ss = 0.0;
    for (long r = 0; r < m.M; ++r) {
      double d = std::pow(std::fabs(m.at(r, rung)), p) - mean;
      ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(m.M - 1));
    out[m.ladder[rung]] = {mean, sd / std::sqrt(static_cast<double>(m.M)), m.M, p};
  }
  return out;
}

std::map<int, MCEstimate> weak_from_matrix(const ReplicateMatrix& m) {
  if (m.M < 2) throw std::invalid_argument("need at least two replicates");
  std::map<int, MCEstimate> out;
  for (std::size_t rung = 0; rung < m.ladder.size(); ++rung) {
    double mean = 0.0;
    for (long r = 0; r < m.M; ++r) mean += m.at(r, rung);
    mean /= static_cast<double>(m.M);
    double ss = 0.0;
    for (long r = 0; r < m.M; ++r) {
      double d = m.at(r, rung) - mean;
      ss += d * d;
    }
    double sd = std::sqrt(ss / static_cast<double>(m.M - 1));
    out[m.ladder[rung]] = {std::fabs(mean), sd / std::sqrt(static_cast<double>(m.M)), m.M, 1.0};
  }
  return out;
}

std::map<int, MCEstimate> strong_error_lp(const ExperimentConfig& cfg) {
  return strong_from_matrix(simulate_discrepancies(cfg), cfg.p);
}

std::map<int, MCEstimate> weak_error(const ExperimentConfig& cfg) {
  return weak_from_matrix(simulate_discrepancies(cfg));
}

double moment_scaling_check(const ProcessSpec& process, StableIndex alpha, double exponent_gp,
                            std::span<const std::pair<double, double>> pairs,
                            const PathGrid& grid, long M, std::uint64_t seed) {
  if (!(exponent_gp > 0.0)) throw std::invalid_argument("moment exponent must be positive");
  if (process.kind == ProcessSpec::Kind::kStable && exponent_gp >= process.alpha) {
    std::ostringstream msg;
    msg << "moment E|X|^" << exponent_gp << " diverges for stable alpha = " << process.alpha;
    throw std::invalid_argument(msg.str());
  }
  if (pairs.empty()) throw std::invalid_argument("need at least one (r, s) pair");
  if (M < 2) throw std::invalid_argument("need at least two replicates");

  // Snap pair times to grid nodes; the scaling denominator uses the snapped
  // times so discretization cannot masquerade as a scaling violation.
  std::vector<std::pair<int, int>> idx;
  for (auto [r, s] : pairs) {
    if (!(r >= 0.0) || !(s <= grid.horizon) || !(r < s)) {
      throw std::invalid_argument("pairs must satisfy 0 <= r < s <= T");
    }
    int ir = static_cast<int>(std::lround(r / grid.dt()));
    int is = static_cast<int>(std::lround(s / grid.dt()));
    if (ir == is) throw std::invalid_argument("pair collapses to one grid node");
    idx.emplace_back(ir, is);
  }

  std::vector<double> sums(static_cast<std::size_t>(M) * idx.size(), 0.0);
  for_each_replicate(M, seed, [&](long rep, CounterRng& rng) {
    SamplePath path = sample_process(process, 0.0, grid, rng);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      double incr = path.values[static_cast<std::size_t>(idx[k].second)] -
                    path.values[static_cast<std::size_t>(idx[k].first)];
      sums[static_cast<std::size_t>(rep) * idx.size() + k] =
          std::pow(std::fabs(incr), exponent_gp);
    }
  });

  double worst = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    double mean = 0.0;
    for (long rep = 0; rep < M; ++rep) {
      mean += sums[static_cast<std::size_t>(rep) * idx.size() + k];
    }
    mean /= static_cast<double>(M);
    double gap = grid.time_at(idx[k].second) - grid.time_at(idx[k].first);
    worst = std::max(worst, mean / std::pow(gap, exponent_gp / alpha.alpha));
  }
  return worst;
}

double bound_prop21(int n, double T, const MajorantQ& Q, const WeightV& V, StableIndex alpha,
                    double c_t, double norm_v_h, double x0) {
  require_rung(n);
  double qv = qv_integral(Q, V, T, alpha, 1.0);
  double c_tqv = T * std::max(c_t * qv, 1.0);
  return log_shape(n) * c_tqv * norm_v_h * V(std::fabs(x0));
}

double bound_thm1(int n, double p, double norm_v_h, double v_at_x0, double C) {
  require_rung(n);
  if (p < 2.0) throw std::invalid_argument("the moment bounds require p >= 2");
  if (!(C > 0.0)) throw std::invalid_argument("calibration constant must be positive");
  return C * std::pow(log_shape(n), p / 2.0) * std::pow(norm_v_h, p) * std::pow(v_at_x0, p);
}

double bound_thm2(int n, double p, double gamma, StableIndex alpha, double norm_gamma_h,
                  double norm_v_h, double v_at_x0, double C) {
  require_rung(n);
  if (p < 2.0) throw std::invalid_argument("the moment bounds require p >= 2");
  if (!(gamma > 0.0) || !(gamma <= 1.0)) {
    throw std::invalid_argument("Holder index must lie in (0, 1]");
  }
  if (!(C > 0.0)) throw std::invalid_argument("calibration constant must be positive");
  double hg = std::pow(norm_gamma_h, p / 2.0);
  double hv = std::pow(norm_v_h, p / 2.0) * std::pow(v_at_x0, p / 2.0);
  return C * std::pow(log_shape(n), p / 2.0) *
         std::pow(static_cast<double>(n), -gamma * p / (2.0 * alpha.alpha)) * hg * (hg + hv);
}

KohatsuExponent kohatsu_reference_exponent(double gamma, double p) {
  if (!(gamma > 0.0) || !(gamma <= 1.0)) {
    throw std::invalid_argument("comparison exponent is stated for gamma in (0, 1]");
  }
  if (p < 2.0) throw std::invalid_argument("comparison exponent is stated for p >= 2");
  return {-p * (1.0 + gamma) / 2.0, gamma == 1.0};
}

RateFit fit_rate(const std::map<int, double>& points, AbscissaMode mode) {
  if (points.size() < 3) throw std::invalid_argument("rate fit needs at least 3 points");
  RateFit fit;
  fit.mode = mode;
  std::vector<double> xs, ys;
  for (auto [n, err] : points) {
    if (n < 2) throw std::invalid_argument("rate fit needs n >= 2");
    if (!(err > 0.0)) {
      throw std::invalid_argument("rate fit needs strictly positive errors (log scale)");
    }
    double ln = std::log(static_cast<double>(n));
    xs.push_back(mode == AbscissaMode::kLogN ? ln : ln - std::log(ln));
    ys.push_back(std::log(err));
    fit.points.emplace_back(n, err);
  }
  double n_pts = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n_pts;
  my /= n_pts;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  fit.residuals.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
    fit.residuals[i] = res;
    ss_res += res * res;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double calibrate_constant(const std::map<int, MCEstimate>& measured,
                          const std::map<int, double>& shape) {
  double c = 0.0;
  for (const auto& [n, est] : measured) {
    auto it = shape.find(n);
    if (it == shape.end()) throw std::invalid_argument("shape curve missing a rung");
    if (!(it->second > 0.0)) throw std::invalid_argument("shape curve must be positive");
    c = std::max(c, est.value / it->second);
  }
  return c;
}

}  // namespace funcrate
