#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "funcrate/config.hpp"
#include "funcrate/functionals.hpp"
#include "funcrate/kernels.hpp"
#include "funcrate/processes.hpp"

namespace funcrate {

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(M)
  long M = 0;
  double p = 1.0;  // moment order the value estimates
};

inline double lp_root(const MCEstimate& e) {
  return e.value <= 0.0 ? 0.0 : std::pow(e.value, 1.0 / e.p);
}

// Per-replicate discrepancy scalars for every ladder rung, simulated on
// coupled grids. Replicates may run on any number of worker threads; the
// matrix is identical regardless (per-replicate streams, fixed-slot writes).
struct ReplicateMatrix {
  std::vector<int> ladder;
  long M = 0;
  std::vector<double> values;  // M x ladder.size(), row-major by replicate

  double at(long replicate, std::size_t rung) const {
    return values[static_cast<std::size_t>(replicate) * ladder.size() + rung];
  }
};

ReplicateMatrix simulate_discrepancies(const ExperimentConfig& cfg);
// Same with an overridden replicate count (calibration-stability reruns).
ReplicateMatrix simulate_discrepancies(const ExperimentConfig& cfg, long replicates);

std::map<int, MCEstimate> strong_from_matrix(const ReplicateMatrix& m, double p);
std::map<int, MCEstimate> weak_from_matrix(const ReplicateMatrix& m);

// Monte Carlo mean of |J_{T,n}|^p per rung with CLT standard errors.
std::map<int, MCEstimate> strong_error_lp(const ExperimentConfig& cfg);
// |mean of J_{T,n}| per rung with the standard error of the mean.
std::map<int, MCEstimate> weak_error(const ExperimentConfig& cfg);

// Worst case over (r, s) pairs of E|X_s - X_r|^{gp} / (s - r)^{gp/alpha},
// estimated from M sampled paths (times snapped to the grid). Certifies the
// moment-scaling inequality behind the Holder-rate improvement.
double moment_scaling_check(const ProcessSpec& process, StableIndex alpha, double exponent_gp,
                            std::span<const std::pair<double, double>> pairs,
                            const PathGrid& grid, long M, std::uint64_t seed);

// (log n / n) * C_{T,Q,V} * ||h||_V * V(|x0|) with
// C_{T,Q,V} = T * max{ C_T * int Q(y) V(T^{1/alpha}|y|) dy, 1 }.
double bound_prop21(int n, double T, const MajorantQ& Q, const WeightV& V, StableIndex alpha,
                    double c_t, double norm_v_h, double x0);

// C (log n / n)^{p/2} ||h||_V^p V^p(|x0|); requires p >= 2, n >= 2.
double bound_thm1(int n, double p, double norm_v_h, double v_at_x0, double C);

// C (log n / n)^{p/2} n^{-gamma p/(2 alpha)} ||h||_g^{p/2}
//   (||h||_g^{p/2} + ||h||_V^{p/2} V^{p/2}(|x0|)).
double bound_thm2(int n, double p, double gamma, StableIndex alpha, double norm_gamma_h,
                  double norm_v_h, double v_at_x0, double C);

struct KohatsuExponent {
  double exponent;  // -p (1 + gamma) / 2
  bool log_factor;  // gamma = 1 carries an extra (log n)^p
};

// Comparison exponent from the diffusion-specific bounds, gamma in (0, 1].
KohatsuExponent kohatsu_reference_exponent(double gamma, double p);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  AbscissaMode mode = AbscissaMode::kLogN;
  std::vector<std::pair<int, double>> points;
  std::vector<double> residuals;
};

// Ordinary least squares of log(error) against log n or log(n / log n).
// Requires >= 3 points and strictly positive errors.
RateFit fit_rate(const std::map<int, double>& points, AbscissaMode mode);

// Smallest C with measured <= C * shape for all rungs (max ratio).
double calibrate_constant(const std::map<int, MCEstimate>& measured,
                          const std::map<int, double>& shape);

}  // namespace funcrate
