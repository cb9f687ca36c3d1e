#pragma once

#include <string>
#include <vector>

namespace funcrate {

// Stability index alpha in (0, 2]. alpha = 2 is the Gaussian member.
struct StableIndex {
  double alpha;
  explicit StableIndex(double a);
};

enum class QFamily { kGaussian, kPolynomialTail };

// Normalized majorant density Q. Gaussian family: c1 * exp(-c2 x^2).
// Polynomial-tail family: c / (1 + |x|^{1+alpha}), dimension fixed to 1.
struct MajorantQ {
  QFamily family = QFamily::kGaussian;
  double alpha = 0.0;  // polynomial family tail index
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;

  double operator()(double x) const;
};

MajorantQ make_q_gaussian(double c2);
MajorantQ make_q_polynomial(StableIndex alpha);

enum class VFamily { kExponential, kPolynomial };

// Submultiplicative weight V: [0,inf) -> [1,inf), nondecreasing.
// Exponential family: exp(C r), C >= 0. Polynomial family: (1 + r)^beta.
struct WeightV {
  VFamily family = VFamily::kExponential;
  double C = 0.0;
  double beta = 0.0;

  double operator()(double r) const;
  bool trivial() const { return family == VFamily::kExponential && C == 0.0; }
};

WeightV make_v_exponential(double C);
// The polynomial weight is only admissible with beta in (0, alpha).
WeightV make_v_polynomial(double beta, StableIndex alpha);

enum class ProcessKind { kBrownian, kSymmetricStable };

struct TransitionDensity {
  ProcessKind process = ProcessKind::kBrownian;
  double alpha = 2.0;  // stable only
};

// Density of the symmetric stable law with characteristic function
// E exp(i xi X_t) = exp(-t |xi|^alpha), inverted by quadrature of the cosine
// integral. Note the alpha = 2 member has variance 2t in this convention,
// while the separate Brownian kernel is standard (variance t).
double stable_density(StableIndex alpha, double t, double z);

double transition_density(const TransitionDensity& td, double t, double x, double y);

// d/dt of the transition density: analytic for the Brownian and Cauchy
// kernels, central finite difference (step t * 1e-4) otherwise.
double transition_density_dt(const TransitionDensity& td, double t, double x, double y);
// Finite-difference route, exposed for cross-checking the analytic one.
double transition_density_dt_fd(const TransitionDensity& td, double t, double x, double y);

// Cartesian evaluation grid of (t, z) pairs with 0 < t <= T.
struct EvalGrid {
  std::vector<double> times;
  std::vector<double> offsets;
};

// t log-spaced in [T/100, T] (20 points), z linear in +-5 T^{1/alpha} (201).
EvalGrid default_eval_grid(double T, StableIndex alpha);

// Fitted constants for the scaled majorant bounds. Both return the supremum
// of the respective ratio over the grid; the certified constant is a
// grid-supremum, not a global claim.
double verify_density_bound(const TransitionDensity& td, const MajorantQ& Q, StableIndex alpha,
                            double T, const EvalGrid& grid);
double verify_derivative_bound(const TransitionDensity& td, const MajorantQ& Q, StableIndex alpha,
                               double T, const EvalGrid& grid);

struct IntegrabilityVerdict {
  bool ok = false;
  std::string reason;
};

// Analytic tail-exponent rule deciding whether int V^p(T^{1/alpha}|x|) Q(x) dx
// is finite. Divergence is never decided by quadrature failure.
IntegrabilityVerdict check_integrability(const MajorantQ& Q, const WeightV& V, double p, double T,
                                         StableIndex alpha);

// int_R Q(y) V^power(T^{1/alpha} |y|) dy, relative tolerance 1e-6 or better.
// Throws if check_integrability rejects the combination.
double qv_integral(const MajorantQ& Q, const WeightV& V, double T, StableIndex alpha, double power);

}  // namespace funcrate
