#include "funcrate/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace funcrate {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Double-exponential nodes probe far into mapped tails; a non-finite
// abscissa or value stands for a vanished contribution there.
template <class F>
auto guarded(F f) {
  return [f](double y) {
    if (!std::isfinite(y)) return 0.0;
    double v = f(y);
    return std::isfinite(v) ? v : 0.0;
  };
}

template <class F>
double integrate_half_line(F f, double tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(guarded(f), 0.0, kInf, tol);
}

// --- stable density inversion -------------------------------------------
//
// g_1^{(alpha)}(u) = (1/pi) int_0^inf cos(u xi) exp(-xi^alpha) dxi.
// Truncate where the envelope is below 1e-18, walk the oscillation in
// half-period panels (fixed 15-point Gauss per panel; the first panel is
// adaptive because the envelope has a derivative kink at 0 for alpha < 1).
// For large |u| the series expansion in u^{-alpha k - 1} is cheaper and more
// accurate; it is convergent for alpha < 1 and asymptotic above, so it is
// used only when optimal truncation reaches the target accuracy.

double g1_panels(double alpha, double u) {
  const double xi_max = std::pow(-std::log(1e-18), 1.0 / alpha);
  auto f = [&](double xi) { return std::cos(u * xi) * std::exp(-std::pow(xi, alpha)); };
  namespace bq = boost::math::quadrature;
  if (u * xi_max < 4.0) {
    return bq::gauss_kronrod<double, 15>::integrate(f, 0.0, xi_max, 15, 1e-12) / kPi;
  }
  const double half = kPi / u;
  double acc = bq::gauss_kronrod<double, 15>::integrate(f, 0.0, std::min(half, xi_max), 15, 1e-12);
  double a = half;
  while (a < xi_max) {
    double b = std::min(a + half, xi_max);
    acc += bq::gauss<double, 15>::integrate(f, a, b);
    a = b;
  }
  return acc / kPi;
}

bool g1_tail_series(double alpha, double u, double* out) {
  const double log_u = std::log(u);
  double sum = 0.0;
  double prev_mag = kInf;
  for (int k = 1; k <= 200; ++k) {
    double log_mag =
        std::lgamma(alpha * k + 1.0) - std::lgamma(k + 1.0) - (alpha * k + 1.0) * log_u;
    double mag = std::exp(log_mag);
    if (mag >= prev_mag) return false;  // asymptotic terms turned; not accurate enough
    double term = ((k % 2) ? mag : -mag) * std::sin(k * kPi * alpha / 2.0);
    sum += term;
    prev_mag = mag;
    if (mag < 1e-16 * std::fabs(sum) + 1e-300) {
      *out = sum / kPi;
      return true;
    }
  }
  return false;
}

double g1_std(double alpha, double u) {
  u = std::fabs(u);
  double value;
  if (u >= 50.0 && alpha < 2.0 && g1_tail_series(alpha, u, &value)) {
    return std::max(value, 0.0);
  }
  return std::max(g1_panels(alpha, u), 0.0);
}

double brownian_kernel(double t, double w) {
  return std::exp(-w * w / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

double brownian_kernel_dt(double t, double w) {
  return brownian_kernel(t, w) * (w * w / (2.0 * t * t) - 0.5 / t);
}

// Cauchy kernel t / (pi (t^2 + z^2)) and its time derivative.
double cauchy_kernel_dt(double t, double z) {
  double d = t * t + z * z;
  return (z * z - t * t) / (kPi * d * d);
}

void require_time(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("transition density requires t > 0");
}

}  // namespace

StableIndex::StableIndex(double a) : alpha(a) {
  if (!(a > 0.0) || !(a <= 2.0)) {
    std::ostringstream msg;
    msg << "stability index must lie in (0, 2], got " << a;
    throw std::invalid_argument(msg.str());
  }
}

double MajorantQ::operator()(double x) const {
  if (family == QFamily::kGaussian) return c1 * std::exp(-c2 * x * x);
  return c / (1.0 + std::pow(std::fabs(x), 1.0 + alpha));
}

MajorantQ make_q_gaussian(double c2) {
  if (!(c2 > 0.0)) throw std::invalid_argument("gaussian majorant requires c2 > 0");
  MajorantQ q;
  q.family = QFamily::kGaussian;
  q.c2 = c2;
  q.c1 = std::sqrt(c2 / kPi);  // normalizes int c1 exp(-c2 x^2) dx to 1
  return q;
}

MajorantQ make_q_polynomial(StableIndex alpha) {
  if (!(alpha.alpha < 2.0)) {
    throw std::invalid_argument("polynomial-tail majorant requires alpha < 2 (use gaussian)");
  }
  MajorantQ q;
  q.family = QFamily::kPolynomialTail;
  q.alpha = alpha.alpha;
  double total = 2.0 * integrate_half_line(
                           [&](double y) { return 1.0 / (1.0 + std::pow(y, 1.0 + q.alpha)); },
                           1e-10);
  q.c = 1.0 / total;
  return q;
}

double WeightV::operator()(double r) const {
  if (r < 0.0) throw std::domain_error("weight V is defined on r >= 0");
  if (family == VFamily::kExponential) return std::exp(C * r);
  return std::pow(1.0 + r, beta);
}

WeightV make_v_exponential(double C) {
  if (C < 0.0) throw std::invalid_argument("exponential weight requires C >= 0");
  WeightV v;
  v.family = VFamily::kExponential;
  v.C = C;
  return v;
}

WeightV make_v_polynomial(double beta, StableIndex alpha) {
  if (!(beta > 0.0) || !(beta < alpha.alpha)) {
    std::ostringstream msg;
    msg << "polynomial weight requires beta in (0, alpha); beta = " << beta
        << ", alpha = " << alpha.alpha;
    throw std::invalid_argument(msg.str());
  }
  WeightV v;
  v.family = VFamily::kPolynomial;
  v.beta = beta;
  return v;
}

double stable_density(StableIndex alpha, double t, double z) {
  require_time(t);
  double scale = std::pow(t, -1.0 / alpha.alpha);  // self-similarity
  return scale * g1_std(alpha.alpha, scale * z);
}

double transition_density(const TransitionDensity& td, double t, double x, double y) {
  require_time(t);
  double w = y - x;
  if (td.process == ProcessKind::kBrownian) return brownian_kernel(t, w);
  return stable_density(StableIndex(td.alpha), t, w);
}

double transition_density_dt(const TransitionDensity& td, double t, double x, double y) {
  require_time(t);
  double w = y - x;
  if (td.process == ProcessKind::kBrownian) return brownian_kernel_dt(t, w);
  if (td.alpha == 1.0) return cauchy_kernel_dt(t, w);
  return transition_density_dt_fd(td, t, x, y);
}

double transition_density_dt_fd(const TransitionDensity& td, double t, double x, double y) {
  require_time(t);
  double h = t * 1e-4;
  return (transition_density(td, t + h, x, y) - transition_density(td, t - h, x, y)) / (2.0 * h);
}

EvalGrid default_eval_grid(double T, StableIndex alpha) {
  if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
  EvalGrid grid;
  const int nt = 20, nz = 201;
  grid.times.reserve(nt);
  for (int i = 0; i < nt; ++i) {
    grid.times.push_back(T / 100.0 * std::pow(100.0, static_cast<double>(i) / (nt - 1)));
  }
  grid.times.back() = T;
  double L = 5.0 * std::pow(T, 1.0 / alpha.alpha);
  grid.offsets.reserve(nz);
  for (int j = 0; j < nz; ++j) {
    grid.offsets.push_back(-L + 2.0 * L * (static_cast<double>(j) / (nz - 1)));
  }
  return grid;
}

namespace {

template <class Ratio>
double grid_supremum(const EvalGrid& grid, double T, double inv_alpha, const MajorantQ& Q,
                     Ratio ratio) {
  double sup = 0.0;
  for (double t : grid.times) {
    if (!(t > 0.0) || t > T) throw std::invalid_argument("grid times must satisfy 0 < t <= T");
    double scale = std::pow(t, -inv_alpha);
    for (double z : grid.offsets) {
      double q = Q(scale * z);
      if (!(q > 0.0)) {
        std::ostringstream msg;
        msg << "majorant vanished at t = " << t << ", z = " << z
            << " (mapped argument " << scale * z << ")";
        throw std::runtime_error(msg.str());
      }
      sup = std::max(sup, ratio(t, z) / q);
    }
  }
  return sup;
}

}  // namespace

double verify_density_bound(const TransitionDensity& td, const MajorantQ& Q, StableIndex alpha,
                            double T, const EvalGrid& grid) {
  double inv_alpha = 1.0 / alpha.alpha;
  return grid_supremum(grid, T, inv_alpha, Q, [&](double t, double z) {
    return transition_density(td, t, 0.0, z) * std::pow(t, inv_alpha);
  });
}

double verify_derivative_bound(const TransitionDensity& td, const MajorantQ& Q, StableIndex alpha,
                               double T, const EvalGrid& grid) {
  double inv_alpha = 1.0 / alpha.alpha;
  return grid_supremum(grid, T, inv_alpha, Q, [&](double t, double z) {
    return std::fabs(transition_density_dt(td, t, 0.0, z)) * std::pow(t, 1.0 + inv_alpha);
  });
}

IntegrabilityVerdict check_integrability(const MajorantQ& Q, const WeightV& V, double p, double,
                                         StableIndex) {
  if (V.trivial()) return {true, "V == 1: integral reduces to int Q = 1"};
  if (Q.family == QFamily::kGaussian) {
    return {true, "gaussian majorant dominates both weight families"};
  }
  if (V.family == VFamily::kExponential) {
    return {false, "exponential weight against a polynomial-tail majorant diverges"};
  }
  double tail = V.beta * p;
  std::ostringstream msg;
  msg << "beta * p = " << tail << (tail < Q.alpha ? " < " : " >= ") << "alpha = " << Q.alpha;
  return {tail < Q.alpha, msg.str()};
}

double qv_integral(const MajorantQ& Q, const WeightV& V, double T, StableIndex alpha,
                   double power) {
  if (!(power > 0.0)) throw std::invalid_argument("qv_integral requires a positive power");
  IntegrabilityVerdict verdict = check_integrability(Q, V, power, T, alpha);
  if (!verdict.ok) {
    throw std::domain_error("divergent weighted-majorant integral: " + verdict.reason);
  }
  const double s = std::pow(T, 1.0 / alpha.alpha);
  // Fused log-space integrand: products of near-over/underflowing factors
  // would otherwise produce inf * 0 at deep quadrature nodes.
  auto log_q = [&](double y) {
    if (Q.family == QFamily::kGaussian) return std::log(Q.c1) - Q.c2 * y * y;
    return std::log(Q.c) - std::log1p(std::pow(y, 1.0 + Q.alpha));
  };
  auto log_v_pow = [&](double y) {
    if (V.family == VFamily::kExponential) return power * V.C * s * y;
    return power * V.beta * std::log1p(s * y);
  };
  auto f = [&](double y) { return std::exp(log_q(y) + log_v_pow(y)); };
  return 2.0 * integrate_half_line(f, 1e-8);
}

}  // namespace funcrate
