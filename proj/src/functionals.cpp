#include "funcrate/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "funcrate/detail/compensated.hpp"

namespace funcrate {

namespace {

using detail::DoubleDouble;

void require_divides(int n, int n_fine) {
  if (n < 1 || n_fine % n != 0) {
    std::ostringstream msg;
    msg << n << " does not divide " << n_fine;
    throw std::invalid_argument(msg.str());
  }
}

double table_value(const TestFunction& h, double x) {
  if (x <= h.xs.front()) return h.ys.front();
  if (x >= h.xs.back()) return h.ys.back();
  auto it = std::upper_bound(h.xs.begin(), h.xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - h.xs.begin());
  double t = (x - h.xs[i - 1]) / (h.xs[i] - h.xs[i - 1]);
  return h.ys[i - 1] + t * (h.ys[i] - h.ys[i - 1]);
}

// Coarse-sum core shared by riemann_sum and reference_integral.
DoubleDouble coarse_sum(const TestFunction& h, const SamplePath& path, int n) {
  const int stride = path.grid.n_fine / n;
  DoubleDouble acc;
  for (int k = 0; k < n; ++k) {
    acc = detail::dd_add(acc, eval_h(h, path.values[static_cast<std::size_t>(k) * stride]));
  }
  return acc;
}

// Telescoped discrepancy core: (T/N) sum_j [h_j - h(left coarse node)].
// Identical operation order for the buffered and unbuffered callers, so both
// produce the same bits.
template <class ValueAt>
double telescoped_discrepancy(ValueAt value_at, int n_fine, double fine_dt, int n) {
  const int stride = n_fine / n;
  DoubleDouble acc;
  for (int k = 0; k < n; ++k) {
    const int base = k * stride;
    const double coarse = value_at(base);
    for (int j = base; j < base + stride; ++j) {
      acc = detail::dd_add(acc, value_at(j));
      acc = detail::dd_add(acc, -coarse);
    }
  }
  return detail::dd_round(detail::dd_mul(acc, fine_dt));
}

}  // namespace

std::string TestFunction::describe() const {
  std::ostringstream msg;
  switch (kind) {
    case HKind::kIndicator:
      msg << "indicator [" << a << ", " << b << ")";
      break;
    case HKind::kLinear:
      msg << "linear";
      break;
    case HKind::kQuadratic:
      msg << "quadratic";
      break;
    case HKind::kHolderPower:
      msg << "|x|^" << gamma;
      break;
    case HKind::kCustomTable:
      msg << "table[" << xs.size() << " nodes]";
      break;
  }
  return msg.str();
}

TestFunction make_indicator(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("indicator requires a < b");
  TestFunction h;
  h.kind = HKind::kIndicator;
  h.a = a;
  h.b = b;
  return h;
}

TestFunction make_linear() {
  TestFunction h;
  h.kind = HKind::kLinear;
  return h;
}

TestFunction make_quadratic() {
  TestFunction h;
  h.kind = HKind::kQuadratic;
  return h;
}

TestFunction make_holder_power(double gamma) {
  if (!(gamma > 0.0) || !(gamma <= 1.0)) {
    throw std::invalid_argument("holder power requires gamma in (0, 1]");
  }
  TestFunction h;
  h.kind = HKind::kHolderPower;
  h.gamma = gamma;
  return h;
}

TestFunction make_table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw std::invalid_argument("table requires >= 2 matching (x, y) pairs");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("table abscissae must be strictly increasing");
    }
  }
  TestFunction h;
  h.kind = HKind::kCustomTable;
  h.xs = std::move(xs);
  h.ys = std::move(ys);
  return h;
}

TestFunction load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file '" + path + "'");
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x, y;
    if (row >> x >> y) {
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  return make_table(std::move(xs), std::move(ys));
}

double eval_h(const TestFunction& h, double x) {
  switch (h.kind) {
    case HKind::kIndicator:
      return (x >= h.a && x < h.b) ? 1.0 : 0.0;
    case HKind::kLinear:
      return x;
    case HKind::kQuadratic:
      return x * x;
    case HKind::kHolderPower:
      return std::pow(std::fabs(x), h.gamma);
    case HKind::kCustomTable:
      return table_value(h, x);
  }
  throw std::logic_error("unreachable integrand kind");
}

double riemann_sum(const TestFunction& h, const SamplePath& path, int n) {
  require_divides(n, path.grid.n_fine);
  return detail::dd_round(detail::dd_mul(coarse_sum(h, path, n), path.grid.horizon / n));
}

double reference_integral(const TestFunction& h, const SamplePath& path) {
  return riemann_sum(h, path, path.grid.n_fine);
}

double discrepancy(const TestFunction& h, const SamplePath& path, int n) {
  require_divides(n, path.grid.n_fine);
  auto value_at = [&](int j) { return eval_h(h, path.values[static_cast<std::size_t>(j)]); };
  return telescoped_discrepancy(value_at, path.grid.n_fine, path.grid.dt(), n);
}

void discrepancy_ladder(const TestFunction& h, const SamplePath& path, std::span<const int> ns,
                        std::span<double> out, std::vector<double>& h_scratch) {
  if (out.size() != ns.size()) throw std::invalid_argument("ladder output size mismatch");
  const int N = path.grid.n_fine;
  h_scratch.resize(static_cast<std::size_t>(N) + 1);
  for (int j = 0; j <= N; ++j) {
    h_scratch[static_cast<std::size_t>(j)] = eval_h(h, path.values[static_cast<std::size_t>(j)]);
  }
  auto value_at = [&](int j) { return h_scratch[static_cast<std::size_t>(j)]; };
  for (std::size_t i = 0; i < ns.size(); ++i) {
    require_divides(ns[i], N);
    out[i] = telescoped_discrepancy(value_at, N, path.grid.dt(), ns[i]);
  }
}

namespace {

[[noreturn]] void divergent_norm(const TestFunction& h, const WeightV& V) {
  std::ostringstream msg;
  msg << "||h||_V divergent for h = " << h.describe() << " with "
      << (V.family == VFamily::kExponential ? "exponential" : "polynomial") << " weight";
  throw std::domain_error(msg.str());
}

// sup_{r>=0} r^g / V(r) for growth exponent g > 0.
double growth_norm(double g, const WeightV& V, const TestFunction& h) {
  if (V.family == VFamily::kExponential) {
    if (V.C == 0.0) divergent_norm(h, V);
    double r = g / V.C;
    return std::pow(r, g) * std::exp(-g);
  }
  if (V.beta < g) divergent_norm(h, V);
  if (V.beta == g) return 1.0;  // supremum in the limit r -> infinity
  double r = g / (V.beta - g);
  return std::pow(r, g) / std::pow(1.0 + r, V.beta);
}

}  // namespace

double norm_v(const TestFunction& h, const WeightV& V) {
  switch (h.kind) {
    case HKind::kIndicator: {
      // sup over [a, b] of 1/V(|x|); V nondecreasing, so the distance from 0
      // to the interval decides.
      double d = h.a > 0.0 ? h.a : (h.b < 0.0 ? -h.b : 0.0);
      return 1.0 / V(d);
    }
    case HKind::kLinear:
      return growth_norm(1.0, V, h);
    case HKind::kQuadratic:
      return growth_norm(2.0, V, h);
    case HKind::kHolderPower:
      return growth_norm(h.gamma, V, h);
    case HKind::kCustomTable: {
      double sup = 0.0;
      // Constant extrapolation beyond the range: the ray supremum is the
      // endpoint value over V at the ray's closest approach to 0.
      double left_close = h.xs.front() >= 0.0 ? 0.0 : -h.xs.front();
      double right_close = h.xs.back() <= 0.0 ? 0.0 : h.xs.back();
      sup = std::max(sup, std::fabs(h.ys.front()) / V(left_close));
      sup = std::max(sup, std::fabs(h.ys.back()) / V(right_close));
      const int samples_per_segment = 64;
      for (std::size_t i = 0; i + 1 < h.xs.size(); ++i) {
        for (int s = 0; s <= samples_per_segment; ++s) {
          double x = h.xs[i] + (h.xs[i + 1] - h.xs[i]) * s / samples_per_segment;
          sup = std::max(sup, std::fabs(table_value(h, x)) / V(std::fabs(x)));
        }
      }
      return sup;
    }
  }
  throw std::logic_error("unreachable integrand kind");
}

HolderData norm_holder(const TestFunction& h) {
  switch (h.kind) {
    case HKind::kLinear:
      return {1.0, 1.0};
    case HKind::kHolderPower:
      return {h.gamma, 1.0};  // sup ||x|^g - |y|^g| / |x-y|^g = 1 by subadditivity
    case HKind::kCustomTable: {
      double max_slope = 0.0;
      for (std::size_t i = 0; i + 1 < h.xs.size(); ++i) {
        max_slope =
            std::max(max_slope, std::fabs((h.ys[i + 1] - h.ys[i]) / (h.xs[i + 1] - h.xs[i])));
      }
      return {1.0, max_slope};
    }
    case HKind::kIndicator:
    case HKind::kQuadratic:
      throw std::domain_error("h = " + h.describe() + " is not Holder continuous");
  }
  throw std::logic_error("unreachable integrand kind");
}

bool is_holder(const TestFunction& h) {
  return h.kind == HKind::kLinear || h.kind == HKind::kHolderPower ||
         h.kind == HKind::kCustomTable;
}

}  // namespace funcrate
