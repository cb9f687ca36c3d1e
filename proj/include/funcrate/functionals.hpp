#pragma once

#include <span>
#include <string>
#include <vector>

#include "funcrate/kernels.hpp"
#include "funcrate/processes.hpp"

namespace funcrate {

enum class HKind { kIndicator, kLinear, kQuadratic, kHolderPower, kCustomTable };

// Integrand h with the metadata the rate bounds need. Indicator uses the
// closed-open convention [a, b) so endpoint evaluation is deterministic.
struct TestFunction {
  HKind kind = HKind::kLinear;
  double a = 0.0, b = 0.0;       // indicator
  double gamma = 1.0;            // holder power |x|^gamma
  std::vector<double> xs, ys;    // custom table, strictly increasing xs

  std::string describe() const;
};

TestFunction make_indicator(double a, double b);
TestFunction make_linear();
TestFunction make_quadratic();
TestFunction make_holder_power(double gamma);
TestFunction make_table(std::vector<double> xs, std::vector<double> ys);
// Two-column text file, '#' comments allowed.
TestFunction load_table(const std::string& path);

// Pointwise value; tables interpolate linearly inside their range and
// extrapolate as constants outside.
double eval_h(const TestFunction& h, double x);

// Left-endpoint integral sum (T/n) sum_{k=0}^{n-1} h(X_{kT/n}) over the exact
// subsample of the path. n must divide n_fine.
double riemann_sum(const TestFunction& h, const SamplePath& path, int n);

// Reference value of int_0^T h(X_t) dt at the finest resolution: exactly
// riemann_sum at n = n_fine.
double reference_integral(const TestFunction& h, const SamplePath& path);

// J_{T,n}(h) = reference - coarse sum, accumulated in the telescoped form
// (T/n_fine) sum_j [h(X_{t_j}) - h(X_{eta_n(t_j)})] with exact compensated
// sums, so the two algebraically equal routes round identically.
double discrepancy(const TestFunction& h, const SamplePath& path, int n);

// J for every rung of a ladder on one path; h is evaluated once per fine
// node. Bit-identical to calling discrepancy per rung.
void discrepancy_ladder(const TestFunction& h, const SamplePath& path, std::span<const int> ns,
                        std::span<double> out, std::vector<double>& h_scratch);

// ||h||_V = sup_x |h(x)| / V(|x|). Analytic for built-in kinds; for tables a
// grid supremum over the table range (a lower bound of the true sup).
// Throws if the pair is inadmissible (sup infinite).
double norm_v(const TestFunction& h, const WeightV& V);

struct HolderData {
  double gamma;
  double value;  // ||h||_gamma
};

// Analytic Holder data: linear -> (1,1), |x|^gamma -> (gamma,1), tables ->
// (1, max segment slope). Indicator and quadratic are not Holder; throws.
HolderData norm_holder(const TestFunction& h);

bool is_holder(const TestFunction& h);

}  // namespace funcrate
