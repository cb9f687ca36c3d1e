#include "funcrate/processes.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace funcrate {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

SamplePath make_path(double x0, const PathGrid& grid) {
  SamplePath path{grid, x0, {}};
  path.values.resize(static_cast<std::size_t>(grid.n_fine) + 1);
  path.values[0] = x0;
  return path;
}

}  // namespace

PathGrid::PathGrid(double T, int n) : horizon(T), n_fine(n) {
  if (!(T > 0.0)) throw std::invalid_argument("path grid requires a positive horizon");
  if (n < 2 || !power_of_two(n)) {
    std::ostringstream msg;
    msg << "n_fine must be a power of two >= 2, got " << n;
    throw std::invalid_argument(msg.str());
  }
}

SamplePath sample_brownian(double x0, const PathGrid& grid, CounterRng& rng) {
  SamplePath path = make_path(x0, grid);
  const double sq_dt = std::sqrt(grid.dt());
  double x = x0;
  for (int j = 1; j <= grid.n_fine; ++j) {
    x += sq_dt * rng.gaussian();
    path.values[j] = x;
  }
  return path;
}

double cms_standard(StableIndex alpha, CounterRng& rng) {
  const double a = alpha.alpha;
  if (a == 2.0) return std::sqrt(2.0) * rng.gaussian();
  double u = rng.uniform_angle();
  if (a == 1.0) return std::tan(u);
  double e = rng.exponential();
  return std::sin(a * u) / std::pow(std::cos(u), 1.0 / a) *
         std::pow(std::cos((1.0 - a) * u) / e, (1.0 - a) / a);
}

SamplePath sample_stable(StableIndex alpha, double x0, const PathGrid& grid, CounterRng& rng) {
  SamplePath path = make_path(x0, grid);
  const double step_scale = std::pow(grid.dt(), 1.0 / alpha.alpha);  // self-similar increments
  double x = x0;
  for (int j = 1; j <= grid.n_fine; ++j) {
    x += step_scale * cms_standard(alpha, rng);
    path.values[j] = x;
  }
  return path;
}

SamplePath sample_diffusion_euler(const std::function<double(double)>& drift,
                                  const std::function<double(double)>& sigma, double x0,
                                  const PathGrid& grid, CounterRng& rng) {
  SamplePath path = make_path(x0, grid);
  const double dt = grid.dt();
  const double sq_dt = std::sqrt(dt);
  double x = x0;
  for (int j = 1; j <= grid.n_fine; ++j) {
    double a = drift(x);
    double b = sigma(x);
    if (!std::isfinite(a) || !std::isfinite(b)) {
      std::ostringstream msg;
      msg << "non-finite coefficient at step " << j << " (x = " << x << ")";
      throw std::runtime_error(msg.str());
    }
    x += a * dt + b * sq_dt * rng.gaussian();
    if (!std::isfinite(x)) {
      std::ostringstream msg;
      msg << "state diverged at step " << j;
      throw std::runtime_error(msg.str());
    }
    path.values[j] = x;
  }
  return path;
}

std::vector<double> subsample(const SamplePath& path, int n) {
  const int N = path.grid.n_fine;
  if (n < 1 || N % n != 0) {
    std::ostringstream msg;
    msg << n << " does not divide " << N;
    throw std::invalid_argument(msg.str());
  }
  const int stride = N / n;
  std::vector<double> coarse(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    coarse[k] = path.values[static_cast<std::size_t>(k) * stride];
  }
  return coarse;
}

DiffusionPreset diffusion_preset(const std::string& name) {
  if (name == "ou") {
    return {"ou", [](double x) { return -x; }, [](double) { return 1.0; }};
  }
  if (name == "unit_drift") {
    return {"unit_drift", [](double) { return 1.0; }, [](double) { return 0.0; }};
  }
  throw std::invalid_argument("unknown diffusion preset '" + name + "'");
}

std::string ProcessSpec::describe() const {
  switch (kind) {
    case Kind::kBrownian:
      return "brownian";
    case Kind::kStable: {
      std::ostringstream msg;
      msg << "stable alpha=" << alpha;
      return msg.str();
    }
    case Kind::kDiffusion:
      return "diffusion " + preset;
  }
  return "?";
}

SamplePath sample_process(const ProcessSpec& spec, double x0, const PathGrid& grid,
                          CounterRng& rng) {
  switch (spec.kind) {
    case ProcessSpec::Kind::kBrownian:
      return sample_brownian(x0, grid, rng);
    case ProcessSpec::Kind::kStable:
      return sample_stable(StableIndex(spec.alpha), x0, grid, rng);
    case ProcessSpec::Kind::kDiffusion: {
      DiffusionPreset preset = diffusion_preset(spec.preset);
      return sample_diffusion_euler(preset.drift, preset.sigma, x0, grid, rng);
    }
  }
  throw std::logic_error("unreachable process kind");
}

double scaling_alpha(const ProcessSpec& spec) {
  return spec.kind == ProcessSpec::Kind::kStable ? spec.alpha : 2.0;
}

TransitionDensity density_for(const ProcessSpec& spec) {
  if (spec.kind == ProcessSpec::Kind::kStable) {
    return {ProcessKind::kSymmetricStable, spec.alpha};
  }
  return {ProcessKind::kBrownian, 2.0};
}

}  // namespace funcrate
