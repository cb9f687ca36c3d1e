#pragma once

#include <functional>
#include <string>
#include <vector>

#include "funcrate/kernels.hpp"
#include "funcrate/rng.hpp"

namespace funcrate {

// Uniform time grid t_j = j T / n_fine, j = 0..n_fine. n_fine is a power of
// two so coarse ladders subsample it exactly.
struct PathGrid {
  double horizon;
  int n_fine;

  PathGrid(double T, int n);
  double dt() const { return horizon / n_fine; }
  double time_at(int j) const { return dt() * j; }
};

struct SamplePath {
  PathGrid grid;
  double x0;
  std::vector<double> values;  // n_fine + 1 entries, values[0] == x0
};

SamplePath sample_brownian(double x0, const PathGrid& grid, CounterRng& rng);

// One exact draw from the law with characteristic function exp(-|xi|^alpha)
// (Chambers-Mallows-Stuck, symmetric case). alpha = 1 degenerates to tan(U),
// alpha = 2 to sqrt(2) times a standard normal.
double cms_standard(StableIndex alpha, CounterRng& rng);

SamplePath sample_stable(StableIndex alpha, double x0, const PathGrid& grid, CounterRng& rng);

// Euler-Maruyama chain on the fine grid. The chain itself is the desk-scale
// process; no claim is made about its distance to the continuous diffusion.
SamplePath sample_diffusion_euler(const std::function<double(double)>& drift,
                                  const std::function<double(double)>& sigma, double x0,
                                  const PathGrid& grid, CounterRng& rng);

// Exact reading of the fine path at the n+1 coarse nodes k n_fine / n.
// Requires n to divide n_fine.
std::vector<double> subsample(const SamplePath& path, int n);

struct DiffusionPreset {
  std::string name;
  std::function<double(double)> drift;
  std::function<double(double)> sigma;
};

// Named coefficient presets: "ou" (drift -x, sigma 1) and "unit_drift"
// (drift 1, sigma 0, a deterministic ramp).
DiffusionPreset diffusion_preset(const std::string& name);

struct ProcessSpec {
  enum class Kind { kBrownian, kStable, kDiffusion };
  Kind kind = Kind::kBrownian;
  double alpha = 2.0;  // stable index
  std::string preset;  // diffusion preset name

  std::string describe() const;
};

SamplePath sample_process(const ProcessSpec& spec, double x0, const PathGrid& grid,
                          CounterRng& rng);

// Scaling index for assumption-X bounds: the stable index for stable
// processes, 2 otherwise.
double scaling_alpha(const ProcessSpec& spec);

// Built-in kernel for the bound suite. Diffusion presets use the Brownian
// kernel as their desk-scale stand-in (parametrix heuristic).
TransitionDensity density_for(const ProcessSpec& spec);

}  // namespace funcrate
