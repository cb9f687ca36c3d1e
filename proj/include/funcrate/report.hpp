#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "funcrate/rates.hpp"

#include "json.hpp"

namespace funcrate {

struct RungRecord {
  int n = 0;
  MCEstimate weak;
  MCEstimate strong;
  double strong_lp_root = 0.0;
  double bound_prop21 = 0.0;              // explicit-constant curve
  double bound_thm1 = 0.0;                // calibrated curve
  std::optional<double> bound_thm2;       // calibrated curve, Holder h only
  std::optional<double> kohatsu_overlay;  // anchored comparison curve
};

struct KernelSection {
  double c_t_density = 0.0;
  double c_t_derivative = 0.0;
  double c_t = 0.0;  // max of the two, used by the prop21 constant
  double qv_weight_power1 = 0.0;
  double qv_weight_powerp = 0.0;
  double norm_v_h = 0.0;
  double v_at_x0 = 0.0;
};

struct Timing {
  double wall_seconds = 0.0;
  double replicates_per_second = 0.0;
};

struct Report {
  std::string schema_version = "1";
  std::map<std::string, std::string> config_echo;
  KernelSection kernel;
  std::vector<RungRecord> rungs;
  std::optional<RateFit> strong_fit;
  std::optional<RateFit> weak_fit;
  double thm1_calibration = 0.0;
  std::optional<double> thm2_calibration;
  double prop21_headroom = 0.0;  // max weak / prop21 bound, <= 1 when dominated
  std::optional<KohatsuExponent> kohatsu;
  Timing timing;  // excluded from the determinism contract
};

// CSV columns, exactly:
// n, weak_err, weak_se, strong_err_p, strong_se, strong_lp_root,
// bound_prop21, bound_thm1, bound_thm2
std::string report_csv(const Report& report);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

std::string report_svg(const Report& report);

void emit_csv(const Report& report, const std::string& path);
void emit_json(const Report& report, const std::string& path);
void emit_svg(const Report& report, const std::string& path);

}  // namespace funcrate
