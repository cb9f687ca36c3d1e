#include "funcrate/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace funcrate {

namespace {

// Shortest round-trippable decimal form; deterministic across runs.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

nlohmann::json estimate_json(const MCEstimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}, {"M", e.M}, {"p", e.p}};
}

MCEstimate estimate_from(const nlohmann::json& j) {
  return {j.at("value").get<double>(), j.at("std_error").get<double>(), j.at("M").get<long>(),
          j.at("p").get<double>()};
}

nlohmann::json fit_json(const RateFit& f) {
  nlohmann::json points = nlohmann::json::array();
  for (auto [n, err] : f.points) points.push_back({{"n", n}, {"error", err}});
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"r_squared", f.r_squared},
          {"abscissa_mode", abscissa_mode_name(f.mode)},
          {"points", points},
          {"residuals", f.residuals}};
}

RateFit fit_from(const nlohmann::json& j) {
  RateFit f;
  f.slope = j.at("slope").get<double>();
  f.intercept = j.at("intercept").get<double>();
  f.r_squared = j.at("r_squared").get<double>();
  f.mode = j.at("abscissa_mode").get<std::string>() == "log_n" ? AbscissaMode::kLogN
                                                               : AbscissaMode::kLogNOverLog;
  for (const auto& p : j.at("points")) {
    f.points.emplace_back(p.at("n").get<int>(), p.at("error").get<double>());
  }
  f.residuals = j.at("residuals").get<std::vector<double>>();
  return f;
}

}  // namespace

std::string report_csv(const Report& report) {
  std::ostringstream out;
  out << "n,weak_err,weak_se,strong_err_p,strong_se,strong_lp_root,bound_prop21,bound_thm1,"
         "bound_thm2\n";
  for (const auto& r : report.rungs) {
    out << r.n << ',' << num(r.weak.value) << ',' << num(r.weak.std_error) << ','
        << num(r.strong.value) << ',' << num(r.strong.std_error) << ',' << num(r.strong_lp_root)
        << ',' << num(r.bound_prop21) << ',' << num(r.bound_thm1) << ','
        << (r.bound_thm2 ? num(*r.bound_thm2) : "") << '\n';
  }
  return out.str();
}

nlohmann::json report_to_json(const Report& report) {
  nlohmann::json j;
  j["schema_version"] = report.schema_version;
  j["config"] = report.config_echo;
  j["kernel"] = {{"c_t_density", report.kernel.c_t_density},
                 {"c_t_derivative", report.kernel.c_t_derivative},
                 {"c_t", report.kernel.c_t},
                 {"qv_weight_power1", report.kernel.qv_weight_power1},
                 {"qv_weight_powerp", report.kernel.qv_weight_powerp},
                 {"norm_v_h", report.kernel.norm_v_h},
                 {"v_at_x0", report.kernel.v_at_x0}};
  nlohmann::json rungs = nlohmann::json::array();
  for (const auto& r : report.rungs) {
    nlohmann::json rj;
    rj["n"] = r.n;
    rj["weak"] = estimate_json(r.weak);
    rj["strong"] = estimate_json(r.strong);
    rj["strong_lp_root"] = r.strong_lp_root;
    rj["bound_prop21"] = r.bound_prop21;
    rj["bound_thm1"] = r.bound_thm1;
    rj["bound_thm2"] = r.bound_thm2 ? nlohmann::json(*r.bound_thm2) : nlohmann::json();
    rj["kohatsu_overlay"] =
        r.kohatsu_overlay ? nlohmann::json(*r.kohatsu_overlay) : nlohmann::json();
    rungs.push_back(rj);
  }
  j["rungs"] = rungs;
  j["strong_fit"] = report.strong_fit ? fit_json(*report.strong_fit) : nlohmann::json();
  j["weak_fit"] = report.weak_fit ? fit_json(*report.weak_fit) : nlohmann::json();
  j["calibration"] = {
      {"thm1_C", report.thm1_calibration},
      {"thm2_C", report.thm2_calibration ? nlohmann::json(*report.thm2_calibration)
                                         : nlohmann::json()},
      {"prop21_headroom", report.prop21_headroom}};
  j["kohatsu"] = report.kohatsu ? nlohmann::json{{"exponent", report.kohatsu->exponent},
                                                 {"log_factor", report.kohatsu->log_factor}}
                                : nlohmann::json();
  j["timing"] = {{"wall_seconds", report.timing.wall_seconds},
                 {"replicates_per_second", report.timing.replicates_per_second}};
  return j;
}

Report report_from_json(const nlohmann::json& j) {
  Report report;
  report.schema_version = j.at("schema_version").get<std::string>();
  report.config_echo = j.at("config").get<std::map<std::string, std::string>>();
  const auto& k = j.at("kernel");
  report.kernel.c_t_density = k.at("c_t_density").get<double>();
  report.kernel.c_t_derivative = k.at("c_t_derivative").get<double>();
  report.kernel.c_t = k.at("c_t").get<double>();
  report.kernel.qv_weight_power1 = k.at("qv_weight_power1").get<double>();
  report.kernel.qv_weight_powerp = k.at("qv_weight_powerp").get<double>();
  report.kernel.norm_v_h = k.at("norm_v_h").get<double>();
  report.kernel.v_at_x0 = k.at("v_at_x0").get<double>();
  for (const auto& rj : j.at("rungs")) {
    RungRecord r;
    r.n = rj.at("n").get<int>();
    r.weak = estimate_from(rj.at("weak"));
    r.strong = estimate_from(rj.at("strong"));
    r.strong_lp_root = rj.at("strong_lp_root").get<double>();
    r.bound_prop21 = rj.at("bound_prop21").get<double>();
    r.bound_thm1 = rj.at("bound_thm1").get<double>();
    if (!rj.at("bound_thm2").is_null()) r.bound_thm2 = rj.at("bound_thm2").get<double>();
    if (!rj.at("kohatsu_overlay").is_null()) {
      r.kohatsu_overlay = rj.at("kohatsu_overlay").get<double>();
    }
    report.rungs.push_back(r);
  }
  if (!j.at("strong_fit").is_null()) report.strong_fit = fit_from(j.at("strong_fit"));
  if (!j.at("weak_fit").is_null()) report.weak_fit = fit_from(j.at("weak_fit"));
  const auto& cal = j.at("calibration");
  report.thm1_calibration = cal.at("thm1_C").get<double>();
  if (!cal.at("thm2_C").is_null()) report.thm2_calibration = cal.at("thm2_C").get<double>();
  report.prop21_headroom = cal.at("prop21_headroom").get<double>();
  if (!j.at("kohatsu").is_null()) {
    report.kohatsu = KohatsuExponent{j.at("kohatsu").at("exponent").get<double>(),
                                     j.at("kohatsu").at("log_factor").get<bool>()};
  }
  const auto& t = j.at("timing");
  report.timing.wall_seconds = t.at("wall_seconds").get<double>();
  report.timing.replicates_per_second = t.at("replicates_per_second").get<double>();
  return report;
}

namespace {

struct Series {
  std::string label;
  std::string color;
  std::string dash;  // empty = solid
  std::vector<std::pair<double, double>> points;  // (n, value), value > 0 only
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string report_svg(const Report& report) {
  std::vector<Series> series;
  auto collect = [&](const std::string& label, const std::string& color, const std::string& dash,
                     auto getter) {
    Series s{label, color, dash, {}};
    for (const auto& r : report.rungs) {
      double v = getter(r);
      if (v > 0.0 && std::isfinite(v)) s.points.emplace_back(r.n, v);
    }
    if (s.points.size() >= 2) series.push_back(std::move(s));
  };
  collect("strong L_p root", "#1f77b4", "", [](const RungRecord& r) { return r.strong_lp_root; });
  collect("weak error", "#2ca02c", "", [](const RungRecord& r) { return r.weak.value; });
  collect("prop 2.1 bound", "#d62728", "6,3", [](const RungRecord& r) { return r.bound_prop21; });
  collect("thm 2.1 bound (calibrated)", "#9467bd", "6,3", [](const RungRecord& r) {
    double root = r.bound_thm1 <= 0.0 ? 0.0 : std::pow(r.bound_thm1, r.strong.p > 0 ? 1.0 / r.strong.p : 1.0);
    return root;
  });
  collect("thm 2.2 bound (calibrated)", "#8c564b", "6,3", [](const RungRecord& r) {
    if (!r.bound_thm2) return 0.0;
    return r.strong.p > 0 ? std::pow(*r.bound_thm2, 1.0 / r.strong.p) : *r.bound_thm2;
  });
  collect("comparison exponent overlay", "#7f7f7f", "2,3", [](const RungRecord& r) {
    if (!r.kohatsu_overlay) return 0.0;
    return r.strong.p > 0 ? std::pow(*r.kohatsu_overlay, 1.0 / r.strong.p) : *r.kohatsu_overlay;
  });

  const double width = 860, height = 600;
  const double ml = 80, mr = 250, mt = 40, mb = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (auto [n, v] : s.points) {
      xmin = std::min(xmin, std::log10(n));
      xmax = std::max(xmax, std::log10(n));
      ymin = std::min(ymin, std::log10(v));
      ymax = std::max(ymax, std::log10(v));
    }
  }
  if (series.empty()) {
    xmin = 0; xmax = 1; ymin = 0; ymax = 1;
  }
  if (xmax - xmin < 1e-9) xmax = xmin + 1;
  if (ymax - ymin < 1e-9) ymax = ymin + 1;
  auto X = [&](double logn) { return ml + (logn - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto Y = [&](double logv) {
    return height - mb - (logv - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  // x ticks at the rungs
  for (const auto& r : report.rungs) {
    double x = X(std::log10(r.n));
    svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << height - mb << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << fmt(x) << "\" y=\"" << height - mb + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << r.n << "</text>\n";
  }
  // y ticks at integer powers of ten
  for (int e = static_cast<int>(std::floor(ymin)); e <= static_cast<int>(std::ceil(ymax)); ++e) {
    if (e < ymin - 0.5 || e > ymax + 0.5) continue;
    double y = Y(e);
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml << "\" y2=\""
        << fmt(y) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 10 << "\" y=\"" << fmt(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">n (log scale)</text>\n"
      << "<text x=\"20\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (mt + height - mb) / 2 << ")\">error (log scale)</text>\n";

  double legend_y = mt + 10;
  for (const auto& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\"";
    if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << " stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) svg << ' ';
      svg << fmt(X(std::log10(s.points[i].first))) << ','
          << fmt(Y(std::log10(s.points[i].second)));
    }
    svg << "\"/>\n";
    for (auto [n, v] : s.points) {
      svg << "<circle cx=\"" << fmt(X(std::log10(n))) << "\" cy=\"" << fmt(Y(std::log10(v)))
          << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
    svg << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << fmt(legend_y) << "\" x2=\""
        << width - mr + 40 << "\" y2=\"" << fmt(legend_y) << "\" stroke=\"" << s.color << "\"";
    if (!s.dash.empty()) svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << "/>\n<text x=\"" << width - mr + 46 << "\" y=\"" << fmt(legend_y + 4)
        << "\" font-size=\"12\">" << s.label << "</text>\n";
    legend_y += 20;
  }
  if (report.strong_fit) {
    svg << "<text x=\"" << width - mr + 10 << "\" y=\"" << fmt(legend_y + 10)
        << "\" font-size=\"12\">strong fit slope " << fmt(report.strong_fit->slope) << " (R^2 "
        << fmt(report.strong_fit->r_squared) << ", " << abscissa_mode_name(report.strong_fit->mode)
        << ")</text>\n";
    legend_y += 20;
  }
  if (report.weak_fit) {
    svg << "<text x=\"" << width - mr + 10 << "\" y=\"" << fmt(legend_y + 10)
        << "\" font-size=\"12\">weak fit slope " << fmt(report.weak_fit->slope) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_csv(const Report& report, const std::string& path) {
  write_file(path, report_csv(report));
}

void emit_json(const Report& report, const std::string& path) {
  write_file(path, report_to_json(report).dump(2) + "\n");
}

void emit_svg(const Report& report, const std::string& path) {
  write_file(path, report_svg(report));
}

}  // namespace funcrate
