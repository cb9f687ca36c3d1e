#include "funcrate/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace funcrate {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  try {
    std::size_t pos = 0;
    out = std::stoull(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool power_of_two(long long n) { return n > 0 && (n & (n - 1)) == 0; }

const char* const kKnownKeys[] = {"process", "alpha",    "preset", "h",      "weight",
                                  "majorant", "horizon_T", "x0",     "p",      "n_ladder",
                                  "N_fine",   "M",         "seed",   "abscissa_mode",
                                  "out_csv",  "out_json",  "out_svg"};

}  // namespace

std::string abscissa_mode_name(AbscissaMode mode) {
  return mode == AbscissaMode::kLogN ? "log_n" : "log_n_over_log";
}

ConfigResult parse_config_text(const std::string& text) {
  ConfigResult result;
  std::vector<std::string>& bad = result.violations;
  std::map<std::string, std::string> kv;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      bad.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      bad.push_back("line " + std::to_string(line_no) + ": empty key or value");
      continue;
    }
    if (std::find(std::begin(kKnownKeys), std::end(kKnownKeys), key) == std::end(kKnownKeys)) {
      bad.push_back("unknown key '" + key + "'");
      continue;
    }
    if (kv.count(key)) {
      bad.push_back("duplicate key '" + key + "'");
      continue;
    }
    kv[key] = value;
  }

  ExperimentConfig cfg;
  cfg.echo = kv;

  auto missing = [&](const char* key) {
    if (kv.count(key)) return false;
    bad.push_back(std::string("missing required key '") + key + "'");
    return true;
  };

  // process
  bool have_process = false;
  if (!missing("process")) {
    const std::string& v = kv["process"];
    if (v == "brownian") {
      cfg.process.kind = ProcessSpec::Kind::kBrownian;
      have_process = true;
    } else if (v == "stable") {
      cfg.process.kind = ProcessSpec::Kind::kStable;
      if (!kv.count("alpha")) {
        bad.push_back("alpha: required for the stable process");
      } else {
        double a;
        if (!parse_double(kv["alpha"], a) || !(a > 0.0) || !(a <= 2.0)) {
          bad.push_back("alpha: must be a real in (0, 2], got '" + kv["alpha"] + "'");
        } else {
          cfg.process.alpha = a;
          have_process = true;
        }
      }
    } else if (v == "diffusion") {
      cfg.process.kind = ProcessSpec::Kind::kDiffusion;
      if (!kv.count("preset")) {
        bad.push_back("preset: required for the diffusion process");
      } else {
        try {
          diffusion_preset(kv["preset"]);
          cfg.process.preset = kv["preset"];
          have_process = true;
        } catch (const std::exception& e) {
          bad.push_back(std::string("preset: ") + e.what());
        }
      }
    } else {
      bad.push_back("process: expected brownian | stable | diffusion, got '" + v + "'");
    }
  }
  if (kv.count("alpha") && kv.count("process") && kv["process"] != "stable") {
    bad.push_back("alpha: only meaningful for the stable process");
  }
  if (kv.count("preset") && kv.count("process") && kv["process"] != "diffusion") {
    bad.push_back("preset: only meaningful for the diffusion process");
  }

  // h
  bool have_h = false;
  if (!missing("h")) {
    auto toks = tokens(kv["h"]);
    try {
      if (toks.empty()) {
        bad.push_back("h: empty spec");
      } else if (toks[0] == "indicator" && toks.size() == 3) {
        double a, b;
        if (parse_double(toks[1], a) && parse_double(toks[2], b)) {
          cfg.h = make_indicator(a, b);
          have_h = true;
        } else {
          bad.push_back("h: indicator endpoints must be numbers");
        }
      } else if (toks[0] == "linear" && toks.size() == 1) {
        cfg.h = make_linear();
        have_h = true;
      } else if (toks[0] == "quadratic" && toks.size() == 1) {
        cfg.h = make_quadratic();
        have_h = true;
      } else if (toks[0] == "holder" && toks.size() == 2) {
        double g;
        if (parse_double(toks[1], g)) {
          cfg.h = make_holder_power(g);
          have_h = true;
        } else {
          bad.push_back("h: holder exponent must be a number");
        }
      } else if (toks[0] == "table" && toks.size() == 2) {
        cfg.h = load_table(toks[1]);
        have_h = true;
      } else {
        bad.push_back("h: expected 'indicator a b' | 'linear' | 'quadratic' | 'holder gamma' | "
                      "'table path', got '" +
                      kv["h"] + "'");
      }
    } catch (const std::exception& e) {
      bad.push_back(std::string("h: ") + e.what());
    }
  }

  // horizon, start, moment order
  if (!missing("horizon_T")) {
    if (!parse_double(kv["horizon_T"], cfg.horizon_T) || !(cfg.horizon_T > 0.0)) {
      bad.push_back("horizon_T: must be a positive real");
    }
  }
  if (kv.count("x0") && !parse_double(kv["x0"], cfg.x0)) {
    bad.push_back("x0: must be a real");
  }
  if (!missing("p")) {
    if (!parse_double(kv["p"], cfg.p)) {
      bad.push_back("p: must be a real");
    } else if (cfg.p < 2.0) {
      bad.push_back("p: strong-error runs require p >= 2");
    }
  }

  // weight (default V == 1)
  double weight_alpha = scaling_alpha(cfg.process);
  bool have_weight = true;
  cfg.V = make_v_exponential(0.0);
  if (kv.count("weight")) {
    auto toks = tokens(kv["weight"]);
    have_weight = false;
    try {
      if (toks.size() == 1 && toks[0] == "const") {
        cfg.V = make_v_exponential(0.0);
        have_weight = true;
      } else if (toks.size() == 2 && toks[0] == "exponential") {
        double c;
        if (parse_double(toks[1], c)) {
          cfg.V = make_v_exponential(c);
          have_weight = true;
        } else {
          bad.push_back("weight: exponential rate must be a number");
        }
      } else if (toks.size() == 2 && toks[0] == "polynomial") {
        double beta;
        if (parse_double(toks[1], beta)) {
          cfg.V = make_v_polynomial(beta, StableIndex(weight_alpha));
          have_weight = true;
        } else {
          bad.push_back("weight: polynomial exponent must be a number");
        }
      } else {
        bad.push_back("weight: expected const | exponential C | polynomial beta");
      }
    } catch (const std::exception& e) {
      bad.push_back(std::string("weight: ") + e.what());
    }
  }

  // majorant (default: gaussian for alpha = 2 scaling, polynomial otherwise)
  bool have_majorant = false;
  try {
    if (kv.count("majorant")) {
      auto toks = tokens(kv["majorant"]);
      if (toks.size() == 2 && toks[0] == "gaussian") {
        double c2;
        if (parse_double(toks[1], c2)) {
          cfg.Q = make_q_gaussian(c2);
          have_majorant = true;
        } else {
          bad.push_back("majorant: gaussian c2 must be a number");
        }
      } else if (toks.size() == 2 && toks[0] == "polynomial") {
        double qa;
        if (parse_double(toks[1], qa)) {
          cfg.Q = make_q_polynomial(StableIndex(qa));
          have_majorant = true;
        } else {
          bad.push_back("majorant: polynomial index must be a number");
        }
      } else {
        bad.push_back("majorant: expected gaussian c2 | polynomial alpha");
      }
    } else if (have_process) {
      cfg.Q = cfg.process.kind == ProcessSpec::Kind::kStable
                  ? make_q_polynomial(StableIndex(cfg.process.alpha))
                  : make_q_gaussian(0.25);
      have_majorant = true;
    }
  } catch (const std::exception& e) {
    bad.push_back(std::string("majorant: ") + e.what());
  }

  // grids and replication
  long long n_fine = 0;
  if (!missing("N_fine")) {
    if (!parse_int(kv["N_fine"], n_fine) || n_fine < 2 || !power_of_two(n_fine) ||
        n_fine > (1LL << 26)) {
      bad.push_back("N_fine: must be a power of two in [2, 2^26]");
      n_fine = 0;
    } else {
      cfg.n_fine = static_cast<int>(n_fine);
    }
  }
  if (!missing("n_ladder")) {
    auto toks = tokens(kv["n_ladder"]);
    bool ladder_ok = true;
    for (const auto& t : toks) {
      long long n;
      if (!parse_int(t, n) || n < 2) {
        bad.push_back("n_ladder: entries must be integers >= 2, got '" + t + "'");
        ladder_ok = false;
        break;
      }
      cfg.n_ladder.push_back(static_cast<int>(n));
    }
    if (ladder_ok) {
      if (cfg.n_ladder.size() < 3) {
        bad.push_back("n_ladder: need at least 3 rungs");
      }
      for (std::size_t i = 1; i < cfg.n_ladder.size(); ++i) {
        if (cfg.n_ladder[i] <= cfg.n_ladder[i - 1]) {
          bad.push_back("n_ladder: must be strictly increasing");
          break;
        }
      }
      if (n_fine > 0) {
        for (int n : cfg.n_ladder) {
          if (n_fine % n != 0) {
            bad.push_back("n_ladder: " + std::to_string(n) + " does not divide " +
                          std::to_string(n_fine));
          }
        }
        if (!cfg.n_ladder.empty()) {
          long long nmax = cfg.n_ladder.back();
          if (nmax * nmax > n_fine) {
            bad.push_back("n_ladder: max(n)^2 = " + std::to_string(nmax * nmax) +
                          " exceeds N_fine = " + std::to_string(n_fine) +
                          " (reference bias would not be second-order)");
          }
        }
      }
    }
  }
  if (!missing("M")) {
    long long m;
    if (!parse_int(kv["M"], m) || m < 2) {
      bad.push_back("M: must be an integer >= 2");
    } else {
      cfg.replicates = static_cast<long>(m);
    }
  }
  if (!missing("seed")) {  // mandatory: reproducibility is part of the contract
    if (!parse_u64(kv["seed"], cfg.seed)) {
      bad.push_back("seed: must be a 64-bit unsigned integer");
    }
  }
  if (kv.count("abscissa_mode")) {
    const std::string& v = kv["abscissa_mode"];
    if (v == "log_n") {
      cfg.abscissa_mode = AbscissaMode::kLogN;
    } else if (v == "log_n_over_log") {
      cfg.abscissa_mode = AbscissaMode::kLogNOverLog;
    } else {
      bad.push_back("abscissa_mode: expected log_n | log_n_over_log");
    }
  }
  if (kv.count("out_csv")) cfg.out_csv = kv["out_csv"];
  if (kv.count("out_json")) cfg.out_json = kv["out_json"];
  if (kv.count("out_svg")) cfg.out_svg = kv["out_svg"];

  // cross-field checks need the pieces above to have parsed
  if (have_process && have_h && have_weight && have_majorant && cfg.p >= 2.0) {
    IntegrabilityVerdict verdict =
        check_integrability(cfg.Q, cfg.V, cfg.p, cfg.horizon_T, StableIndex(weight_alpha));
    if (!verdict.ok) {
      bad.push_back("integrability: rejected, " + verdict.reason);
    }
    try {
      norm_v(cfg.h, cfg.V);
    } catch (const std::exception& e) {
      bad.push_back(std::string("h/weight: ") + e.what());
    }
  }

  if (bad.empty()) result.config = std::move(cfg);
  return result;
}

ConfigResult parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigResult r;
    r.violations.push_back("cannot open config file '" + path + "'");
    return r;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace funcrate
