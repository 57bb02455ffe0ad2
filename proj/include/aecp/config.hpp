// config.hpp — run configuration for the command-line front-end
//
// Precedence: built-in defaults < JSON config file < AECP_* environment
// variables < command-line flags. Rates are in units of γ by convention.

#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "aecp/model.hpp"
#include "aecp/tolerances.hpp"

namespace aecp {

/// Malformed or out-of-range configuration; the message names the field.
class ConfigError : public InvalidParameter {
 public:
  using InvalidParameter::InvalidParameter;
};

struct TimeGrid {
  double t0 = 0.0;
  double t1 = 50.0;
  double dt = 0.5;
};

struct RegionSpec {
  double delta_min = 0.0;  // Δ_A/γ
  double delta_max = 0.6;
  int delta_steps = 61;
  std::vector<double> n_th{0.0, 0.5, 1.0};
  double g = 0.1;          // g/γ used for the rate values
};

struct RunConfig {
  JCParams model{0.0, 1.0, 1.0, 0.1, std::nullopt};
  int order = 4;
  std::vector<double> eps{0.1, 0.05};
  TimeGrid t_grid;
  TimeGrid wpg_grid{0.0, 10.0, 0.5};
  double t_inv = 10.0;
  double delta_t = 0.01;
  std::array<double, 3> rho_s0{0.3, 0.0, 0.2};  // Bloch vector of the reduced initial state
  RegionSpec region;
  Tolerances tol;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;
  bool transpose_selftest = false;
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
  }
}

template <class T>
void read_field(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

inline void read_grid(const json& j, const char* key, TimeGrid& g, const std::string& where) {
  if (!j.contains(key)) return;
  const std::string w = where + "." + key;
  reject_unknown(j.at(key), {"t0", "t1", "dt"}, w);
  read_field(j.at(key), "t0", g.t0, w);
  read_field(j.at(key), "t1", g.t1, w);
  read_field(j.at(key), "dt", g.dt, w);
}

inline void check_grid(const TimeGrid& g, const std::string& where) {
  if (!(g.t0 >= 0.0)) throw ConfigError(where + ".t0: must be >= 0");
  if (!(g.t1 >= g.t0)) throw ConfigError(where + ".t1: must be >= t0");
  if (!(g.dt > 0.0)) throw ConfigError(where + ".dt: must be > 0");
}

}  // namespace detail

inline void validate(const RunConfig& c) {
  try {
    c.model.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (c.order < 0 || c.order > 12) throw ConfigError("order: must be in [0, 12]");
  if (c.eps.empty()) throw ConfigError("eps: must list at least one value");
  for (double e : c.eps) {
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps: values must lie in (0, 1)");
  }
  detail::check_grid(c.t_grid, "t_grid");
  detail::check_grid(c.wpg_grid, "wpg_grid");
  if (!(c.t_inv >= 0.0)) throw ConfigError("t_inv: must be >= 0");
  if (!(c.delta_t > 0.0)) throw ConfigError("delta_t: must be > 0");
  const double r2 = c.rho_s0[0] * c.rho_s0[0] + c.rho_s0[1] * c.rho_s0[1] + c.rho_s0[2] * c.rho_s0[2];
  if (!(r2 <= 1.0 + 1e-12)) throw ConfigError("rho_s0: Bloch vector must have norm <= 1");
  if (c.region.delta_steps < 2) throw ConfigError("region.delta_steps: must be >= 2");
  if (!(c.region.delta_max > c.region.delta_min)) throw ConfigError("region.delta_max: must exceed delta_min");
  for (double n : c.region.n_th) {
    if (!(n >= 0.0)) throw ConfigError("region.n_th: values must be >= 0");
  }
  if (c.threads < 1) throw ConfigError("threads: must be >= 1");
  if (c.out_dir.empty()) throw ConfigError("out: must be non-empty");
}

inline RunConfig config_from_json(const nlohmann::json& j, RunConfig c = {}) {
  using detail::read_field;
  detail::reject_unknown(j, {"model", "order", "eps", "t_grid", "wpg_grid", "t_inv", "delta_t", "rho_s0",
                             "region", "tolerances", "out", "seed", "threads", "transpose_selftest"},
                         "config");
  if (j.contains("model")) {
    const auto& m = j.at("model");
    detail::reject_unknown(m, {"delta_A", "gamma", "n_th", "g", "fock_cutoff"}, "model");
    read_field(m, "delta_A", c.model.delta_A, "model");
    read_field(m, "gamma", c.model.gamma, "model");
    read_field(m, "n_th", c.model.n_th, "model");
    read_field(m, "g", c.model.g, "model");
    if (m.contains("fock_cutoff")) {
      if (m.at("fock_cutoff").is_null()) {
        c.model.fock_cutoff.reset();
      } else {
        int N = 0;
        read_field(m, "fock_cutoff", N, "model");
        c.model.fock_cutoff = N;
      }
    }
  }
  read_field(j, "order", c.order, "config");
  read_field(j, "eps", c.eps, "config");
  detail::read_grid(j, "t_grid", c.t_grid, "config");
  detail::read_grid(j, "wpg_grid", c.wpg_grid, "config");
  read_field(j, "t_inv", c.t_inv, "config");
  read_field(j, "delta_t", c.delta_t, "config");
  read_field(j, "rho_s0", c.rho_s0, "config");
  if (j.contains("region")) {
    const auto& r = j.at("region");
    detail::reject_unknown(r, {"delta_min", "delta_max", "delta_steps", "n_th", "g"}, "region");
    read_field(r, "delta_min", c.region.delta_min, "region");
    read_field(r, "delta_max", c.region.delta_max, "region");
    read_field(r, "delta_steps", c.region.delta_steps, "region");
    read_field(r, "n_th", c.region.n_th, "region");
    read_field(r, "g", c.region.g, "region");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    detail::reject_unknown(t, {"zero", "gap", "residual", "hermitian", "psd", "kappa_max", "thermal", "tail",
                               "eps_warn"},
                           "tolerances");
    read_field(t, "zero", c.tol.zero, "tolerances");
    read_field(t, "gap", c.tol.gap, "tolerances");
    read_field(t, "residual", c.tol.residual, "tolerances");
    read_field(t, "hermitian", c.tol.hermitian, "tolerances");
    read_field(t, "psd", c.tol.psd, "tolerances");
    read_field(t, "kappa_max", c.tol.kappa_max, "tolerances");
    read_field(t, "thermal", c.tol.thermal, "tolerances");
    read_field(t, "tail", c.tol.tail, "tolerances");
    read_field(t, "eps_warn", c.tol.eps_warn, "tolerances");
  }
  read_field(j, "out", c.out_dir, "config");
  read_field(j, "seed", c.seed, "config");
  read_field(j, "threads", c.threads, "config");
  read_field(j, "transpose_selftest", c.transpose_selftest, "config");
  return c;
}

inline RunConfig load_config_file(const std::string& path, RunConfig c = {}) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: parse error in '" + path + "': " + e.what());
  }
  return config_from_json(j, std::move(c));
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

/// Scalar overrides named AECP_<FIELD>, e.g. AECP_N_TH=0.5, AECP_FOCK_CUTOFF=24.
inline RunConfig apply_env_overrides(RunConfig c, const EnvLookup& env = process_env) {
  auto num = [&](const char* name, auto& out) {
    const auto v = env(name);
    if (!v) return;
    std::istringstream is(*v);
    std::decay_t<decltype(out)> x{};
    is >> x;
    if (is.fail() || !is.eof()) throw ConfigError(std::string(name) + ": cannot parse '" + *v + "'");
    out = x;
  };
  num("AECP_DELTA_A", c.model.delta_A);
  num("AECP_GAMMA", c.model.gamma);
  num("AECP_N_TH", c.model.n_th);
  num("AECP_G", c.model.g);
  if (env("AECP_FOCK_CUTOFF")) {
    int N = 0;
    num("AECP_FOCK_CUTOFF", N);
    c.model.fock_cutoff = N;
  }
  num("AECP_ORDER", c.order);
  num("AECP_T_INV", c.t_inv);
  num("AECP_DELTA_T", c.delta_t);
  num("AECP_SEED", c.seed);
  num("AECP_THREADS", c.threads);
  if (const auto v = env("AECP_OUT")) c.out_dir = *v;
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json m = {{"delta_A", c.model.delta_A}, {"gamma", c.model.gamma}, {"n_th", c.model.n_th},
                      {"g", c.model.g}};
  m["fock_cutoff"] = c.model.fock_cutoff ? nlohmann::json(*c.model.fock_cutoff) : nlohmann::json(nullptr);
  auto grid = [](const TimeGrid& g) { return nlohmann::json{{"t0", g.t0}, {"t1", g.t1}, {"dt", g.dt}}; };
  return {{"model", m},
          {"order", c.order},
          {"eps", c.eps},
          {"t_grid", grid(c.t_grid)},
          {"wpg_grid", grid(c.wpg_grid)},
          {"t_inv", c.t_inv},
          {"delta_t", c.delta_t},
          {"rho_s0", c.rho_s0},
          {"region",
           {{"delta_min", c.region.delta_min},
            {"delta_max", c.region.delta_max},
            {"delta_steps", c.region.delta_steps},
            {"n_th", c.region.n_th},
            {"g", c.region.g}}},
          {"tolerances",
           {{"zero", c.tol.zero},
            {"gap", c.tol.gap},
            {"residual", c.tol.residual},
            {"hermitian", c.tol.hermitian},
            {"psd", c.tol.psd},
            {"kappa_max", c.tol.kappa_max},
            {"thermal", c.tol.thermal},
            {"tail", c.tol.tail},
            {"eps_warn", c.tol.eps_warn}}},
          {"out", c.out_dir},
          {"seed", c.seed},
          {"threads", c.threads},
          {"transpose_selftest", c.transpose_selftest}};
}

}  // namespace aecp
