// commands.hpp — subcommands of the aecp front-end
//
// Each command reads a validated RunConfig, writes its files under
// cfg.out_dir and returns a process exit code: 0 success, 2 invalid input,
// 3 numeric failure. Every CSV row carries the full parameter tuple.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "aecp/closed_form.hpp"
#include "aecp/config.hpp"
#include "aecp/jc_reduction.hpp"
#include "aecp/oracle.hpp"
#include "aecp/serialize.hpp"

namespace aecp {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitNumeric = 3 };

/// Evaluates fn(0..n-1) on up to `threads` workers; results are stored by
/// index, so the output order never depends on scheduling. The first
/// exception (lowest index) is rethrown after all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t n, int threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(n);
  std::vector<std::exception_ptr> err(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        out[k] = fn(k);
      } catch (...) {
        err[k] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : err) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Maps exceptions to exit codes and reports them on `err`.
inline int run_guarded(const std::function<void()>& body, std::ostream& err = std::cerr) {
  try {
    body();
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const RequiresZeroDetuning& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

namespace detail {

inline const std::vector<std::string>& param_header() {
  static const std::vector<std::string> h{"delta_A", "gamma", "n_th", "g", "fock_cutoff"};
  return h;
}

inline CsvTable::Row param_row(const JCParams& p) {
  CsvTable::Row r;
  r << p.delta_A << p.gamma << p.n_th << p.g << p.cutoff();
  return r;
}

inline std::vector<std::string> with_params(std::vector<std::string> rest) {
  std::vector<std::string> h = param_header();
  h.insert(h.end(), rest.begin(), rest.end());
  return h;
}

inline std::string out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

inline void report_warnings(const std::vector<std::string>& w, std::ostream& log) {
  for (const auto& s : w) log << "warning: " << s << '\n';
}

inline CsvTable::Row& coeff_cells(CsvTable::Row& r, const QubitGeneratorCoeffs& c) {
  return r << c.omega_B << c.gamma_minus << c.gamma_plus << c.gamma_phi << c.inv_T1() << c.inv_T2();
}

inline const std::vector<std::string> kCoeffHeader{"omega_B", "gamma_minus", "gamma_plus",
                                                   "gamma_phi", "inv_T1",      "inv_T2"};

}  // namespace detail

// ---------------------------------------------------------------------------
// eliminate

/// elimination.json (full result) and coefficients.csv: one row per term
/// εⁿ L_{s,n} and a final row for the truncated sum.
inline int cmd_eliminate(const RunConfig& cfg, std::ostream& log = std::cerr) {
  return run_guarded(
      [&] {
        validate(cfg);
        const LindbladModel model = build_jc_model(cfg.model, cfg.tol);
        detail::report_warnings(model.warnings, log);
        const EliminationResult res = eliminate(model, cfg.order, cfg.tol);

        std::vector<std::string> h{"order", "eps", "term"};
        h.insert(h.end(), detail::kCoeffHeader.begin(), detail::kCoeffHeader.end());
        h.push_back("off_diagonal");
        CsvTable csv(detail::with_params(h));
        double p = 1.0;
        for (int n = 0; n <= res.order; ++n) {
          const auto ex = coeffs_from_generator(p * res.Ls[n], cfg.tol);
          auto row = detail::param_row(cfg.model);
          row << res.order << model.eps << std::to_string(n);
          detail::coeff_cells(row, ex.coeffs) << ex.off_diagonal;
          csv.push(row);
          p *= model.eps;
        }
        const auto total = coeffs_from_generator(reduced_generator(res, model.eps), cfg.tol);
        auto row = detail::param_row(cfg.model);
        row << res.order << model.eps << "total";
        detail::coeff_cells(row, total.coeffs) << total.off_diagonal;
        csv.push(row);
        csv.write(detail::out_path(cfg, "coefficients.csv"));

        json j;
        j["params"] = to_json(cfg.model);
        j["eps"] = model.eps;
        j["warnings"] = model.warnings;
        j["coefficients"] = to_json(total.coeffs);
        j["result"] = to_json(res);
        write_json(detail::out_path(cfg, "elimination.json"), j);
      },
      log);
}

// ---------------------------------------------------------------------------
// cp-check

inline json cp_diagnostics(const RunConfig& cfg, std::vector<std::string>* warnings = nullptr) {
  const LindbladModel model = build_jc_model(cfg.model, cfg.tol);
  if (warnings) *warnings = model.warnings;
  const EliminationResult res = eliminate(model, cfg.order, cfg.tol);
  const SuperOperator Ls = reduced_generator(res, model.eps);
  const auto coeffs = coeffs_from_generator(Ls, cfg.tol).coeffs;

  json j;
  j["params"] = to_json(cfg.model);
  j["order"] = cfg.order;
  j["eps"] = model.eps;
  j["coefficients"] = to_json(coeffs);

  const auto lb = is_lindblad(Ls, cfg.tol);
  json w = json::array();
  for (int k = 0; k < 3; ++k) w.push_back(to_json(lb.witness(k)));
  j["lindblad"] = lb.lindblad;
  j["gamma_min_eigenvalue"] = lb.min_eigenvalue;
  j["witness"] = w;  // in the basis (σ-, σ+, σz/√2)

  const auto cp = is_cp(evolution_map(Ls, cfg.delta_t), cfg.tol);
  j["delta_t"] = cfg.delta_t;
  j["cp"] = cp.cp;
  j["choi_min_eigenvalue"] = cp.min_eigenvalue;

  const auto onset = cp_violation_onset(coeffs, {});
  j["wpg_slope_at_zero"] = onset.slope_at_zero;
  j["wpg_violated_at_zero"] = onset.violated_at_zero;

  const auto cert = positivity_certificate(coeffs, cfg.seed);
  j["positive"] = cert.certified || cert.empirically_positive.value_or(false);
  j["certificate"] = {{"delta_T_positive", cert.delta_T_positive},
                      {"rate_product_dominates", cert.rate_product_dominates},
                      {"certified", cert.certified}};
  if (cert.empirically_positive) j["certificate"]["empirically_positive"] = *cert.empirically_positive;

  if (cfg.transpose_selftest) {
    const auto t = is_cp(transpose_map(2), cfg.tol);
    j["transpose_selftest"] = {{"cp", t.cp}, {"choi_min_eigenvalue", t.min_eigenvalue}};
  }
  return j;
}

/// cp_check.json and wpg_gap.csv (numeric channel spectrum and the analytic
/// gap 1 + e^{-t/T1} - 2e^{-t/T2} over wpg_grid).
inline int cmd_cp_check(const RunConfig& cfg, std::ostream& log = std::cerr) {
  return run_guarded(
      [&] {
        validate(cfg);
        std::vector<std::string> warnings;
        json j = cp_diagnostics(cfg, &warnings);
        detail::report_warnings(warnings, log);
        j["warnings"] = warnings;
        write_json(detail::out_path(cfg, "cp_check.json"), j);

        const LindbladModel model = build_jc_model(cfg.model, cfg.tol);
        const EliminationResult res = eliminate(model, cfg.order, cfg.tol);
        const SuperOperator Ls = reduced_generator(res, model.eps);
        const auto coeffs = coeffs_from_generator(Ls, cfg.tol).coeffs;
        const auto times = uniform_grid(cfg.wpg_grid.t0, cfg.wpg_grid.t1, cfg.wpg_grid.dt);
        const auto onset = cp_violation_onset(coeffs, times);
        CsvTable csv(detail::with_params({"order", "t", "gap_analytic", "wpg_margin", "feasible", "violated_face"}));
        for (std::size_t k = 0; k < times.size(); ++k) {
          const auto q = numeric_evolution_spectrum(Ls, times[k]);
          const auto wpg = wpg_feasible(q);
          auto row = detail::param_row(cfg.model);
          row << cfg.order << times[k] << onset.gap[k] << wpg.margin << wpg.feasible
              << (wpg.feasible ? std::string("") : std::string(face_names()[wpg.violated_face]));
          csv.push(row);
        }
        csv.write(detail::out_path(cfg, "wpg_gap.csv"));

        log << "lindblad=" << (j["lindblad"].get<bool>() ? "true" : "false")
            << " cp=" << (j["cp"].get<bool>() ? "true" : "false")
            << " positive=" << (j["positive"].get<bool>() ? "true" : "false") << '\n';
        if (cfg.transpose_selftest) {
          log << "transpose selftest: cp=" << (j["transpose_selftest"]["cp"].get<bool>() ? "true" : "false")
              << '\n';
        }
      },
      log);
}

// ---------------------------------------------------------------------------
// region-map

/// region_map.csv over (n_th, Δ_A/γ) from the closed-form rates at g/γ =
/// region.g, sorted by n_th then Δ_A; region_summary.json with the sign
/// changes found on the grid.
inline int cmd_region_map(const RunConfig& cfg, std::ostream& log = std::cerr) {
  return run_guarded(
      [&] {
        validate(cfg);
        std::vector<double> n_list = cfg.region.n_th;
        std::sort(n_list.begin(), n_list.end());
        n_list.erase(std::unique(n_list.begin(), n_list.end()), n_list.end());
        const int nd = cfg.region.delta_steps;
        const double gam = cfg.model.gamma;
        struct Point {
          JCParams p;
          double delta_over_gamma = 0.0;
          QubitGeneratorCoeffs c;
          bool negative = false;
          bool lindblad = true;
        };
        const std::size_t total = n_list.size() * static_cast<std::size_t>(nd);
        auto points = parallel_map<Point>(total, cfg.threads, [&](std::size_t k) {
          Point pt;
          const double n = n_list[k / nd];
          const int i = static_cast<int>(k % nd);
          pt.delta_over_gamma =
              cfg.region.delta_min + (cfg.region.delta_max - cfg.region.delta_min) * i / (nd - 1);
          pt.p = JCParams{pt.delta_over_gamma * gam, gam, n, cfg.region.g * gam, cfg.model.fock_cutoff};
          pt.c = fourth_order_coeffs(pt.p).coeffs();
          pt.negative = phi_negativity_region(pt.delta_over_gamma, n);
          pt.lindblad = is_lindblad(qubit_generator(pt.c), cfg.tol).lindblad;
          return pt;
        });
        CsvTable csv(detail::with_params({"delta_over_gamma", "gamma_phi4", "sign", "negative_region", "lindblad"}));
        json crossings = json::array();
        for (std::size_t k = 0; k < points.size(); ++k) {
          const auto& pt = points[k];
          const double v = pt.c.gamma_phi;
          const int sign = (v > 0.0) - (v < 0.0);
          auto row = detail::param_row(pt.p);
          row << pt.delta_over_gamma << v << sign << pt.negative << pt.lindblad;
          csv.push(row);
          if (k % nd != 0 && points[k - 1].negative != pt.negative) {
            crossings.push_back({{"n_th", pt.p.n_th},
                                 {"between", {points[k - 1].delta_over_gamma, pt.delta_over_gamma}}});
          }
        }
        csv.write(detail::out_path(cfg, "region_map.csv"));
        json s;
        s["threshold"] = negativity_threshold();
        s["g_over_gamma"] = cfg.region.g;
        s["crossings"] = crossings;
        write_json(detail::out_path(cfg, "region_summary.json"), s);
        log << "threshold |delta_A|/gamma = " << format_real(negativity_threshold()) << ", "
            << crossings.size() << " grid crossing(s)\n";
      },
      log);
}

// ---------------------------------------------------------------------------
// validate

struct ValidationPoint {
  double eps = 0.0;
  JCParams params;
  std::vector<ReductionReport> by_order;  // orders 0..cfg.order
  std::optional<DecayFit> fit;            // from the full trajectory of the highest order
  std::string fit_error;
  QubitGeneratorCoeffs model_coeffs;
  std::vector<std::string> warnings;
};

inline ValidationPoint validate_point(const RunConfig& cfg, double eps) {
  ValidationPoint vp;
  vp.eps = eps;
  vp.params = cfg.model;
  vp.params.g = (cfg.model.g < 0.0 ? -1.0 : 1.0) * eps * cfg.model.gamma;
  const LindbladModel model = build_jc_model(vp.params, cfg.tol);
  vp.warnings = model.warnings;
  const EliminationResult res = eliminate(model, cfg.order, cfg.tol);
  vp.model_coeffs = coeffs_from_generator(reduced_generator(res, model.eps), cfg.tol).coeffs;
  Propagator full(model.total());
  const auto times = uniform_grid(cfg.t_grid.t0, cfg.t_grid.t1, cfg.t_grid.dt);
  const Operator rho_s0 = qubit::from_bloch(cfg.rho_s0[0], cfg.rho_s0[1], cfg.rho_s0[2]);
  for (int k = 0; k <= cfg.order; ++k) {
    vp.by_order.push_back(
        compare_reduction(model, truncate(res, k), rho_s0, times, full, cfg.t_inv, cfg.tol));
  }
  try {
    vp.fit = fit_decay_rates(vp.by_order.back().reduced_full, cfg.t_inv);
  } catch (const FitIllConditioned& e) {
    vp.fit_error = e.what();
  }
  return vp;
}

/// validate_errors.csv (per time and order), validate_fit.csv (per ε and
/// order) and validate_scaling.csv (exponents between successive ε).
inline int cmd_validate(const RunConfig& cfg, std::ostream& log = std::cerr) {
  return run_guarded(
      [&] {
        validate(cfg);
        std::vector<double> eps = cfg.eps;
        std::sort(eps.begin(), eps.end(), std::greater<>());
        eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
        auto points = parallel_map<ValidationPoint>(eps.size(), cfg.threads,
                                                    [&](std::size_t k) { return validate_point(cfg, eps[k]); });

        CsvTable errs(detail::with_params({"eps", "order", "t", "r_x_full", "r_y_full", "r_z_full", "r_x_reduced",
                                           "r_y_reduced", "r_z_reduced", "error"}));
        CsvTable fits(detail::with_params({"eps", "order", "sup_error", "init_min_eigenvalue", "init_outside_image",
                                           "inv_T1_fit", "inv_T2_fit", "omega_fit", "gamma_phi_fit",
                                           "inv_T1_model", "inv_T2_model", "gamma_phi_model"}));
        for (const auto& vp : points) {
          detail::report_warnings(vp.warnings, log);
          if (!vp.fit_error.empty()) log << "warning: eps=" << vp.eps << ": " << vp.fit_error << '\n';
          for (const auto& rep : vp.by_order) {
            if (rep.init_outside_image) {
              log << "warning: InitOutsideImage at eps=" << vp.eps << " order=" << rep.order
                  << " (min eigenvalue " << rep.init_min_eigenvalue << ")\n";
            }
            for (std::size_t i = 0; i < rep.times.size(); ++i) {
              const auto a = qubit::to_bloch(rep.reduced_full.states[i]);
              const auto b = qubit::to_bloch(rep.reduced_model.states[i]);
              auto row = detail::param_row(vp.params);
              row << vp.eps << rep.order << rep.times[i] << a.x << a.y << a.z << b.x << b.y << b.z
                  << rep.errors[i];
              errs.push(row);
            }
            auto row = detail::param_row(vp.params);
            row << vp.eps << rep.order << rep.sup_error << rep.init_min_eigenvalue << rep.init_outside_image;
            const bool last = rep.order == cfg.order;
            if (last && vp.fit) {
              row << vp.fit->inv_T1 << vp.fit->inv_T2 << vp.fit->omega << vp.fit->gamma_phi();
            } else {
              row << "" << "" << "" << "";
            }
            if (last) {
              row << vp.model_coeffs.inv_T1() << vp.model_coeffs.inv_T2() << vp.model_coeffs.gamma_phi;
            } else {
              row << "" << "" << "";
            }
            fits.push(row);
          }
        }
        CsvTable scal(detail::with_params({"order", "eps_hi", "eps_lo", "sup_error_hi", "sup_error_lo", "exponent"}));
        for (std::size_t k = 0; k + 1 < points.size(); ++k) {
          for (int n = 0; n <= cfg.order; ++n) {
            const double e1 = points[k].by_order[n].sup_error, e2 = points[k + 1].by_order[n].sup_error;
            auto row = detail::param_row(cfg.model);
            row << n << points[k].eps << points[k + 1].eps << e1 << e2
                << std::log(e1 / e2) / std::log(points[k].eps / points[k + 1].eps);
            scal.push(row);
          }
        }
        errs.write(detail::out_path(cfg, "validate_errors.csv"));
        fits.write(detail::out_path(cfg, "validate_fit.csv"));
        scal.write(detail::out_path(cfg, "validate_scaling.csv"));
      },
      log);
}

// ---------------------------------------------------------------------------
// selftest

struct SelfTestLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Fast internal consistency checks; independent of out_dir.
inline std::vector<SelfTestLine> selftest_lines(const RunConfig& cfg) {
  std::vector<SelfTestLine> out;
  auto add = [&](std::string name, bool pass, std::string d) { out.push_back({std::move(name), pass, std::move(d)}); };

  const auto t = is_cp(transpose_map(2), cfg.tol);
  add("transpose map is not CP", !t.cp && std::abs(t.min_eigenvalue + 1.0) < 1e-12,
      "min eig " + format_real(t.min_eigenvalue));

  const QubitGeneratorCoeffs ok{0.3, 0.2, 0.1, 0.05};
  add("Lindblad generator accepted", is_lindblad(qubit_generator(ok), cfg.tol).lindblad, "");
  const QubitGeneratorCoeffs bad{0.0, 0.2, 0.1, -0.01};
  add("negative dephasing rejected", !is_lindblad(qubit_generator(bad), cfg.tol).lindblad, "");

  JCParams p{0.0, 1.0, 1.0, 0.1, 40};
  const auto num = numeric_coeffs(p, 4, cfg.tol);
  const auto cf = fourth_order_coeffs(p).coeffs();
  const double rel = coeff_relative_change(num.coeffs, cf);
  add("fourth-order rates match closed form", rel < 1e-6, "max rel " + format_real(rel));
  add("odd orders vanish", num.odd_order_norm < 1e-10, "max norm " + format_real(num.odd_order_norm));

  const double x = negativity_threshold();
  add("negativity threshold", std::abs(x - 0.340625) < 1e-6, format_real(x));
  return out;
}

inline int cmd_selftest(const RunConfig& cfg, std::ostream& os = std::cout) {
  int code = kExitOk;
  const int guarded = run_guarded([&] {
    for (const auto& l : selftest_lines(cfg)) {
      os << (l.pass ? "PASS " : "FAIL ") << l.name;
      if (!l.detail.empty()) os << " (" << l.detail << ")";
      os << '\n';
      if (!l.pass) code = kExitNumeric;
    }
  });
  return guarded != kExitOk ? guarded : code;
}

}  // namespace aecp
