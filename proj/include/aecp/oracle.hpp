// oracle.hpp — brute-force propagation of the composite model and comparison
// with the reduced qubit dynamics

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "aecp/cp_analysis.hpp"
#include "aecp/elimination.hpp"

namespace aecp {

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  double trace_drift = 0.0;         // max |tr ρ(t) - tr ρ(0)|
  double hermiticity_defect = 0.0;  // max ‖ρ - ρ†‖
};

namespace detail {

inline void record(Trajectory& tr, double t, Operator rho, cplx trace0) {
  tr.trace_drift = std::max(tr.trace_drift, std::abs(rho.trace() - trace0));
  tr.hermiticity_defect = std::max(tr.hermiticity_defect, (rho - rho.adjoint()).norm());
  tr.times.push_back(t);
  tr.states.push_back(std::move(rho));
}

}  // namespace detail

/// Dense propagators exp(L dt), computed once per distinct step length, so a
/// uniform grid costs one exponential (plus one for the offset of the first
/// sample) however many initial states are propagated.
class Propagator {
 public:
  explicit Propagator(const SuperOperator& L) : dim_(L.dim_in()), L_(L.dense()) {
    if (!L.is_square()) throw DimensionMismatch("Propagator: generator must be square");
  }

  Index dim() const { return dim_; }

  const Eigen::MatrixXcd& step(double dt) {
    for (auto& [key, val] : cache_) {
      if (std::abs(key - dt) <= 1e-12 * std::max(1.0, std::abs(dt))) return val;
    }
    return cache_.emplace(dt, (L_ * dt).exp()).first->second;
  }

  Trajectory run(const Operator& rho0, const std::vector<double>& times) {
    if (rho0.rows() != dim_ || rho0.cols() != dim_) throw DimensionMismatch("Propagator::run: state dims");
    Trajectory tr;
    OpVector v = vectorize(rho0);
    const cplx trace0 = rho0.trace();
    double t_prev = 0.0;
    for (double t : times) {
      if (t < t_prev) throw InvalidParameter("evolve: times must be non-decreasing and >= 0");
      const double dt = t - t_prev;
      if (dt > 0.0) v = step(dt) * v;
      detail::record(tr, t, devectorize(v, dim_), trace0);
      t_prev = t;
    }
    return tr;
  }

 private:
  Index dim_;
  Eigen::MatrixXcd L_;
  std::map<double, Eigen::MatrixXcd> cache_;
};

/// exp(L t) rho0 at each time.
inline Trajectory evolve(const SuperOperator& L, const Operator& rho0, const std::vector<double>& times) {
  if (!L.is_square() || rho0.rows() != L.dim_in()) throw DimensionMismatch("evolve: state dims");
  Propagator prop(L);
  return prop.run(rho0, times);
}

inline Trajectory evolve_full(const LindbladModel& model, const Operator& rho0,
                              const std::vector<double>& times) {
  return evolve(model.total(), rho0, times);
}

/// tr_A of every state of a composite trajectory.
inline Trajectory reduce_to_B(const Trajectory& full, const LindbladModel& model) {
  const SuperOperator trA = partial_trace_A(model.dim_A, model.dim_B);
  Trajectory out;
  out.trace_drift = full.trace_drift;
  const cplx trace0 = full.states.empty() ? cplx(1.0) : full.states.front().trace();
  for (std::size_t k = 0; k < full.times.size(); ++k) {
    detail::record(out, full.times[k], trA.apply(full.states[k]), trace0);
  }
  out.trace_drift = std::max(out.trace_drift, full.trace_drift);
  return out;
}

inline std::vector<double> uniform_grid(double t0, double t1, double dt) {
  if (!(dt > 0.0) || t1 < t0) throw InvalidParameter("uniform_grid: need dt > 0 and t1 >= t0");
  std::vector<double> t;
  const auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  for (long k = 0; k <= n; ++k) t.push_back(t0 + dt * static_cast<double>(k));
  return t;
}

/// Choi test of exp(L_tot dt). The Choi matrix has dimension (2(N+1))², so
/// this is meant for small cutoffs.
inline CPCheck full_map_cp_check(const LindbladModel& model, double dt,
                                 const Tolerances& tol = default_tolerances()) {
  if (model.bipartite().dim() > 16) throw InvalidParameter("full_map_cp_check: composite dimension above 16");
  return is_cp(evolution_map(model.total(), dt), tol);
}

// ---------------------------------------------------------------------------
// Rate fits

struct DecayFit {
  double inv_T1 = 0.0;
  double inv_T2 = 0.0;
  double omega = 0.0;
  double R_z = 0.0;
  int points_T1 = 0;
  int points_T2 = 0;

  double gamma_phi() const { return 0.5 * (inv_T2 - 0.5 * inv_T1); }
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) sx += x[k], sy += y[k];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace detail

/// Fits the Bloch-vector relaxation of a qubit trajectory on samples with
/// t >= t_min. Transverse part: log|r_x + i r_y| and its unwrapped phase are
/// linear in t with slopes -1/T2 and ω. Longitudinal part: on a uniform grid
/// successive differences of r_z decay as e^{-t/T1} independently of the
/// asymptote, which is then recovered from the fitted rate.
inline DecayFit fit_decay_rates(const Trajectory& traj, double t_min = 0.0, double floor = 1e-12) {
  std::vector<double> tt, logz, phase, tz, logdz;
  std::vector<qubit::Bloch> r;
  std::vector<double> ts;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    if (traj.times[k] < t_min) continue;
    if (traj.states[k].rows() != 2) throw DimensionMismatch("fit_decay_rates: qubit trajectory expected");
    ts.push_back(traj.times[k]);
    r.push_back(qubit::to_bloch(traj.states[k]));
  }
  double prev_phase = 0.0;
  bool have_phase = false;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const cplx z(r[k].x, r[k].y);
    if (std::abs(z) <= floor) continue;
    double ph = std::arg(z);
    if (have_phase) {
      while (ph - prev_phase > M_PI) ph -= 2 * M_PI;
      while (ph - prev_phase < -M_PI) ph += 2 * M_PI;
    }
    prev_phase = ph;
    have_phase = true;
    tt.push_back(ts[k]);
    logz.push_back(std::log(std::abs(z)));
    phase.push_back(ph);
  }
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const double d = r[k + 1].z - r[k].z;
    if (std::abs(d) <= floor) continue;
    tz.push_back(ts[k]);
    logdz.push_back(std::log(std::abs(d)));
  }
  if (tt.size() < 3 || tz.size() < 3) {
    throw FitIllConditioned("fit_decay_rates: signal below floor on the fit window");
  }
  DecayFit f;
  f.inv_T2 = -detail::least_squares_line(tt, logz).slope;
  f.omega = detail::least_squares_line(tt, phase).slope;
  f.inv_T1 = -detail::least_squares_line(tz, logdz).slope;
  f.points_T1 = static_cast<int>(tz.size());
  f.points_T2 = static_cast<int>(tt.size());
  const double dt = ts[1] - ts[0];
  const double decay = std::exp(-f.inv_T1 * dt);
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    // r_z(k+1) - R = decay * (r_z(k) - R)
    acc += (r[k + 1].z - decay * r[k].z) / (1.0 - decay);
  }
  f.R_z = acc / static_cast<double>(r.size() - 1);
  return f;
}

/// Qubit trajectory generated by a constant generator, for self-checks.
inline Trajectory reduced_trajectory(const SuperOperator& Ls, const Operator& rho_s0,
                                     const std::vector<double>& times) {
  return evolve(Ls, rho_s0, times);
}

// ---------------------------------------------------------------------------
// Reduction error

inline double trace_norm(const Operator& X) {
  const Operator h = 0.5 * (X + X.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

struct ReductionReport {
  int order = 0;
  double eps = 0.0;
  double t_inv = 10.0;
  double init_min_eigenvalue = 0.0;
  bool init_outside_image = false;  // composite initial state is not PSD
  double sup_error = 0.0;           // over t >= t_inv, trace norm
  std::vector<double> times;
  std::vector<double> errors;
  Trajectory reduced_full;          // tr_A of the composite trajectory
  Trajectory reduced_model;         // exp(L_s t) ρ_s0
};

/// Initializes the composite state on the approximate invariant manifold,
/// K(ρ_s0)/tr K(ρ_s0), evolves it with L_tot and compares tr_A ρ(t) with
/// exp(L_s t) ρ_s0 on t >= t_inv.
/// `full` must propagate model.total(); pass the same instance to reuse its
/// exponential across orders and initial states.
inline ReductionReport compare_reduction(const LindbladModel& model, const EliminationResult& res,
                                         const Operator& rho_s0, const std::vector<double>& times,
                                         Propagator& full, double t_inv = 10.0,
                                         const Tolerances& tol = default_tolerances()) {
  ReductionReport rep;
  rep.order = res.order;
  rep.eps = model.eps;
  rep.t_inv = t_inv;
  Operator rho0 = assignment_map(res, model.eps).apply(rho_s0);
  rho0 /= rho0.trace();
  rho0 = 0.5 * (rho0 + rho0.adjoint());
  rep.init_min_eigenvalue = min_eigenvalue(rho0);
  rep.init_outside_image = rep.init_min_eigenvalue < -tol.psd * std::max(1.0, rho0.norm());
  rep.reduced_full = reduce_to_B(full.run(rho0, times), model);
  const Operator rho_s = partial_trace_A(model.dim_A, model.dim_B).apply(rho0);
  rep.reduced_model = evolve(reduced_generator(res, model.eps), rho_s, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double e = trace_norm(rep.reduced_full.states[k] - rep.reduced_model.states[k]);
    rep.times.push_back(times[k]);
    rep.errors.push_back(e);
    if (times[k] >= t_inv) rep.sup_error = std::max(rep.sup_error, e);
  }
  return rep;
}

inline ReductionReport compare_reduction(const LindbladModel& model, const EliminationResult& res,
                                         const Operator& rho_s0, const std::vector<double>& times,
                                         double t_inv = 10.0,
                                         const Tolerances& tol = default_tolerances()) {
  Propagator full(model.total());
  return compare_reduction(model, res, rho_s0, times, full, t_inv, tol);
}

/// Builds the JC model at coupling g = sgn(g₀)·eps·γ, eliminates to `order`
/// and compares with the full dynamics.
inline ReductionReport validate_reduction(JCParams p, int order, double eps, const Operator& rho_s0,
                                          const std::vector<double>& times, double t_inv = 10.0,
                                          const Tolerances& tol = default_tolerances()) {
  p.g = (p.g < 0.0 ? -1.0 : 1.0) * eps * p.gamma;
  const LindbladModel model = build_jc_model(p, tol);
  const EliminationResult res = eliminate(model, order, tol);
  return compare_reduction(model, res, rho_s0, times, t_inv, tol);
}

struct ReductionScaling {
  std::vector<double> eps;
  std::vector<double> sup_error;
  std::vector<double> exponents;  // log2 of successive error ratios
};

/// Sup-error at ε₀, ε₀/2, ε₀/4 and the measured convergence exponents.
inline ReductionScaling validate_scaling(const JCParams& p, int order, double eps0,
                                         const Operator& rho_s0, const std::vector<double>& times,
                                         double t_inv = 10.0,
                                         const Tolerances& tol = default_tolerances()) {
  ReductionScaling s;
  for (double e : {eps0, eps0 / 2.0, eps0 / 4.0}) {
    s.eps.push_back(e);
    s.sup_error.push_back(validate_reduction(p, order, e, rho_s0, times, t_inv, tol).sup_error);
  }
  for (std::size_t k = 0; k + 1 < s.sup_error.size(); ++k) {
    s.exponents.push_back(std::log2(s.sup_error[k] / s.sup_error[k + 1]));
  }
  return s;
}

}  // namespace aecp
