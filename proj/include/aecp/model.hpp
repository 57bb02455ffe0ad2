// model.hpp — bipartite Lindblad models and the damped Jaynes–Cummings instance
//
// Qubit basis: index 0 is the ground state |g>, index 1 the excited state |e>.
// sigma_minus = |g><e|, sigma_plus = |e><g|, sigma_z = |e><e| - |g><g|.
// Together with sigma_x = sigma_plus + sigma_minus and
// sigma_y = -i (sigma_plus - sigma_minus) these satisfy [σx, σy] = 2iσz.

#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aecp/superop.hpp"

namespace aecp {

namespace qubit {

inline Operator identity() { return Operator::Identity(2, 2); }

inline Operator sigma_minus() {
  Operator s = Operator::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

inline Operator sigma_plus() { return sigma_minus().adjoint(); }

inline Operator sigma_x() { return sigma_plus() + sigma_minus(); }

inline Operator sigma_y() { return cplx(0.0, -1.0) * (sigma_plus() - sigma_minus()); }

inline Operator sigma_z() {
  Operator s = Operator::Zero(2, 2);
  s(0, 0) = -1.0;
  s(1, 1) = 1.0;
  return s;
}

/// rho = (I + r·σ)/2.
inline Operator from_bloch(double rx, double ry, double rz) {
  return 0.5 * (identity() + rx * sigma_x() + ry * sigma_y() + rz * sigma_z());
}

struct Bloch {
  double x, y, z;
  double norm2() const { return x * x + y * y + z * z; }
};

inline Bloch to_bloch(const Operator& rho) {
  return {(rho * sigma_x()).trace().real(), (rho * sigma_y()).trace().real(),
          (rho * sigma_z()).trace().real()};
}

}  // namespace qubit

struct OscillatorOps {
  Operator a;
  Operator a_dag;
  Operator number;
};

/// Ladder operators on the Fock space truncated at level N (dimension N+1).
/// [a, a†] = I except at the top level, where it equals -N.
inline OscillatorOps oscillator_ops(int N) {
  if (N < 2) throw InvalidParameter("oscillator_ops: Fock cutoff must be >= 2");
  const Index d = N + 1;
  Operator a = Operator::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  Operator num = Operator::Zero(d, d);
  for (Index n = 0; n < d; ++n) num(n, n) = static_cast<double>(n);
  return {a, a.adjoint(), num};
}

inline int default_fock_cutoff(double n_th) {
  return static_cast<int>(std::ceil(n_th * 8.0 + 12.0));
}

/// Damped Jaynes–Cummings parameters, rates in units of your choice (usually γ = 1).
struct JCParams {
  double delta_A = 0.0;  // oscillator detuning from the qubit
  double gamma = 1.0;    // oscillator decay rate
  double n_th = 0.0;     // thermal occupation of the bath
  double g = 0.0;        // coupling strength
  std::optional<int> fock_cutoff;

  int cutoff() const { return fock_cutoff ? *fock_cutoff : default_fock_cutoff(n_th); }
  double eps() const { return std::abs(g) / gamma; }

  void validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw InvalidParameter("gamma must be > 0 (a unique oscillator steady state requires decay)");
    }
    if (!(n_th >= 0.0) || !std::isfinite(n_th)) throw InvalidParameter("n_th must be >= 0");
    if (!std::isfinite(delta_A)) throw InvalidParameter("delta_A must be finite");
    if (!std::isfinite(g)) throw InvalidParameter("g must be finite");
    if (cutoff() < 2) throw InvalidParameter("fock_cutoff must be >= 2");
  }
};

/// L_A = -iΔ_A (a†a)^× + γ(1+n_th) D[a] + γ n_th D[a†].
inline SuperOperator build_LA(const JCParams& p) {
  p.validate();
  const auto ops = oscillator_ops(p.cutoff());
  SuperOperator L = p.delta_A * hamiltonian_superop(ops.number);
  L += (p.gamma * (1.0 + p.n_th)) * dissipator_superop(ops.a);
  if (p.n_th > 0.0) L += (p.gamma * p.n_th) * dissipator_superop(ops.a_dag);
  return L;
}

/// Exchange operator a† ⊗ σ- + a ⊗ σ+ on the composite space.
inline Operator jc_exchange(int N) {
  const auto ops = oscillator_ops(N);
  return kron(ops.a_dag, qubit::sigma_minus()) + kron(ops.a, qubit::sigma_plus());
}

/// Physical interaction -i g (a† ⊗ σ- + a ⊗ σ+)^×, coupling included.
inline SuperOperator build_Lint(const JCParams& p) {
  p.validate();
  return p.g * hamiltonian_superop(jc_exchange(p.cutoff()));
}

/// Truncated thermal state q^n / Z with q = n_th/(1+n_th).
inline Operator thermal_state(double n_th, int N) {
  const Index d = N + 1;
  Operator rho = Operator::Zero(d, d);
  const double q = n_th / (1.0 + n_th);
  double w = 1.0, z = 0.0;
  for (Index n = 0; n < d; ++n) {
    rho(n, n) = w;
    z += w;
    w *= q;
  }
  return rho / z;
}

/// Unique steady state of a Lindbladian, normalized and Hermitized.
inline Operator steady_state(const TraceConstrainedSolver& solver) {
  Operator rho = devectorize(solver.steady_state(), solver.dim());
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace();
}

inline Operator steady_state(const SuperOperator& L_A, const Tolerances& tol = default_tolerances()) {
  return steady_state(TraceConstrainedSolver(L_A, tol));
}

/// Composite generator L_A ⊗ I_B + ε I_A ⊗ L_B + ε L_int, where L_B and
/// L_int are stored in expansion units (their physical counterparts divided
/// by ε). Construction factorizes L_A once; the factorization is shared by
/// the elimination recursion.
struct LindbladModel {
  Index dim_A = 0;
  Index dim_B = 0;
  SuperOperator L_A;
  SuperOperator L_B;
  SuperOperator L_int;
  double eps = 0.0;
  Operator steady_state_A;
  std::shared_ptr<const TraceConstrainedSolver> fast_solver;
  std::optional<JCParams> params;
  std::vector<std::string> warnings;

  Bipartite bipartite() const { return {dim_A, dim_B}; }

  SuperOperator total(double at_eps) const {
    SuperOperator L = lift_A(L_A, dim_B);
    L += at_eps * lift_B(L_B, dim_A);
    L += at_eps * L_int;
    return L;
  }

  SuperOperator total() const { return total(eps); }
};

inline LindbladModel make_model(SuperOperator L_A, SuperOperator L_B, SuperOperator L_int,
                                double eps, const Tolerances& tol = default_tolerances()) {
  if (!L_A.is_square() || !L_B.is_square() || !L_int.is_square()) {
    throw DimensionMismatch("make_model: generators must be square");
  }
  if (L_int.dim_in() != L_A.dim_in() * L_B.dim_in()) {
    throw DimensionMismatch("make_model: L_int must act on the composite space");
  }
  if (!(eps >= 0.0)) throw InvalidParameter("make_model: eps must be >= 0");
  LindbladModel m;
  m.dim_A = L_A.dim_in();
  m.dim_B = L_B.dim_in();
  m.eps = eps;
  m.fast_solver = std::make_shared<const TraceConstrainedSolver>(L_A, tol);
  m.steady_state_A = steady_state(*m.fast_solver);
  m.L_A = std::move(L_A);
  m.L_B = std::move(L_B);
  m.L_int = std::move(L_int);
  if (eps >= tol.eps_warn) {
    m.warnings.push_back("expansion parameter eps = " + std::to_string(eps) +
                         " is not small; truncated series may be inaccurate");
  }
  return m;
}

struct CutoffDiagnostics {
  double thermal_deviation = 0.0;  // max |numeric - analytic thermal| entry
  double tail_population = 0.0;    // population on levels >= N-2
};

inline CutoffDiagnostics cutoff_diagnostics(const LindbladModel& m) {
  CutoffDiagnostics d;
  if (!m.params) return d;
  const int N = m.params->cutoff();
  d.thermal_deviation =
      (m.steady_state_A - thermal_state(m.params->n_th, N)).cwiseAbs().maxCoeff();
  for (int n = std::max(0, N - 2); n <= N; ++n) d.tail_population += m.steady_state_A(n, n).real();
  return d;
}

/// Damped Jaynes–Cummings model; the interaction is stored in expansion
/// units (γ/|g|)·(-ig J^×) = -iγ sgn(g) J^× with sgn(0) taken as +1.
inline LindbladModel build_jc_model(const JCParams& p, const Tolerances& tol = default_tolerances()) {
  p.validate();
  const double sign = (p.g < 0.0) ? -1.0 : 1.0;
  SuperOperator L_int_unit = (p.gamma * sign) * hamiltonian_superop(jc_exchange(p.cutoff()));
  LindbladModel m = make_model(build_LA(p), SuperOperator::zero(2, 2), std::move(L_int_unit),
                               p.eps(), tol);
  m.params = p;
  const auto diag = cutoff_diagnostics(m);
  if (diag.thermal_deviation > tol.thermal) {
    m.warnings.push_back("steady state deviates from the thermal state by " +
                         std::to_string(diag.thermal_deviation));
  }
  if (diag.tail_population > tol.tail) {
    m.warnings.push_back("population near the Fock cutoff is " +
                         std::to_string(diag.tail_population) + "; consider a larger cutoff");
  }
  return m;
}

/// Dense check of the spectral assumption on L_A (one zero, rest strictly
/// damped). Cost grows as (N+1)^6; intended for moderate cutoffs.
inline SpectralData verify_spectral_gap(const LindbladModel& m,
                                        const Tolerances& tol = default_tolerances()) {
  return spectrum(m.L_A, true, tol);
}

}  // namespace aecp
