// closed_form.hpp — analytic reduced-model formulas for the damped Jaynes–Cummings model
//
// These are evaluated directly from the parameters and serve as independent
// oracles for the numeric elimination.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "aecp/cp_analysis.hpp"
#include "aecp/model.hpp"

namespace aecp {

struct FourthOrderCoeffs {
  JCParams params;
  double n_plus = 0.0;   // n_th
  double n_minus = 0.0;  // 1 + n_th
  cplx gamma_bar;        // γ + 2iΔ_A
  cplx b_minus;
  cplx b_plus;
  double omega_B4 = 0.0;
  double gamma_minus4 = 0.0;
  double gamma_plus4 = 0.0;
  double gamma_phi4 = 0.0;
  // second-order parts
  double gamma_minus2 = 0.0;
  double gamma_plus2 = 0.0;
  double omega_B2 = 0.0;

  QubitGeneratorCoeffs coeffs() const { return {omega_B4, gamma_minus4, gamma_plus4, gamma_phi4}; }
  QubitGeneratorCoeffs second_order() const { return {omega_B2, gamma_minus2, gamma_plus2, 0.0}; }
};

inline FourthOrderCoeffs fourth_order_coeffs(const JCParams& p) {
  if (!(p.gamma > 0.0)) throw InvalidParameter("fourth_order_coeffs: gamma must be > 0");
  FourthOrderCoeffs f;
  f.params = p;
  f.n_plus = p.n_th;
  f.n_minus = 1.0 + p.n_th;
  f.gamma_bar = cplx(p.gamma, 2.0 * p.delta_A);
  const cplx gb = f.gamma_bar;
  const double gb2 = std::norm(gb);
  const double g2 = p.g * p.g, g4 = g2 * g2;
  const cplx cross = 8.0 * g4 * f.n_plus * f.n_minus *
                     (1.0 + cplx(0.0, 8.0 * p.gamma * p.delta_A / gb2)) / (std::conj(gb) * gb2);
  auto b = [&](double n) { return 2.0 * g2 * n / gb + 8.0 * g4 * n * n / (gb * gb * gb) + cross; };
  f.b_minus = b(f.n_minus);
  f.b_plus = b(f.n_plus);
  f.omega_B4 = (f.b_minus + f.b_plus).imag();
  f.gamma_minus4 = 2.0 * f.b_minus.real();
  f.gamma_plus4 = 2.0 * f.b_plus.real();
  const double x = 2.0 * p.delta_A / p.gamma;
  const double x2 = x * x;
  f.gamma_phi4 = -8.0 * g4 * f.n_plus * f.n_minus * (3.0 - 6.0 * x2 - x2 * x2) /
                 (p.gamma * p.gamma * p.gamma * std::pow(1.0 + x2, 3));
  f.gamma_minus2 = 4.0 * g2 * p.gamma * f.n_minus / gb2;
  f.gamma_plus2 = 4.0 * g2 * p.gamma * f.n_plus / gb2;
  f.omega_B2 = (2.0 * g2 * (f.n_minus + f.n_plus) / gb).imag();
  return f;
}

/// |Δ_A|/γ below which the fourth-order dephasing rate is negative: half the
/// positive root of x⁴ + 6x² - 3.
inline double negativity_threshold() {
  const double x2 = -3.0 + std::sqrt(9.0 + 3.0);
  return 0.5 * std::sqrt(x2);
}

/// True iff γ_φ^(4) < 0, i.e. n_th > 0 and 3 - 6x² - x⁴ > 0 with x = 2Δ_A/γ.
inline bool phi_negativity_region(double delta_over_gamma, double n_th) {
  const double x2 = 4.0 * delta_over_gamma * delta_over_gamma;
  return n_th > 0.0 && (3.0 - 6.0 * x2 - x2 * x2) > 0.0;
}

namespace detail {

inline void require_zero_detuning(const JCParams& p) {
  if (p.delta_A != 0.0) throw RequiresZeroDetuning("second-order assignment needs delta_A = 0");
}

struct SecondOrderPieces {
  Operator V1;  // -(2ig/γ) J
  Operator V2;  // -(2g²/γ²)(a†a - n_th) ⊗ I
  Operator Sm;  // I_A ⊗ σ-
  Operator Sp;  // I_A ⊗ σ+
  double c_minus = 0.0;  // 4g²(1+n_th)/γ²
  double c_plus = 0.0;   // 4g² n_th/γ²
  Operator rho_A;
};

inline SecondOrderPieces second_order_pieces(const JCParams& p) {
  p.validate();
  require_zero_detuning(p);
  const int N = p.cutoff();
  const auto ops = oscillator_ops(N);
  const Operator IA = Operator::Identity(N + 1, N + 1);
  SecondOrderPieces s;
  s.V1 = cplx(0.0, -2.0 * p.g / p.gamma) * jc_exchange(N);
  s.V2 = (-2.0 * p.g * p.g / (p.gamma * p.gamma)) *
         kron(ops.number - p.n_th * IA, qubit::identity());
  s.Sm = kron(IA, qubit::sigma_minus());
  s.Sp = kron(IA, qubit::sigma_plus());
  s.c_minus = 4.0 * p.g * p.g * (1.0 + p.n_th) / (p.gamma * p.gamma);
  s.c_plus = 4.0 * p.g * p.g * p.n_th / (p.gamma * p.gamma);
  s.rho_A = thermal_state(p.n_th, N);
  return s;
}

}  // namespace detail

/// Second-order assignment map ρ_B -> composite state, with the V(·)V†
/// product expanded and truncated at order g²:
///   X + V1 X + X V1† + V2 X + X V2† + V1 X V1† - c- S- X S-† - c+ S+ X S+†,
/// X = ρ̄_A ⊗ ρ_B. This is the map that agrees with the numeric series.
inline SuperOperator assignment_second_order(const JCParams& p) {
  const auto s = detail::second_order_pieces(p);
  const Index d = s.V1.rows();
  const Operator I = Operator::Identity(d, d);
  SuperOperator M = SuperOperator::identity(d);
  M += sandwich_superop(s.V1, I) + sandwich_superop(I, s.V1.adjoint());
  M += sandwich_superop(s.V2, I) + sandwich_superop(I, s.V2.adjoint());
  M += sandwich_superop(s.V1, s.V1.adjoint());
  M -= s.c_minus * sandwich_superop(s.Sm, s.Sm.adjoint());
  M -= s.c_plus * sandwich_superop(s.Sp, s.Sp.adjoint());
  return M * attach_state_A(s.rho_A, 2);
}

/// The same map in the compact V(·)V† form, which carries extra g³ and g⁴ terms.
inline SuperOperator assignment_second_order_vform(const JCParams& p) {
  const auto s = detail::second_order_pieces(p);
  const Index d = s.V1.rows();
  const Operator V = Operator::Identity(d, d) + s.V1 + s.V2;
  SuperOperator M = sandwich_superop(V, V.adjoint());
  M -= s.c_minus * sandwich_superop(s.Sm, s.Sm.adjoint());
  M -= s.c_plus * sandwich_superop(s.Sp, s.Sp.adjoint());
  return M * attach_state_A(s.rho_A, 2);
}

/// ⟨0,ψ| K(ρ_B) |0,ψ⟩ from the closed-form expression in ⟨0|ρ̄_A|0⟩ and
/// the projections of ρ_B on ψ, σ+ψ and σ-ψ.
inline double negativity_element(const Eigen::Vector2cd& psi, const Operator& rho_B,
                                 const JCParams& p) {
  detail::require_zero_detuning(p);
  const double vac = thermal_state(p.n_th, p.cutoff())(0, 0).real();
  const double k2 = 4.0 * p.g * p.g / (p.gamma * p.gamma);
  const Eigen::Vector2cd psi_plus = qubit::sigma_plus() * psi;
  const Eigen::Vector2cd psi_minus = qubit::sigma_minus() * psi;
  auto expect = [&](const Eigen::Vector2cd& v) { return v.dot(rho_B * v).real(); };
  return vac * ((1.0 + k2 * p.n_th) * expect(psi) - k2 * (1.0 + p.n_th) * expect(psi_plus) -
                k2 * p.n_th * p.n_th / (1.0 + p.n_th) * expect(psi_minus));
}

/// Direct matrix element of assignment_second_order on |0⟩_A ⊗ |ψ⟩.
inline double direct_element(const Eigen::Vector2cd& psi, const Operator& rho_B, const JCParams& p) {
  const Operator out = assignment_second_order(p).apply(rho_B);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(out.rows());
  v.head(2) = psi;
  return v.dot(out * v).real();
}

struct ImageScanReport {
  int n_pure = 0;
  int n_pure_negative = 0;
  double worst_pure_min_eig = 0.0;      // least negative minimum over pure samples
  double maximally_mixed_min_eig = 0.0;
  std::vector<double> threshold_radius;  // per sampled direction: largest PSD Bloch radius
  double min_threshold_radius = 1.0;
  double purity_threshold = 1.0;         // (1 + r*²)/2 for the smallest r*
};

inline double assigned_min_eigenvalue(const SuperOperator& K, const qubit::Bloch& r) {
  return min_eigenvalue(K.apply(qubit::from_bloch(r.x, r.y, r.z)));
}

/// Pure and mixed qubit states pushed through the second-order assignment.
/// The PSD region is convex and contains I/2, so along each direction the
/// largest admissible Bloch radius is found by bisection.
inline ImageScanReport image_boundary_scan(const JCParams& p, int n_samples, std::uint64_t seed = 1,
                                           double psd_tol = 1e-12) {
  const SuperOperator K = assignment_second_order(p);
  ImageScanReport rep;
  rep.maximally_mixed_min_eig = assigned_min_eigenvalue(K, {0.0, 0.0, 0.0});
  rep.worst_pure_min_eig = -std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  for (int k = 0; k < n_samples; ++k) {
    double x = nd(rng), y = nd(rng), z = nd(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    x /= n, y /= n, z /= n;
    const double m = assigned_min_eigenvalue(K, {x, y, z});
    ++rep.n_pure;
    if (m < -psd_tol) ++rep.n_pure_negative;
    rep.worst_pure_min_eig = std::max(rep.worst_pure_min_eig, m);
    double lo = 0.0, hi = 1.0;
    if (rep.maximally_mixed_min_eig < -psd_tol) {
      hi = 0.0;
    } else if (m >= -psd_tol) {
      lo = 1.0;
    } else {
      for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (assigned_min_eigenvalue(K, {mid * x, mid * y, mid * z}) >= -psd_tol) lo = mid;
        else hi = mid;
      }
    }
    rep.threshold_radius.push_back(lo);
    rep.min_threshold_radius = std::min(rep.min_threshold_radius, lo);
  }
  rep.purity_threshold = 0.5 * (1.0 + rep.min_threshold_radius * rep.min_threshold_radius);
  return rep;
}

/// Haar-random pure qubit state.
inline Eigen::Vector2cd random_pure_state(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::Vector2cd v(cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)));
  return v / v.norm();
}

}  // namespace aecp
