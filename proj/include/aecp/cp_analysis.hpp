// cp_analysis.hpp — positivity and complete-positivity diagnostics for qubit maps
//
// Generators are characterized through their GKS matrix over the orthonormal
// traceless basis A = (σ-, σ+, σz/√2). In this basis the generator
//   -i(ω_B/2)σz^× + γ- D[σ-] + γ+ D[σ+] + γ_φ D[σz]
// has Γ = diag(γ-, γ+, 2γ_φ) and H_eff = (ω_B/2)σz.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "aecp/model.hpp"

namespace aecp {

struct QubitGeneratorCoeffs {
  double omega_B = 0.0;
  double gamma_minus = 0.0;
  double gamma_plus = 0.0;
  double gamma_phi = 0.0;

  double inv_T1() const { return gamma_minus + gamma_plus; }
  double inv_T2() const { return 0.5 * inv_T1() + 2.0 * gamma_phi; }
  double inv_DeltaT() const { return inv_T1() - inv_T2(); }
  /// Asymptotic r_z; zero if there is no longitudinal relaxation.
  double R_z() const { return inv_T1() != 0.0 ? -(gamma_minus - gamma_plus) / inv_T1() : 0.0; }
};

inline SuperOperator qubit_generator(const QubitGeneratorCoeffs& c) {
  SuperOperator L = (0.5 * c.omega_B) * hamiltonian_superop(qubit::sigma_z());
  L += c.gamma_minus * dissipator_superop(qubit::sigma_minus());
  L += c.gamma_plus * dissipator_superop(qubit::sigma_plus());
  L += c.gamma_phi * dissipator_superop(qubit::sigma_z());
  return L;
}

inline std::array<Operator, 3> gks_basis() {
  return {qubit::sigma_minus(), qubit::sigma_plus(), qubit::sigma_z() / std::sqrt(2.0)};
}

struct GKSDecomposition {
  Operator H_eff;          // traceless Hermitian 2x2
  Eigen::Matrix3cd Gamma;  // Hermitian, over gks_basis()
};

/// Expands a Hermiticity-preserving, trace-annihilating qubit generator as
/// L(X) = -i[H, X] + Σ Γ_ab (A_a X A_b† - ½{A_b† A_a, X}).
inline GKSDecomposition gks_decompose(const SuperOperator& L,
                                      const Tolerances& tol = default_tolerances()) {
  if (L.dim_in() != 2 || L.dim_out() != 2) throw DimensionMismatch("gks_decompose: qubit maps only");
  const double scale = std::max(L.norm(), 1e-300);
  if (hermiticity_defect(L) > tol.hermitian * scale) {
    throw NotHermPreserving("gks_decompose: generator is not Hermiticity preserving");
  }
  if (trace_annihilation_defect(L) > tol.hermitian * scale) {
    throw NotHermPreserving("gks_decompose: generator is not trace annihilating");
  }
  const auto A = gks_basis();
  std::array<Operator, 4> F{Operator(qubit::identity() / std::sqrt(2.0)), A[0], A[1], A[2]};
  const Eigen::MatrixXcd Lm = L.dense();
  // X -> F_j X F_k† has matrix conj(F_k) ⊗ F_j; these 16 matrices are
  // orthonormal, so c_jk is a Hilbert–Schmidt projection.
  Eigen::Matrix4cd c;
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      const Operator basis = kron(F[k].conjugate(), F[j]);
      c(j, k) = (basis.adjoint() * Lm).trace();
    }
  }
  GKSDecomposition out;
  out.Gamma = c.bottomRightCorner<3, 3>();
  out.Gamma = 0.5 * (out.Gamma + out.Gamma.adjoint()).eval();
  Operator Fop = Operator::Zero(2, 2);
  for (int a = 0; a < 3; ++a) Fop += c(a + 1, 0) * A[a];
  Fop /= std::sqrt(2.0);
  out.H_eff = cplx(0.0, 0.5) * (Fop - Fop.adjoint());
  out.H_eff -= (out.H_eff.trace() / 2.0) * qubit::identity();
  return out;
}

inline SuperOperator gks_reconstruct(const GKSDecomposition& d) {
  const auto A = gks_basis();
  const Operator id = qubit::identity();
  SuperOperator L = hamiltonian_superop(d.H_eff);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (d.Gamma(a, b) == cplx(0.0)) continue;
      const Operator BA = A[b].adjoint() * A[a];
      SuperOperator term = sandwich_superop(A[a], A[b].adjoint());
      term -= 0.5 * sandwich_superop(BA, id);
      term -= 0.5 * sandwich_superop(id, BA);
      L += d.Gamma(a, b) * term;
    }
  }
  return L;
}

struct LindbladCheck {
  bool lindblad = false;
  double min_eigenvalue = 0.0;  // of Γ; the signed margin
  Eigen::Vector3cd witness;     // eigenvector of the smallest eigenvalue of Γ
};

inline LindbladCheck is_lindblad(const SuperOperator& L, const Tolerances& tol = default_tolerances()) {
  const auto d = gks_decompose(L, tol);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(d.Gamma);
  LindbladCheck out;
  out.min_eigenvalue = es.eigenvalues()(0);
  out.witness = es.eigenvectors().col(0);
  const double gnorm = d.Gamma.norm();
  out.lindblad = out.min_eigenvalue >= -tol.psd * std::max(gnorm, 1e-300);
  return out;
}

/// Reads (ω_B, γ-, γ+, γ_φ) off a qubit generator. off_diagonal reports the
/// largest GKS entry outside the diagonal form, which vanishes when the
/// generator has exactly the dephasing/decay structure.
struct CoeffExtraction {
  QubitGeneratorCoeffs coeffs;
  double off_diagonal = 0.0;
};

inline CoeffExtraction coeffs_from_generator(const SuperOperator& L,
                                             const Tolerances& tol = default_tolerances()) {
  const auto d = gks_decompose(L, tol);
  CoeffExtraction out;
  out.coeffs.gamma_minus = d.Gamma(0, 0).real();
  out.coeffs.gamma_plus = d.Gamma(1, 1).real();
  out.coeffs.gamma_phi = 0.5 * d.Gamma(2, 2).real();
  out.coeffs.omega_B = (d.H_eff * qubit::sigma_z()).trace().real();
  double off = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b) off = std::max(off, std::abs(d.Gamma(a, b)));
    }
  }
  off = std::max(off, std::abs((d.H_eff * qubit::sigma_x()).trace()));
  off = std::max(off, std::abs((d.H_eff * qubit::sigma_y()).trace()));
  out.off_diagonal = off;
  return out;
}

// ---------------------------------------------------------------------------
// Choi test

/// C = Σ_ij E_ij ⊗ M(E_ij), input index major.
inline Eigen::MatrixXcd choi_matrix(const SuperOperator& M) {
  const Index din = M.dim_in(), dout = M.dim_out();
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(din * dout, din * dout);
  for (Index j = 0; j < din; ++j) {
    for (Index i = 0; i < din; ++i) {
      C.block(i * dout, j * dout, dout, dout) = M.apply(matrix_unit(din, i, j));
    }
  }
  return C;
}

struct CPCheck {
  bool cp = false;
  double min_eigenvalue = 0.0;
};

inline CPCheck is_cp(const SuperOperator& M, const Tolerances& tol = default_tolerances()) {
  const Eigen::MatrixXcd C = choi_matrix(M);
  CPCheck out;
  out.min_eigenvalue = min_eigenvalue(C);
  out.cp = out.min_eigenvalue >= -tol.psd * std::max(C.norm(), 1e-300);
  return out;
}

inline SuperOperator transpose_map(Index d) {
  std::vector<Triplet> trips;
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < d; ++i) trips.emplace_back(j + i * d, i + j * d, 1.0);
  }
  SparseMatrix m(d * d, d * d);
  m.setFromTriplets(trips.begin(), trips.end());
  return {d, d, std::move(m)};
}

inline SuperOperator evolution_map(const SuperOperator& L, double t) {
  const Eigen::MatrixXcd E = (L.dense() * t).exp();
  return SuperOperator::from_dense(L.dim_in(), E);
}

// ---------------------------------------------------------------------------
// Spectra of qubit channels

/// Generator matrix in the orthonormal basis {I, σx, σy, σz}/√2.
inline Eigen::Matrix4d pauli_generator_matrix(const QubitGeneratorCoeffs& c) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(1, 1) = -c.inv_T2();
  m(1, 2) = -c.omega_B;
  m(2, 1) = c.omega_B;
  m(2, 2) = -c.inv_T2();
  m(3, 0) = c.R_z() * c.inv_T1();
  m(3, 3) = -c.inv_T1();
  return m;
}

/// Same representation computed from any qubit superoperator.
inline Eigen::Matrix4cd pauli_representation(const SuperOperator& L) {
  const std::array<Operator, 4> P{qubit::identity(), qubit::sigma_x(), qubit::sigma_y(),
                                  qubit::sigma_z()};
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = 0.5 * (P[i] * L.apply(P[j])).trace();
  }
  return m;
}

struct SpectrumQuadruple {
  std::array<cplx, 4> Lambda;  // Lambda[0] is the eigenvalue identified with 1
  std::array<double, 3> s;
};

/// Builds (Λ, s) from four eigenvalues of a trace-preserving qubit map.
inline SpectrumQuadruple make_spectrum_quadruple(const std::array<cplx, 4>& eig, double tol = 1e-9) {
  std::size_t one = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    if (std::abs(eig[k] - 1.0) < std::abs(eig[one] - 1.0)) one = k;
  }
  if (std::abs(eig[one] - 1.0) > tol) {
    throw NotConjugateClosed("spectrum does not contain 1");
  }
  SpectrumQuadruple q;
  q.Lambda[0] = eig[one];
  std::size_t w = 1;
  for (std::size_t k = 0; k < 4; ++k) {
    if (k != one) q.Lambda[w++] = eig[k];
  }
  std::array<bool, 3> used{false, false, false};
  for (std::size_t i = 0; i < 3; ++i) {
    const cplx l = q.Lambda[i + 1];
    if (std::abs(l.imag()) <= tol) {
      q.s[i] = l.real();
      continue;
    }
    bool found = false;
    for (std::size_t j = 0; j < 3; ++j) {
      if (j != i && !used[j] && std::abs(q.Lambda[j + 1] - std::conj(l)) <= tol) {
        found = true;
        used[j] = true;
        break;
      }
    }
    if (!found) throw NotConjugateClosed("spectrum is not closed under complex conjugation");
    q.s[i] = std::abs(l);
  }
  return q;
}

/// {1, e^{-t/T2 ± iω_B t}, e^{-t/T1}}.
inline SpectrumQuadruple evolution_spectrum(const QubitGeneratorCoeffs& c, double t) {
  if (t < 0.0) throw InvalidParameter("evolution_spectrum: t must be >= 0");
  const double d2 = std::exp(-t * c.inv_T2());
  SpectrumQuadruple q;
  q.Lambda = {cplx(1.0), std::polar(d2, c.omega_B * t), std::polar(d2, -c.omega_B * t),
              cplx(std::exp(-t * c.inv_T1()))};
  const bool oscillating = std::abs(std::sin(c.omega_B * t)) > 0.0;
  q.s = {oscillating ? d2 : q.Lambda[1].real(), oscillating ? d2 : q.Lambda[2].real(),
         q.Lambda[3].real()};
  return q;
}

inline std::array<cplx, 4> eigenvalues4(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

/// Spectrum of exp(L t) computed numerically.
inline SpectrumQuadruple numeric_evolution_spectrum(const SuperOperator& L, double t,
                                                    double tol = 1e-9) {
  return make_spectrum_quadruple(eigenvalues4(evolution_map(L, t).dense()), tol);
}

struct WPGResult {
  bool feasible = false;
  double margin = 0.0;     // smallest face gap; negative when infeasible
  int violated_face = -1;  // index into face_names(), -1 if feasible
};

/// Face inequalities of the tetrahedron with corners (1,1,1), (1,-1,-1),
/// (-1,1,-1), (-1,-1,1).
inline std::array<double, 4> tetrahedron_gaps(const std::array<double, 3>& s) {
  return {1.0 + s[0] + s[1] + s[2], 1.0 + s[0] - s[1] - s[2], 1.0 - s[0] + s[1] - s[2],
          1.0 - s[0] - s[1] + s[2]};
}

inline const std::array<const char*, 4>& face_names() {
  static const std::array<const char*, 4> names{"1+s1+s2+s3>=0", "1+s1-s2-s3>=0",
                                                "1-s1+s2-s3>=0", "1-s1-s2+s3>=0"};
  return names;
}

inline WPGResult wpg_feasible(const SpectrumQuadruple& q, double tol = 1e-12) {
  const auto gaps = tetrahedron_gaps(q.s);
  WPGResult r;
  r.margin = gaps[0];
  r.violated_face = 0;
  for (int k = 1; k < 4; ++k) {
    if (gaps[k] < r.margin) {
      r.margin = gaps[k];
      r.violated_face = k;
    }
  }
  r.feasible = r.margin >= -tol;
  if (r.feasible) r.violated_face = -1;
  return r;
}

struct OnsetReport {
  bool violated_at_zero = false;   // slope of the gap at t = 0 is negative
  double slope_at_zero = 0.0;      // 4 γ_φ
  std::vector<double> times;
  std::vector<double> gap;         // 1 + e^{-t/T1} - 2 e^{-t/T2}
};

inline OnsetReport cp_violation_onset(const QubitGeneratorCoeffs& c, const std::vector<double>& times) {
  OnsetReport r;
  r.slope_at_zero = 2.0 * c.inv_T2() - c.inv_T1();
  r.violated_at_zero = r.slope_at_zero < 0.0;
  r.times = times;
  for (double t : times) {
    r.gap.push_back(1.0 + std::exp(-t * c.inv_T1()) - 2.0 * std::exp(-t * c.inv_T2()));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Bloch-vector dynamics and positivity

struct BlochDynamics {
  QubitGeneratorCoeffs c;

  std::array<double, 3> derivative(const qubit::Bloch& r) const {
    return {-r.x * c.inv_T2() - c.omega_B * r.y, -r.y * c.inv_T2() + c.omega_B * r.x,
            -c.inv_T1() * (r.z - c.R_z())};
  }

  qubit::Bloch asymptote() const { return {0.0, 0.0, c.R_z()}; }

  /// d(r²)/dt at an arbitrary Bloch vector.
  double dr2_dt(const qubit::Bloch& r) const {
    return -2.0 * ((r.norm2() - r.z * r.z) * c.inv_T2() + r.z * (r.z - c.R_z()) * c.inv_T1());
  }

  /// d(r²)/dt restricted to the unit sphere, completed-square form.
  double dr2_dt_on_sphere(double rz) const {
    const double dT = 1.0 / c.inv_DeltaT();
    const double shift = rz - dT * c.R_z() * c.inv_T1() / 2.0;
    return -(2.0 / dT) *
           (shift * shift + dT * dT * (c.gamma_minus * c.gamma_plus - 4.0 * c.gamma_phi * c.gamma_phi));
  }

  qubit::Bloch evolve(const qubit::Bloch& r0, double t) const {
    const cplx z = cplx(r0.x, r0.y) * std::exp(cplx(-c.inv_T2(), c.omega_B) * t);
    return {z.real(), z.imag(), c.R_z() + (r0.z - c.R_z()) * std::exp(-c.inv_T1() * t)};
  }
};

inline BlochDynamics bloch_dynamics(const QubitGeneratorCoeffs& c) {
  if (c.inv_DeltaT() == 0.0) throw InvalidParameter("bloch_dynamics: 1/T1 - 1/T2 must be non-zero");
  return {c};
}

struct PositivityCertificate {
  bool delta_T_positive = false;
  bool rate_product_dominates = false;  // γ-γ+ > 4γ_φ²
  bool certified = false;
  std::optional<bool> empirically_positive;  // filled when the certificate is inconclusive
  double worst_radius2 = 0.0;                // largest r² seen in the empirical scan
};

/// Positivity of exp(L t) for all t ≥ 0. Certified analytically when both
/// inequalities hold; otherwise pure states are evolved and r² ≤ 1 checked.
inline PositivityCertificate positivity_certificate(const QubitGeneratorCoeffs& c,
                                                    std::uint64_t seed = 7,
                                                    int n_samples = 500, double t_max = 0.0) {
  PositivityCertificate p;
  p.delta_T_positive = c.inv_DeltaT() > 0.0;
  p.rate_product_dominates = c.gamma_minus * c.gamma_plus > 4.0 * c.gamma_phi * c.gamma_phi;
  p.certified = p.delta_T_positive && p.rate_product_dominates;
  if (p.certified) return p;

  const BlochDynamics dyn{c};
  const double rate = std::max({std::abs(c.inv_T1()), std::abs(c.inv_T2()), 1e-12});
  const double horizon = t_max > 0.0 ? t_max : 10.0 / rate;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    double x = nd(rng), y = nd(rng), z = nd(rng);
    const double n = std::sqrt(x * x + y * y + z * z);
    const qubit::Bloch r0{x / n, y / n, z / n};
    for (int i = 1; i <= 200; ++i) {
      worst = std::max(worst, dyn.evolve(r0, horizon * i / 200.0).norm2());
    }
  }
  p.worst_radius2 = worst;
  p.empirically_positive = worst <= 1.0 + 1e-12;
  return p;
}

// ---------------------------------------------------------------------------
// Random qubit channels

/// Haar-random isometry C^2 -> C^2 ⊗ C^env, traced over the environment.
inline SuperOperator random_qubit_channel(std::mt19937_64& rng, Index env_dim = 8) {
  std::normal_distribution<double> nd;
  const Index d = 2, D = d * env_dim;
  Eigen::MatrixXcd G(D, d);
  for (Index i = 0; i < D; ++i) {
    for (Index j = 0; j < d; ++j) G(i, j) = cplx(nd(rng), nd(rng));
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(D, d);
  const Eigen::MatrixXcd R = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const cplx r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }
  // Rows ordered system-major: row = s*env + e. Kraus_e(s, j) = V(s*env+e, j).
  SuperOperator out = SuperOperator::zero(d, d);
  for (Index e = 0; e < env_dim; ++e) {
    Operator K(d, d);
    for (Index s = 0; s < d; ++s) {
      for (Index j = 0; j < d; ++j) K(s, j) = Q(s * env_dim + e, j);
    }
    out += sandwich_superop(K, K.adjoint());
  }
  return out;
}

}  // namespace aecp
