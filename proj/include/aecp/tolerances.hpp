// tolerances.hpp — numerical thresholds shared by all modules
//
// Relative thresholds are multiplied by the norm of the object under test
// (the generator for zero/gap decisions, the right-hand side for residuals).

#pragma once

namespace aecp {

struct Tolerances {
  double zero = 1e-9;       // eigenvalue counted as zero: |λ| <= zero * ‖S‖
  double gap = 1e-9;        // non-zero eigenvalues need Re λ < -gap * ‖S‖
  double residual = 1e-8;   // ‖S X - Y‖ <= residual * ‖Y‖
  double hermitian = 1e-10; // ‖X - X†‖ <= hermitian * ‖X‖
  double psd = 1e-10;       // min eigenvalue >= -psd * ‖M‖
  double kappa_max = 1e6;   // largest admissible condition number of I + G
  double thermal = 1e-6;    // numeric vs analytic thermal state
  double tail = 1e-8;       // population allowed near the Fock cutoff
  double eps_warn = 0.25;   // expansion parameter above which a warning is raised
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace aecp
