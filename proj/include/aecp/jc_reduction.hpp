// jc_reduction.hpp — numeric reduced-qubit coefficients for the damped Jaynes–Cummings model

#pragma once

#include <cmath>
#include <string>

#include "aecp/cp_analysis.hpp"
#include "aecp/elimination.hpp"

namespace aecp {

struct NumericCoeffs {
  QubitGeneratorCoeffs coeffs;
  double off_diagonal = 0.0;  // deviation from the decay/dephasing structure
  double odd_order_norm = 0.0;  // max ‖L_{s,n}‖ over odd n <= order
  int cutoff = 0;
  int order = 0;
};

/// Eliminates to `order` and reads the qubit coefficients off Σ εⁿ L_{s,n}.
inline NumericCoeffs numeric_coeffs(const JCParams& p, int order = 4,
                                    const Tolerances& tol = default_tolerances()) {
  const LindbladModel model = build_jc_model(p, tol);
  const EliminationResult res = eliminate(model, order, tol);
  NumericCoeffs out;
  const auto ex = coeffs_from_generator(reduced_generator(res, model.eps), tol);
  out.coeffs = ex.coeffs;
  out.off_diagonal = ex.off_diagonal;
  for (int n = 1; n <= order; n += 2) out.odd_order_norm = std::max(out.odd_order_norm, res.Ls[n].norm());
  out.cutoff = p.cutoff();
  out.order = order;
  return out;
}

/// Largest relative change between two coefficient sets, against the
/// magnitude of the leading rate where a coefficient vanishes.
inline double coeff_relative_change(const QubitGeneratorCoeffs& a, const QubitGeneratorCoeffs& b) {
  const double scale = std::max({std::abs(b.gamma_minus), std::abs(b.gamma_plus), 1e-300});
  auto rel = [&](double x, double y) {
    const double denom = std::abs(y) > 1e-12 * scale ? std::abs(y) : scale;
    return std::abs(x - y) / denom;
  };
  return std::max({rel(a.omega_B, b.omega_B), rel(a.gamma_minus, b.gamma_minus),
                   rel(a.gamma_plus, b.gamma_plus), rel(a.gamma_phi, b.gamma_phi)});
}

struct ConvergedCoeffs {
  NumericCoeffs result;      // at the larger cutoff of the converged pair
  int converged_cutoff = 0;  // N such that doubling it changed the coefficients by < tol
  double last_change = 0.0;
  bool converged = false;
};

/// Starts from the configured (or default) cutoff and doubles it until the
/// coefficients change by less than rel_tol.
inline ConvergedCoeffs converged_coeffs(JCParams p, int order = 4, double rel_tol = 1e-8,
                                        int max_cutoff = 200,
                                        const Tolerances& tol = default_tolerances()) {
  ConvergedCoeffs out;
  int N = p.cutoff();
  p.fock_cutoff = N;
  NumericCoeffs prev = numeric_coeffs(p, order, tol);
  while (2 * N <= max_cutoff) {
    p.fock_cutoff = 2 * N;
    NumericCoeffs next = numeric_coeffs(p, order, tol);
    out.last_change = coeff_relative_change(prev.coeffs, next.coeffs);
    out.result = next;
    out.converged_cutoff = N;
    if (out.last_change < rel_tol) {
      out.converged = true;
      return out;
    }
    N *= 2;
    prev = next;
  }
  if (out.converged_cutoff == 0) out.result = prev;
  return out;
}

}  // namespace aecp
