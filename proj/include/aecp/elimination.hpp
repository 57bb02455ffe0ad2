// elimination.hpp — order-by-order adiabatic elimination of the fast subsystem
//
// Solves the invariance equation K ∘ L_s = L_tot ∘ K in powers of ε with
// K = Σ εⁿ K_n (maps B-operators to composite operators) and
// L_s = Σ εⁿ L_{s,n} (maps on B-operators). At order n:
//
//   (L_A ⊗ I_B) K_n = ρ̄_A ⊗ L_{s,n} − R_n,
//   R_n = (I_A ⊗ L_B + L_int) K_{n−1} − Σ_{k=1}^{n−1} K_k L_{s,n−k}.
//
// tr_A annihilates the left-hand side, which fixes L_{s,n} = tr_A ∘ R_n.
// The canonical gauge imposes tr_A ∘ K_n = 0 for n ≥ 1.

#pragma once

#include <string>
#include <vector>

#include <Eigen/LU>

#include "aecp/model.hpp"

namespace aecp {

struct EliminationResult {
  int order = 0;
  Index dim_A = 0;
  Index dim_B = 0;
  std::vector<SuperOperator> K;   // K[n]: B -> A⊗B
  std::vector<SuperOperator> Ls;  // Ls[n]: B -> B
  std::string gauge = "G=0";
  std::vector<double> residual;   // relative residual of the order-n linear solve
};

inline EliminationResult eliminate(const LindbladModel& model, int order,
                                   const Tolerances& tol = default_tolerances()) {
  if (order < 0) throw InvalidParameter("eliminate: order must be >= 0");
  const Index dB = model.dim_B;
  const Index nB = dB * dB;
  const Index nC = model.bipartite().dim() * model.bipartite().dim();

  EliminationResult res;
  res.order = order;
  res.dim_A = model.dim_A;
  res.dim_B = dB;

  const SuperOperator K0 = attach_state_A(model.steady_state_A, dB);
  const SuperOperator trA = partial_trace_A(model.dim_A, dB);
  const SuperOperator slow = lift_B(model.L_B, model.dim_A) + model.L_int;
  const SuperOperator fast = lift_A(model.L_A, dB);
  std::shared_ptr<const TraceConstrainedSolver> solver = model.fast_solver;
  if (!solver) solver = std::make_shared<const TraceConstrainedSolver>(model.L_A, tol);

  // Dense column copies: K_n has nB columns only.
  std::vector<Eigen::MatrixXcd> Kd{K0.dense()};
  std::vector<Eigen::MatrixXcd> Lsd{Eigen::MatrixXcd::Zero(nB, nB)};
  res.residual.push_back(0.0);

  for (int n = 1; n <= order; ++n) {
    Eigen::MatrixXcd R = slow.matrix() * Kd[n - 1];
    for (int k = 1; k <= n - 1; ++k) R -= Kd[k] * Lsd[n - k];
    Eigen::MatrixXcd Lsn = trA.matrix() * R;
    Eigen::MatrixXcd rhs = K0.matrix() * Lsn - R;
    Eigen::MatrixXcd Kn(nC, nB);
    double worst = 0.0;
    for (Index c = 0; c < nB; ++c) {
      const OpVector y = rhs.col(c);
      Kn.col(c) = solve_lifted(*solver, dB, y);
      const double ynorm = y.norm();
      if (ynorm > 0.0) worst = std::max(worst, (fast.matrix() * Kn.col(c) - y).norm() / ynorm);
    }
    res.residual.push_back(worst);
    Kd.push_back(std::move(Kn));
    Lsd.push_back(std::move(Lsn));
  }

  for (int n = 0; n <= order; ++n) {
    res.K.push_back(SuperOperator::from_dense(dB, model.bipartite().dim(), Kd[n]));
    res.Ls.push_back(SuperOperator::from_dense(dB, Lsd[n]));
  }
  return res;
}

/// The same series cut at a lower order.
inline EliminationResult truncate(const EliminationResult& res, int order) {
  if (order < 0 || order > res.order) throw InvalidParameter("truncate: order out of range");
  EliminationResult out = res;
  out.order = order;
  out.K.resize(order + 1);
  out.Ls.resize(order + 1);
  out.residual.resize(order + 1);
  return out;
}

/// Σ_{n≤order} εⁿ L_{s,n}.
inline SuperOperator reduced_generator(const EliminationResult& res, double eps) {
  SuperOperator L = SuperOperator::zero(res.dim_B, res.dim_B);
  double p = 1.0;
  for (int n = 0; n <= res.order; ++n) {
    if (n > 0) L += p * res.Ls[n];
    p *= eps;
  }
  return L;
}

/// Σ_{n≤order} εⁿ K_n.
inline SuperOperator assignment_map(const EliminationResult& res, double eps) {
  SuperOperator K = res.K[0];
  double p = eps;
  for (int n = 1; n <= res.order; ++n) {
    K += p * res.K[n];
    p *= eps;
  }
  return K;
}

/// ‖K ∘ L_s − L_tot ∘ K‖₂ for the truncated series at ε = eps.
inline double invariance_residual(const EliminationResult& res, double eps,
                                  const LindbladModel& model) {
  const SuperOperator K = assignment_map(res, eps);
  const SuperOperator Ls = reduced_generator(res, eps);
  const Eigen::MatrixXcd lhs = K.matrix() * Ls.dense();
  const Eigen::MatrixXcd rhs = model.total(eps).matrix() * K.dense();
  return operator_norm(lhs - rhs);
}

/// Linear, time-independent gauge G = Σ_{n≥1} εⁿ G_n on B-operators.
/// terms[0] is G_1.
struct GaugeMap {
  std::vector<SuperOperator> terms;

  SuperOperator at(double eps, Index dim_B) const {
    SuperOperator G = SuperOperator::zero(dim_B, dim_B);
    double p = eps;
    for (const auto& t : terms) {
      G += p * t;
      p *= eps;
    }
    return G;
  }
};

struct GaugedMaps {
  SuperOperator K;
  SuperOperator Ls;
  double condition = 1.0;  // 2-norm condition number of I + G
};

/// K^G = K^{G=0} ∘ (I + G), L_s^G = (I + G)^{-1} ∘ L_s^{G=0} ∘ (I + G).
inline GaugedMaps apply_gauge(const EliminationResult& res, const GaugeMap& gauge, double eps,
                              const Tolerances& tol = default_tolerances()) {
  const Index dB = res.dim_B;
  const Eigen::MatrixXcd M =
      Eigen::MatrixXcd::Identity(dB * dB, dB * dB) + gauge.at(eps, dB).dense();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = (smin > 0.0) ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (!(cond <= tol.kappa_max)) {
    throw SingularGauge("apply_gauge: condition number of I + G is " + std::to_string(cond));
  }
  const Eigen::MatrixXcd Minv = M.partialPivLu().inverse();
  GaugedMaps out;
  out.condition = cond;
  out.K = SuperOperator::from_dense(dB, res.dim_A * dB, assignment_map(res, eps).matrix() * M);
  out.Ls = SuperOperator::from_dense(dB, Minv * reduced_generator(res, eps).dense() * M);
  return out;
}

}  // namespace aecp
