// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "aecp/closed_form.hpp"
#include "aecp/commands.hpp"
#include "aecp/jc_reduction.hpp"
#include "aecp/oracle.hpp"

using namespace aecp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int threads() { return std::max(1, static_cast<int>(std::thread::hardware_concurrency())); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

double multiset_distance(const Eigen::VectorXcd& av, const Eigen::VectorXcd& bv) {
  std::vector<cplx> a(av.data(), av.data() + av.size()), b(bv.data(), bv.data() + bv.size());
  double worst = 0.0;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    worst = std::max(worst, std::abs(*it - x));
    b.erase(it);
  }
  return worst;
}

// 1. numeric fourth-order rates against the closed form on the 3x3x3 grid
Outcome closed_form_reproduction() {
  std::vector<JCParams> grid;
  for (double d : {0.0, 0.2, 0.5})
    for (double n : {0.0, 0.5, 1.0})
      for (double g : {0.05, 0.1, 0.2}) grid.push_back({d, 1.0, n, g, std::nullopt});
  struct R {
    double rel = 0.0;
    bool converged = false;
    int cutoff = 0;
  };
  const auto rs = parallel_map<R>(grid.size(), threads(), [&](std::size_t k) {
    const auto conv = converged_coeffs(grid[k], 4, 1e-8);
    return R{coeff_relative_change(conv.result.coeffs, fourth_order_coeffs(grid[k]).coeffs()), conv.converged,
             conv.result.cutoff};
  });
  double worst = 0.0;
  int max_n = 0;
  bool all_conv = true;
  for (const auto& r : rs) {
    worst = std::max(worst, r.rel);
    max_n = std::max(max_n, r.cutoff);
    all_conv &= r.converged;
  }
  return {all_conv && worst <= 1e-8, "27 points, max rel " + fmt(worst) + ", cutoff <= " + std::to_string(max_n) +
                                         (all_conv ? "" : ", cutoff doubling did not converge")};
}

// 2. sign change of the numeric dephasing rate over Δ_A/γ ∈ [0, 0.6] at n_th = 1
Outcome negativity_region() {
  auto gphi = [](double d, double n) { return numeric_coeffs({d, 1.0, n, 0.1, 40}, 4).coeffs.gamma_phi; };
  const int steps = 60;
  std::vector<double> vals(steps + 1);
  for (int i = 0; i <= steps; ++i) vals[i] = gphi(0.01 * i, 1.0);
  int changes = 0;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < steps; ++i) {
    if ((vals[i] < 0.0) != (vals[i + 1] < 0.0)) {
      ++changes;
      lo = 0.01 * i;
      hi = 0.01 * (i + 1);
    }
  }
  if (changes != 1) return {false, std::to_string(changes) + " sign changes on the grid"};
  while (hi - lo > 1e-5) {
    const double mid = 0.5 * (lo + hi);
    (gphi(mid, 1.0) < 0.0 ? lo : hi) = mid;
  }
  const double root = 0.5 * (lo + hi);
  const double thr = negativity_threshold();
  double zero_row = 0.0;
  for (int i = 0; i <= steps; i += 6) zero_row = std::max(zero_row, std::abs(gphi(0.01 * i, 0.0)));
  const bool ok = std::abs(root - thr) <= 1e-3 && std::abs(root - 0.3406) <= 0.01 && zero_row <= 1e-12;
  return {ok, "boundary " + fmt(root) + " vs " + fmt(thr) + ", n_th=0 row max |gamma_phi| " + fmt(zero_row)};
}

// 3. not Lindblad, not CP, WPG-infeasible at small t, yet positive
Outcome cp_violation_triad() {
  const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, 0.1, 40});
  const auto res = eliminate(m, 4);
  const SuperOperator Ls = reduced_generator(res, m.eps);
  const auto coeffs = coeffs_from_generator(Ls).coeffs;
  const auto lb = is_lindblad(Ls);
  const double along_z = std::abs(lb.witness(2));
  const auto cp = is_cp(evolution_map(Ls, 0.01));
  const bool wpg_bad = !wpg_feasible(numeric_evolution_spectrum(Ls, 0.1)).feasible &&
                       !wpg_feasible(numeric_evolution_spectrum(Ls, 0.5)).feasible;
  const auto onset = cp_violation_onset(coeffs, {0.1, 0.5, 1.0});
  const bool gap_neg = onset.gap[0] < 0.0 && onset.gap[1] < 0.0 && onset.violated_at_zero;
  const auto cert = positivity_certificate(coeffs);
  const bool ok = !lb.lindblad && along_z > 0.999 && !cp.cp && cp.min_eigenvalue < -1e-6 && wpg_bad && gap_neg &&
                  cert.certified && cert.delta_T_positive && cert.rate_product_dominates;
  return {ok, "lindblad=" + std::string(lb.lindblad ? "true" : "false") + " |witness_z|=" + fmt(along_z) +
                  " choi_min=" + fmt(cp.min_eigenvalue) + " gap(0.1)=" + fmt(onset.gap[0]) +
                  " certified=" + (cert.certified ? "true" : "false")};
}

// 4. random gauges leave the spectrum and the WPG violation unchanged
Outcome gauge_independence() {
  const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, 0.1, std::nullopt});
  const auto res = eliminate(m, 4);
  const double eps = m.eps;
  const auto ref = spectrum(reduced_generator(res, eps)).eigenvalues;
  std::mt19937_64 g(2024);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  double worst = 0.0;
  bool all_infeasible = true;
  for (int rep = 0; rep < 20; ++rep) {
    Eigen::MatrixXcd G1(4, 4);
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j) G1(i, j) = cplx(nd(g), nd(g));
    G1 *= 0.1 * u(g) / (eps * operator_norm(G1));
    const GaugeMap G{{SuperOperator::from_dense(2, G1)}};
    if (operator_norm(G.at(eps, 2).dense()) > 0.1 + 1e-12) return {false, "gauge norm above 0.1"};
    const auto gm = apply_gauge(res, G, eps);
    worst = std::max(worst, multiset_distance(spectrum(gm.Ls).eigenvalues, ref));
    for (double t : {0.1, 0.5}) all_infeasible &= !wpg_feasible(numeric_evolution_spectrum(gm.Ls, t)).feasible;
  }
  return {worst <= 1e-9 && all_infeasible,
          "20 gauges, max spectral distance " + fmt(worst) + (all_infeasible ? ", all WPG-infeasible" : "")};
}

// 5. rates fitted from the full composite simulation, no elimination in the fit
Outcome model_free_confirmation() {
  const double eps = 0.05;
  const double target = fourth_order_coeffs({0.0, 1.0, 1.0, eps, std::nullopt}).gamma_phi4;
  auto run = [&](int N) {
    const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, eps, N});
    const auto res = eliminate(m, 4);
    Operator rho0 = assignment_map(res, m.eps).apply(qubit::from_bloch(0.3, 0.0, 0.2));
    rho0 /= rho0.trace();
    const auto full = reduce_to_B(evolve_full(m, rho0, uniform_grid(10.0, 200.0, 1.0)), m);
    return fit_decay_rates(full, 10.0);
  };
  const std::vector<int> cutoffs{20, 24};
  const auto fits = parallel_map<DecayFit>(cutoffs.size(), threads(), [&](std::size_t k) { return run(cutoffs[k]); });
  bool ok = true;
  std::ostringstream d;
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const auto& f = fits[k];
    const double rel = std::abs(f.gamma_phi() - target) / std::abs(target);
    ok &= f.inv_T1 > f.inv_T2 && f.gamma_phi() < 0.0 && rel <= 0.1;
    d << "N=" << cutoffs[k] << ": gamma_phi " << fmt(f.gamma_phi()) << " (rel " << fmt(rel) << "), 1/T1 "
      << fmt(f.inv_T1) << " > 1/T2 " << fmt(f.inv_T2) << "; ";
  }
  d << "cutoff change " << fmt(std::abs(fits[1].gamma_phi() / fits[0].gamma_phi() - 1.0));
  return {ok, d.str()};
}

// 6. invariance residual scaling per truncation order
Outcome residual_scaling() {
  const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, 0.1, std::nullopt});
  const auto res = eliminate(m, 4);
  bool ok = true;
  std::string d;
  for (int k : {0, 2, 4}) {
    const auto t = truncate(res, k);
    const double e = std::log2(invariance_residual(t, 0.1, m) / invariance_residual(t, 0.05, m));
    ok &= e >= k + 0.7;
    d += "k=" + std::to_string(k) + ": " + fmt(e) + " ";
  }
  return {ok, "exponents " + d};
}

// 7. pure states are pushed outside the PSD cone by the second-order assignment
Outcome assignment_negativity() {
  const JCParams p{0.0, 1.0, 1.0, 0.1, std::nullopt};
  const SuperOperator K = assignment_second_order(p);
  std::mt19937_64 g(77);
  int negative = 0;
  double worst_formula = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Vector2cd phi = random_pure_state(g);
    const Operator rho = phi * phi.adjoint();
    if (min_eigenvalue(K.apply(rho)) < 0.0) ++negative;
    const Eigen::Vector2cd psi(-std::conj(phi(1)), std::conj(phi(0)));
    for (const Eigen::Vector2cd& v : {psi, random_pure_state(g)}) {
      worst_formula = std::max(worst_formula, std::abs(negativity_element(v, rho, p) - direct_element(v, rho, p)));
    }
  }
  return {negative == 100 && worst_formula <= 1e-10,
          std::to_string(negative) + "/100 pure states negative, formula vs direct " + fmt(worst_formula)};
}

// 8. randomized property suites
Outcome property_suites() {
  std::mt19937_64 g(88);
  std::normal_distribution<double> nd;
  auto rmat = [&](Index d) {
    Operator m(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) m(i, j) = cplx(nd(g), nd(g));
    return m;
  };
  auto rherm = [&](Index d) {
    const Operator m = rmat(d);
    return Operator(0.5 * (m + m.adjoint()));
  };
  std::ostringstream d;
  // trace and Hermiticity
  double drift = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const Index dim = 2 + rep % 3;
    SuperOperator L = hamiltonian_superop(rherm(dim));
    for (int k = 0; k < 2; ++k) L += dissipator_superop(rmat(dim));
    const Operator X = rherm(dim);
    const auto tr = evolve(L, X, uniform_grid(0.0, 2.0, 0.25));
    drift = std::max(drift, std::max(tr.trace_drift, tr.hermiticity_defect) / std::max(1.0, X.norm()));
  }
  const LindbladModel jc = build_jc_model({0.0, 1.0, 1.0, 0.1, std::nullopt});
  const auto res = eliminate(jc, 4);
  const SuperOperator Ls = reduced_generator(res, jc.eps);
  drift = std::max(drift, trace_annihilation_defect(Ls));
  const bool trace_ok = drift <= 1e-9 && is_hermiticity_preserving(Ls);
  d << "trace/herm " << fmt(drift);
  // odd orders
  const double odd = std::max(res.Ls[1].norm(), res.Ls[3].norm());
  const bool odd_ok = odd <= 1e-10;
  d << ", odd orders " << fmt(odd);
  // WPG on random channels
  int wpg_ok = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const SuperOperator M = random_qubit_channel(g, 1 + rep % 8);
    wpg_ok += wpg_feasible(make_spectrum_quadruple(eigenvalues4(M.dense()), 1e-8), 1e-9).feasible;
  }
  d << ", WPG " << wpg_ok << "/1000";
  // Lindblad form vs Choi positivity
  int agree = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const bool psd = rep % 2 == 0;
    Eigen::Matrix3cd Gamma;
    for (;;) {
      Eigen::Matrix3cd A;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = cplx(nd(g), nd(g));
      Gamma = psd ? Eigen::Matrix3cd(A * A.adjoint()) : Eigen::Matrix3cd(0.5 * (A + A.adjoint()));
      const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd>(Gamma).eigenvalues()(0);
      if (std::abs(lmin) > 0.05 * Gamma.norm() && (lmin > 0.0) == psd) break;
    }
    GKSDecomposition dec;
    dec.Gamma = Gamma;
    Operator H = rherm(2);
    H -= (H.trace() / 2.0) * Operator::Identity(2, 2);
    dec.H_eff = H;
    const SuperOperator L = gks_reconstruct(dec);
    const double delta = 1e-4 / operator_norm(L.dense());
    agree += is_lindblad(L).lindblad == is_cp(evolution_map(L, delta)).cp;
  }
  d << ", Lindblad/Choi " << agree << "/200";
  return {trace_ok && odd_ok && wpg_ok == 1000 && agree == 200, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 closed-form reproduction", closed_form_reproduction},
      {"2 negativity region", negativity_region},
      {"3 CP-violation triad", cp_violation_triad},
      {"4 gauge independence", gauge_independence},
      {"5 model-free confirmation", model_free_confirmation},
      {"6 invariance-equation scaling", residual_scaling},
      {"7 assignment negativity", assignment_negativity},
      {"8 property suites", property_suites},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
