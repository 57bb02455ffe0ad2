// Full composite evolution, decay-rate fits and the reduction comparison.

#include <catch_amalgamated.hpp>

#include "aecp/closed_form.hpp"
#include "aecp/oracle.hpp"
#include "test_util.hpp"

using namespace aecp;
using aecp::testing::random_density;

namespace {
double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

struct FullFit {
  DecayFit fit;
  std::vector<QubitGeneratorCoeffs> orders;  // k = 2, 4, 6
};

// Full simulation from the order-6 manifold vs the elimination rates at the
// same cutoff.
FullFit fit_against_orders(double eps, int N) {
  const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, eps, N});
  const auto res = eliminate(m, 6);
  Operator rho0 = assignment_map(res, m.eps).apply(qubit::from_bloch(0.3, 0.0, 0.2));
  rho0 /= rho0.trace();
  const auto full = reduce_to_B(evolve_full(m, rho0, uniform_grid(10.0, 200.0, 1.0)), m);
  FullFit out{fit_decay_rates(full, 10.0), {}};
  for (int k : {2, 4, 6}) {
    out.orders.push_back(coeffs_from_generator(reduced_generator(truncate(res, k), m.eps)).coeffs);
  }
  return out;
}

const FullFit& fit_010() {
  static const FullFit f = fit_against_orders(0.1, 12);
  return f;
}
const FullFit& fit_005() {
  static const FullFit f = fit_against_orders(0.05, 12);
  return f;
}
}  // namespace

TEST_CASE("uniform grid", "[oracle]") {
  const auto t = uniform_grid(0.0, 1.0, 0.1);
  REQUIRE(t.size() == 11);
  CHECK(t.back() == Catch::Approx(1.0));
  CHECK_THROWS_AS(uniform_grid(0.0, 1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(uniform_grid(1.0, 0.0, 0.1), InvalidParameter);
}

TEST_CASE("uncoupled evolution is stationary", "[oracle][evolve]") {
  const LindbladModel m = build_jc_model({0.3, 1.0, 1.0, 0.0, 4});
  const Operator rho0 = kron(m.steady_state_A, random_density(2));
  const auto tr = evolve_full(m, rho0, uniform_grid(0.0, 20.0, 1.0));
  for (const Operator& s : tr.states) CHECK(max_abs(s - rho0) < 1e-10);
}

TEST_CASE("trace and Hermiticity along the full evolution", "[oracle][evolve]") {
  const LindbladModel m = build_jc_model({0.2, 1.0, 1.0, 0.15, 6});
  const Operator rho0 = kron(thermal_state(1.0, 6), random_density(2));
  const auto tr = evolve_full(m, rho0, uniform_grid(0.0, 50.0, 0.5));
  CHECK(tr.trace_drift < 1e-9);
  CHECK(tr.hermiticity_defect < 1e-9);
  CHECK(tr.states.size() == 101);
  const auto red = reduce_to_B(tr, m);
  CHECK(red.states.front().rows() == 2);
  CHECK(std::abs(red.states.back().trace() - 1.0) < 1e-9);
}

TEST_CASE("zero temperature relaxes onto the kernel of L_tot", "[oracle][evolve]") {
  const LindbladModel m = build_jc_model({0.0, 1.0, 0.0, 0.3, 4});
  const SuperOperator L = m.total();
  const auto sd = spectrum(L, true);
  const Eigen::MatrixXcd P = kernel_projector(sd);
  const Operator rho0 = kron(matrix_unit(5, 2, 2), random_density(2));
  const Operator expect = devectorize(P * vectorize(rho0), m.bipartite().dim());
  // dark state |0,g⟩
  CHECK(max_abs(expect - matrix_unit(10, 0, 0)) < 1e-8);
  const auto tr = evolve_full(m, rho0, {0.0, 150.0});
  CHECK(max_abs(tr.states.back() - expect) < 1e-8);
}

TEST_CASE("propagator caches the step", "[oracle][evolve]") {
  const LindbladModel m = build_jc_model({0.0, 1.0, 1.0, 0.1, 3});
  Propagator prop(m.total());
  const Eigen::MatrixXcd& a = prop.step(0.5);
  const Eigen::MatrixXcd& b = prop.step(0.5);
  CHECK(&a == &b);
  const Operator rho0 = kron(thermal_state(1.0, 3), random_density(2));
  const auto t1 = prop.run(rho0, uniform_grid(0.0, 5.0, 0.5));
  const auto t2 = evolve_full(m, rho0, uniform_grid(0.0, 5.0, 0.5));
  for (std::size_t k = 0; k < t1.states.size(); ++k) CHECK(max_abs(t1.states[k] - t2.states[k]) < 1e-13);
  CHECK_THROWS_AS(evolve(m.total(), random_density(2), {0.0}), DimensionMismatch);
}

TEST_CASE("full evolution map is completely positive", "[oracle][cp]") {
  for (int N : {2, 3}) {
    const LindbladModel m = build_jc_model({0.1, 1.0, 1.0, 0.2, N});
    for (double dt : {0.01, 0.5}) {
      const auto c = full_map_cp_check(m, dt);
      CHECK(c.cp);
      CHECK(c.min_eigenvalue > -1e-10);
    }
  }
  CHECK_THROWS_AS(full_map_cp_check(build_jc_model({0.0, 1.0, 1.0, 0.1, 8}), 0.1), InvalidParameter);
}

TEST_CASE("decay fit on synthetic trajectories", "[oracle][fit]") {
  const QubitGeneratorCoeffs c{0.37, 0.09, 0.045, 0.011};
  const auto times = uniform_grid(0.0, 40.0, 0.5);
  const auto tr = evolve(qubit_generator(c), qubit::from_bloch(0.4, -0.3, 0.5), times);
  const auto f = fit_decay_rates(tr);
  CHECK(std::abs(f.inv_T1 - c.inv_T1()) < 1e-9);
  CHECK(std::abs(f.inv_T2 - c.inv_T2()) < 1e-9);
  CHECK(std::abs(f.omega - c.omega_B) < 1e-9);
  CHECK(std::abs(f.gamma_phi() - c.gamma_phi) < 1e-9);
  CHECK(std::abs(f.R_z - c.R_z()) < 1e-9);
  CHECK(f.points_T2 == static_cast<int>(times.size()));

  SECTION("negative dephasing") {
    const QubitGeneratorCoeffs n{-0.2, 0.0896, 0.0448, -0.0048};
    const auto fn = fit_decay_rates(evolve(qubit_generator(n), qubit::from_bloch(0.3, 0.1, 0.2), times));
    CHECK(std::abs(fn.gamma_phi() - n.gamma_phi) < 1e-9);
    CHECK(fn.inv_T1 > fn.inv_T2);
  }
  SECTION("ill-conditioned") {
    const Operator rho = qubit::from_bloch(0.0, 0.0, c.R_z());
    CHECK_THROWS_AS(fit_decay_rates(evolve(qubit_generator(c), rho, times)), FitIllConditioned);
    CHECK_THROWS_AS(fit_decay_rates(tr, 39.5), FitIllConditioned);
  }
}

TEST_CASE("full-simulation rates converge to the elimination series", "[oracle][fit][slow]") {
  const FullFit& a = fit_010();
  const FullFit& b = fit_005();
  for (const FullFit* f : {&a, &b}) {
    const double d2 = std::abs(f->fit.inv_T1 - f->orders[0].inv_T1());
    const double d4 = std::abs(f->fit.inv_T1 - f->orders[1].inv_T1());
    const double d6 = std::abs(f->fit.inv_T1 - f->orders[2].inv_T1());
    CHECK(d4 < d2);
    CHECK(d6 < d4);
    CHECK(f->fit.gamma_phi() < 0.0);
    CHECK(f->fit.inv_T1 > f->fit.inv_T2);
  }
  // the fourth-order 1/T1 misses an ε⁶ term
  const double e4a = std::abs(a.fit.inv_T1 - a.orders[1].inv_T1());
  const double e4b = std::abs(b.fit.inv_T1 - b.orders[1].inv_T1());
  CHECK(std::log2(e4a / e4b) > 5.3);
  // and the rates approach their second-order values as ε -> 0
  const double sa = std::abs(a.fit.inv_T1 - a.orders[0].inv_T1()) / 0.01;
  const double sb = std::abs(b.fit.inv_T1 - b.orders[0].inv_T1()) / 0.0025;
  CHECK(sb < 0.5 * sa);
  CHECK(std::abs(b.fit.inv_T1 / b.orders[0].inv_T1() - 1.0) < 0.05);
}

TEST_CASE("reduction error against the full model", "[oracle][reduction]") {
  const JCParams p{0.0, 1.0, 1.0, 0.1, 10};
  const LindbladModel m = build_jc_model(p);
  const auto res = eliminate(m, 4);
  Propagator full(m.total());
  const Operator rs = qubit::from_bloch(0.3, 0.0, 0.2);
  const auto times = uniform_grid(0.0, 50.0, 0.5);

  std::vector<ReductionReport> reps;
  for (int k : {0, 2, 4}) reps.push_back(compare_reduction(m, truncate(res, k), rs, times, full));
  SECTION("higher even orders track the full dynamics better") {
    CHECK(reps[1].sup_error < reps[0].sup_error);
    CHECK(reps[2].sup_error < reps[1].sup_error);
    for (std::size_t k = 0; k < times.size(); ++k) {
      if (times[k] >= 5.0) CHECK(reps[2].errors[k] < reps[1].errors[k]);
    }
  }
  SECTION("initial state and bookkeeping") {
    for (const auto& r : reps) {
      CHECK_FALSE(r.init_outside_image);
      CHECK(r.reduced_full.trace_drift < 1e-9);
      CHECK(r.times.size() == times.size());
    }
    CHECK(reps[0].errors.front() < 1e-12);
  }
  SECTION("pure initial qubit states fall outside the image") {
    const auto r = compare_reduction(m, truncate(res, 2), qubit::from_bloch(0.0, 0.0, -1.0), times, full);
    CHECK(r.init_outside_image);
    CHECK(r.init_min_eigenvalue < 0.0);
    CHECK(r.reduced_full.trace_drift < 1e-9);
  }
}

TEST_CASE("validate_reduction sets the coupling from eps", "[oracle][reduction]") {
  const auto times = uniform_grid(0.0, 30.0, 1.0);
  const auto r = validate_reduction({0.0, 1.0, 1.0, -1.0, 6}, 2, 0.05, qubit::from_bloch(0.1, 0.1, 0.1), times);
  CHECK(r.eps == Catch::Approx(0.05));
  CHECK(r.order == 2);
  const auto r0 = validate_reduction({0.0, 1.0, 1.0, -1.0, 6}, 0, 0.05, qubit::from_bloch(0.1, 0.1, 0.1), times);
  CHECK(r.sup_error < 0.1 * r0.sup_error);
}
