// Analytic fourth-order rates, the negativity region and the second-order
// assignment map.

#include <catch_amalgamated.hpp>

#include "aecp/closed_form.hpp"
#include "aecp/elimination.hpp"
#include "aecp/jc_reduction.hpp"
#include "test_util.hpp"

using namespace aecp;
using aecp::testing::random_density;
using aecp::testing::random_hermitian;

namespace {
double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

const JCParams kRef{0.0, 1.0, 1.0, 0.1, 12};
}  // namespace

TEST_CASE("fourth-order coefficients", "[closed_form]") {
  SECTION("reference point") {
    const auto f = fourth_order_coeffs({0.0, 1.0, 1.0, 0.1, std::nullopt});
    CHECK(std::abs(f.gamma_phi4 + 0.0048) < 1e-15);
    CHECK(std::abs(f.gamma_minus4 - 0.0896) < 1e-15);
    CHECK(std::abs(f.gamma_plus4 - 0.0448) < 1e-15);
    CHECK(f.omega_B4 == 0.0);
    CHECK(std::abs(f.gamma_phi4 + 24.0 * 1e-4 * f.n_plus * f.n_minus) < 1e-15);
  }
  SECTION("output relations") {
    for (const JCParams& p : {JCParams{0.3, 1.0, 0.5, 0.2, std::nullopt}, JCParams{-0.7, 2.0, 1.5, 0.1, std::nullopt}}) {
      const auto f = fourth_order_coeffs(p);
      CHECK(f.omega_B4 == Catch::Approx((f.b_minus + f.b_plus).imag()).margin(1e-16));
      CHECK(f.gamma_minus4 == Catch::Approx(2.0 * f.b_minus.real()));
      CHECK(f.gamma_plus4 == Catch::Approx(2.0 * f.b_plus.real()));
      CHECK(f.gamma_bar == cplx(p.gamma, 2.0 * p.delta_A));
      CHECK(f.gamma_minus2 / f.gamma_plus2 == Catch::Approx(f.n_minus / f.n_plus));
    }
  }
  SECTION("zero temperature has no dephasing") {
    for (double d : {0.0, 0.2, 0.5}) CHECK(fourth_order_coeffs({d, 1.0, 0.0, 0.1, std::nullopt}).gamma_phi4 == 0.0);
  }
  SECTION("g = 0") {
    const auto f = fourth_order_coeffs({0.4, 1.0, 1.0, 0.0, std::nullopt});
    CHECK(f.omega_B4 == 0.0);
    CHECK(f.gamma_minus4 == 0.0);
    CHECK(f.gamma_plus4 == 0.0);
    CHECK(f.gamma_phi4 == 0.0);
  }
  CHECK_THROWS_AS(fourth_order_coeffs({0.0, 0.0, 1.0, 0.1, std::nullopt}), InvalidParameter);
}

TEST_CASE("negativity region", "[closed_form][region]") {
  const double thr = negativity_threshold();
  CHECK(std::abs(thr - std::sqrt(2.0 * std::sqrt(3.0) - 3.0) / 2.0) < 1e-15);
  const double x = 2.0 * thr;
  CHECK(std::abs(3.0 - 6.0 * x * x - x * x * x * x) < 1e-12);
  CHECK(std::abs(fourth_order_coeffs({thr, 1.0, 1.0, 0.1, std::nullopt}).gamma_phi4) < 1e-12);

  CHECK(phi_negativity_region(0.2, 1.0));
  CHECK_FALSE(phi_negativity_region(0.5, 1.0));
  CHECK_FALSE(phi_negativity_region(0.2, 0.0));
  CHECK(phi_negativity_region(-0.2, 1.0));
  CHECK(phi_negativity_region(thr - 1e-9, 1.0));
  CHECK_FALSE(phi_negativity_region(thr + 1e-9, 1.0));
}

TEST_CASE("region sign agrees with the numeric rates", "[closed_form][region][jc]") {
  for (double d : {0.0, 0.2, 0.5}) {
    for (double n : {0.0, 0.5, 1.0}) {
      for (double g : {0.05, 0.1, 0.2}) {
        const JCParams p{d, 1.0, n, g, std::nullopt};
        const double num = numeric_coeffs(p, 4).coeffs.gamma_phi;
        CAPTURE(d, n, g, num);
        CHECK((num < -1e-12) == phi_negativity_region(d, n));
        CHECK((fourth_order_coeffs(p).gamma_phi4 < 0.0) == phi_negativity_region(d, n));
      }
    }
  }
}

TEST_CASE("second-order assignment", "[closed_form][assignment]") {
  // the closed form uses eigen-operator identities of the untruncated
  // oscillator, so agreement needs a negligible thermal tail
  SECTION("agrees with the numeric series truncated at order two") {
    for (const JCParams& p : {JCParams{0.0, 1.0, 1.0, 0.1, 36}, JCParams{0.0, 1.0, 0.5, -0.05, 24},
                              JCParams{0.0, 2.0, 1.0, 0.3, 36}}) {
      const LindbladModel m = build_jc_model(p);
      const auto res = eliminate(m, 2);
      const Eigen::MatrixXcd num = assignment_map(res, m.eps).dense();
      const Eigen::MatrixXcd cf = assignment_second_order(p).dense();
      CHECK(max_abs(num - cf) <= 1e-8 * max_abs(num));
      // the V-form differs by its g³, g⁴ terms
      CHECK(max_abs(assignment_second_order_vform(p).dense() - cf) > 1e-8);
    }
  }
  SECTION("cutoff error decays with N") {
    double prev = 1.0;
    for (int N : {6, 12, 18}) {
      const JCParams p{0.0, 1.0, 1.0, 0.1, N};
      const LindbladModel m = build_jc_model(p);
      const double d = max_abs(assignment_map(eliminate(m, 2), m.eps).dense() - assignment_second_order(p).dense());
      CHECK(d < 0.1 * prev);
      prev = d;
    }
  }
  SECTION("g = 0 attaches the thermal state") {
    const JCParams p{0.0, 1.0, 1.0, 0.0, 6};
    const Operator rho = random_density(2);
    CHECK(max_abs(assignment_second_order(p).apply(rho) - kron(thermal_state(1.0, 6), rho)) < 1e-15);
    CHECK(max_abs(assignment_second_order_vform(p).apply(rho) - kron(thermal_state(1.0, 6), rho)) < 1e-15);
  }
  SECTION("trace defect of the V-form is fourth order") {
    const Operator rho = random_density(2);
    auto defect = [&](double g) {
      const JCParams p{0.0, 1.0, 1.0, g, 30};
      return std::abs(assignment_second_order_vform(p).apply(rho).trace() - 1.0);
    };
    const double r = defect(0.1) / defect(0.05);
    CHECK(r > 14.0);
    CHECK(r < 18.0);
    CHECK(std::abs(assignment_second_order({0.0, 1.0, 1.0, 0.1, 30}).apply(rho).trace() - 1.0) < 1e-8);
  }
  SECTION("ground state is mapped outside the PSD cone") {
    const Operator out = assignment_second_order(kRef).apply(matrix_unit(2, 0, 0));
    CHECK(min_eigenvalue(out) < 0.0);
  }
  SECTION("Hermitian in, Hermitian out") {
    auto& g = aecp::testing::rng();
    const SuperOperator K = assignment_second_order(kRef);
    for (int rep = 0; rep < 20; ++rep) {
      const Operator out = K.apply(random_hermitian(2, g));
      CHECK(max_abs(out - out.adjoint()) <= 1e-12);
    }
  }
  SECTION("detuning is rejected") {
    CHECK_THROWS_AS(assignment_second_order({0.1, 1.0, 1.0, 0.1, 6}), RequiresZeroDetuning);
    CHECK_THROWS_AS(negativity_element(Eigen::Vector2cd(1, 0), matrix_unit(2, 0, 0), {0.1, 1.0, 1.0, 0.1, 6}),
                    RequiresZeroDetuning);
  }
}

TEST_CASE("negativity matrix element", "[closed_form][negativity]") {
  const double vac = thermal_state(1.0, 12)(0, 0).real();
  SECTION("ground state with the excited kernel vector") {
    const Eigen::Vector2cd e(0.0, 1.0);
    const double v = negativity_element(e, matrix_unit(2, 0, 0), kRef);
    // only the σ- projection survives: -vac · 4g²/γ² · n²/(1+n)
    CHECK(std::abs(v + vac * 0.04 * 0.5) < 1e-15);
    CHECK(std::abs(v - direct_element(e, matrix_unit(2, 0, 0), kRef)) < 1e-10);
  }
  SECTION("maximally mixed qubit") {
    std::mt19937_64 g(12);
    for (int rep = 0; rep < 10; ++rep) {
      const Eigen::Vector2cd psi = random_pure_state(g);
      const Operator I2 = 0.5 * qubit::identity();
      CHECK(std::abs(negativity_element(psi, I2, kRef) - direct_element(psi, I2, kRef)) < 1e-10);
    }
  }
  SECTION("g = 0") {
    const JCParams p{0.0, 1.0, 1.0, 0.0, 12};
    const Eigen::Vector2cd psi(std::sqrt(0.3), cplx(0.0, std::sqrt(0.7)));
    const Operator rho = random_density(2);
    const double v = negativity_element(psi, rho, p);
    CHECK(std::abs(v - vac * psi.dot(rho * psi).real()) < 1e-15);
    CHECK(v >= 0.0);
  }
  SECTION("pure states and their kernel vectors") {
    std::mt19937_64 g(13);
    for (int rep = 0; rep < 50; ++rep) {
      const Eigen::Vector2cd phi = random_pure_state(g);
      const Eigen::Vector2cd psi(-std::conj(phi(1)), std::conj(phi(0)));
      const Operator rho = phi * phi.adjoint();
      CHECK(negativity_element(psi, rho, kRef) < 0.0);
    }
  }
  SECTION("random states against the direct element") {
    std::mt19937_64 g(14);
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::Vector2cd psi = random_pure_state(g);
      const Operator rho = random_density(2, g);
      CHECK(std::abs(negativity_element(psi, rho, kRef) - direct_element(psi, rho, kRef)) < 1e-10);
    }
  }
}

TEST_CASE("image boundary scan", "[closed_form][image]") {
  const auto rep = image_boundary_scan(kRef, 100, 3);
  CHECK(rep.n_pure == 100);
  CHECK(rep.n_pure_negative == 100);
  CHECK(rep.worst_pure_min_eig < 0.0);
  CHECK(rep.maximally_mixed_min_eig >= 0.0);
  CHECK(rep.min_threshold_radius > 0.5);
  CHECK(rep.min_threshold_radius < 1.0);
  CHECK(rep.purity_threshold > 0.5);
  CHECK(rep.purity_threshold < 1.0);
  // stronger coupling shrinks the admissible Bloch ball
  const auto weak = image_boundary_scan({0.0, 1.0, 1.0, 0.05, 12}, 100, 3);
  CHECK(weak.min_threshold_radius > rep.min_threshold_radius);
}
