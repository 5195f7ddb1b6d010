#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace corrconv;
using testsupport::max_abs_diff;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

QuditConfig balanced_config(double p, std::optional<double> m = std::nullopt) {
  return make_qudit_config(2, {kInvSqrt2, kInvSqrt2}, p, m);
}

}  // namespace

TEST_CASE("tau at the reference points") {
  REQUIRE(tau(balanced_config(0.0, 0.0)) == Catch::Approx(1.0));
  REQUIRE(tau(balanced_config(0.0, 1.0)) == Catch::Approx(1.0 / 3.0).margin(1e-15));

  // decreasing in both the mixing parameter and the dimension
  double last = 2.0;
  for (double m : {0.0, 0.25, 0.5, 1.0}) {
    const double t = tau(balanced_config(0.0, m));
    REQUIRE(t < last + 1e-15);
    last = t;
  }
  const std::vector<double> b3{1.0, 0.0, 0.0};
  REQUIRE(tau(make_qudit_config(3, b3, 0.0, 0.7)) <
          tau(make_qudit_config(2, {1.0, 0.0}, 0.0, 0.7)));
}

TEST_CASE("qudit config validation") {
  REQUIRE_THROWS_AS(make_qudit_config(1, {1.0}, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_qudit_config(2, {0.5, 0.5}, 0.0), std::invalid_argument);  // norm
  REQUIRE_THROWS_AS(make_qudit_config(2, {0.4, std::sqrt(1.0 - 0.16)}, 0.0),
                    std::invalid_argument);  // not descending
  REQUIRE_THROWS_AS(make_qudit_config(2, {kInvSqrt2, kInvSqrt2}, 1.5), std::invalid_argument);
}

TEST_CASE("qudit input family members are valid states") {
  const QuditConfig c = balanced_config(0.0, 1.0);
  const DensityMatrix mixed = qudit_family_state(c, 0.0);
  REQUIRE(max_abs_diff(mixed.matrix(), ComplexMatrix::Identity(8, 8) / 8.0) < 1e-15);

  const QuditConfig pure_cfg = make_qudit_config(2, {1.0, 0.0}, 0.0, 0.0);
  const DensityMatrix pure = qudit_input(pure_cfg);  // tau = 1, b = (1, 0)
  ComplexMatrix expected = ComplexMatrix::Zero(8, 8);
  expected(0, 0) = 1.0;
  REQUIRE(max_abs_diff(pure.matrix(), expected) < 1e-15);

  const DensityMatrix generic = qudit_input(balanced_config(1.0 / 3.0, 1.0));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(generic.matrix(), Eigen::EigenvaluesOnly);
  REQUIRE(s.eigenvalues().minCoeff() >= -1e-10);
  REQUIRE(generic.matrix().trace().real() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("default flag unitary is the controlled shift") {
  for (int d : {2, 3, 4}) {
    const ComplexMatrix u = default_flag_unitary(d);
    REQUIRE(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(d * d, d * d)) < 1e-14);
    for (int i = 0; i < d; ++i) {
      ComplexVector in = ComplexVector::Zero(d * d);
      in(i * d) = 1.0;  // |i, 0>
      ComplexVector expected = ComplexVector::Zero(d * d);
      expected(i * d + i) = 1.0;  // |i, i>
      REQUIRE((u * in - expected).norm() < 1e-14);
    }
  }
}

TEST_CASE("flag unitary completion keeps the requested target columns") {
  const int d = 3;
  ComplexMatrix targets = ComplexMatrix::Zero(d * d, d);
  // images |i, i> written explicitly
  for (int i = 0; i < d; ++i) targets(i * d + i, i) = 1.0;
  const ComplexMatrix u = flag_unitary_from_targets(targets, d);
  REQUIRE(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(d * d, d * d)) < 1e-12);
  for (int i = 0; i < d; ++i) REQUIRE((u.col(i * d) - targets.col(i)).norm() < 1e-14);

  ComplexMatrix bad = targets;
  bad.col(1) = bad.col(0);
  REQUIRE_THROWS_AS(flag_unitary_from_targets(bad, d), std::invalid_argument);
}

TEST_CASE("qudit evolution weights and round trip") {
  const QuditConfig noiseless = balanced_config(0.0, 1.0);
  const DensityMatrix at_zero = qudit_evolve(noiseless);
  // pure-part weight tau survives when p = 0
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(at_zero.matrix(), Eigen::EigenvaluesOnly);
  const double t = tau(noiseless);
  REQUIRE(s.eigenvalues().maxCoeff() == Catch::Approx(t + (1.0 - t) / 8.0).margin(1e-12));

  const QuditConfig dead = balanced_config(1.0, 1.0);
  REQUIRE(max_abs_diff(qudit_evolve(dead).matrix(), ComplexMatrix::Identity(8, 8) / 8.0) < 1e-14);

  for (double p : {0.0, 0.2, 1.0 / 3.0, 0.8}) {
    const QuditConfig c = balanced_config(p, 1.0);
    const double gt = (1.0 - p) * tau(c);
    REQUIRE(gt <= tau(c) + 1e-15);
    if (p > 0.0) REQUIRE(gt < tau(c));

    const ComplexMatrix u = default_flag_unitary(c.d);
    const ComplexMatrix w = embed_operator(u, {c.d, c.d, c.d}, {0, 2});
    const DensityMatrix evolved = qudit_evolve(c, u);
    const ComplexMatrix back = w.adjoint() * evolved.matrix() * w;
    REQUIRE(max_abs_diff(back, qudit_family_state(c, gt).matrix()) < 1e-10);
  }

  REQUIRE_THROWS_AS(qudit_evolve(noiseless, 2.0 * default_flag_unitary(2)),
                    std::invalid_argument);
}

TEST_CASE("threshold verdicts at the reference points") {
  REQUIRE(qudit_entangled(1.0, kInvSqrt2, kInvSqrt2, 2));
  REQUIRE(qudit_threshold(kInvSqrt2, kInvSqrt2, 2) == Catch::Approx(0.5).margin(1e-15));
  REQUIRE_FALSE(qudit_entangled(qudit_threshold(kInvSqrt2, kInvSqrt2, 2), kInvSqrt2, kInvSqrt2, 2));
  REQUIRE_FALSE(qudit_entangled(2.0 / 9.0, kInvSqrt2, kInvSqrt2, 2));

  // raising a1*a2*d lowers the threshold, so a true verdict can never flip
  double last = 1.0;
  for (int d = 2; d <= 6; ++d) {
    const double th = qudit_threshold(kInvSqrt2, kInvSqrt2, d);
    REQUIRE(th < last);
    last = th;
  }
}

TEST_CASE("threshold verdict matches the PPT oracle on the d = 2 family") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> angle(0.05, M_PI / 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  while (checked < 50) {
    const double theta = angle(rng);
    const double a1 = std::cos(theta);
    const double a2 = std::sin(theta);
    const double tg = unit(rng);
    if (std::abs(tg - qudit_threshold(a1, a2, 2)) < 1e-6) continue;  // off the knife edge
    const std::array<double, 2> coeffs{a1, a2};
    const DensityMatrix state = correlated_isotropic_state(tg, coeffs, 2);
    const bool ppt = ppt_check(state, 1).is_ppt;
    REQUIRE(qudit_entangled(tg, a1, a2, 2) == !ppt);
    ++checked;
  }
}

TEST_CASE("threshold equality is separable on the d = 2 family") {
  const std::array<double, 2> coeffs{kInvSqrt2, kInvSqrt2};
  const double boundary = qudit_threshold(kInvSqrt2, kInvSqrt2, 2);
  const DensityMatrix state = correlated_isotropic_state(boundary, coeffs, 2);
  REQUIRE(ppt_check(state, 1).is_ppt);
  REQUIRE(std::abs(ppt_check(state, 1).min_pt_eigenvalue) < 1e-12);
  REQUIRE_FALSE(qudit_entangled(boundary, kInvSqrt2, kInvSqrt2, 2));
}

TEST_CASE("correlated isotropic family members are valid states") {
  const std::array<double, 2> coeffs{0.8, 0.6};
  for (double w : {0.0, 0.3, 1.0}) {
    const DensityMatrix state = correlated_isotropic_state(w, coeffs, 2);
    REQUIRE(state.matrix().trace().real() == Catch::Approx(1.0).margin(1e-12));
  }
  REQUIRE_THROWS_AS(correlated_isotropic_state(0.5, std::array<double, 2>{0.9, 0.9}, 2),
                    std::invalid_argument);
}
