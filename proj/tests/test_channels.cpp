#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace corrconv;
using testsupport::bell_phi_plus;
using testsupport::max_abs_diff;
using testsupport::random_density;

TEST_CASE("phase flip operators have the stated form") {
  const double p = 1.0 / 3.0;
  const KrausChannel ch = phase_flip(p);
  REQUIRE(ch.operators().size() == 2);
  REQUIRE(ch.operators()[0](0, 0).real() == Catch::Approx(std::sqrt(1.0 - p / 2.0)));
  REQUIRE(ch.operators()[0](1, 1).real() == Catch::Approx(std::sqrt(1.0 - p / 2.0)));
  REQUIRE(ch.operators()[1](0, 0).real() == Catch::Approx(std::sqrt(p / 2.0)));
  REQUIRE(ch.operators()[1](1, 1).real() == Catch::Approx(-std::sqrt(p / 2.0)));

  REQUIRE_THROWS_AS(phase_flip(-0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(phase_flip(1.1), std::invalid_argument);
}

TEST_CASE("Kraus channels enforce completeness") {
  ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
  REQUIRE_THROWS_AS(KrausChannel({half}, "broken"), std::invalid_argument);
  for (double p : {0.0, 1.0 / 3.0, 0.7, 1.0}) {
    const KrausChannel ch = phase_flip(p);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto& op : ch.operators()) sum += op.adjoint() * op;
    REQUIRE(max_abs_diff(sum, ComplexMatrix::Identity(2, 2)) <= 1e-12);
  }
}

TEST_CASE("kraus_apply leaves states invariant under the identity channel") {
  const DensityMatrix rho = random_density({2, 2});
  REQUIRE(max_abs_diff(kraus_apply(identity_channel(), rho, 1).matrix(), rho.matrix()) < 1e-14);
}

TEST_CASE("phase flip damps a qubit coherence by exactly 1 - p") {
  for (double p : {0.0, 1.0 / 3.0, 0.5, 1.0}) {
    const DensityMatrix rho = random_density({2});
    const DensityMatrix out = kraus_apply(phase_flip(p), rho, 0);
    // by-hand operator sum: (1 - p/2) rho01 - (p/2) rho01
    const Complex expected = (1.0 - p) * rho.matrix()(0, 1);
    REQUIRE(std::abs(out.matrix()(0, 1) - expected) < 1e-14);
    REQUIRE(std::abs(out.matrix()(0, 0) - rho.matrix()(0, 0)) < 1e-14);
  }
}

TEST_CASE("kraus_apply preserves trace and positivity on random inputs") {
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = random_density({2, 2, 2});
    const DensityMatrix out = kraus_apply(phase_flip(0.61), rho, 1);
    REQUIRE(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> s(out.matrix(), Eigen::EigenvaluesOnly);
    REQUIRE(s.eigenvalues().minCoeff() >= -1e-10);
  }
  REQUIRE_THROWS_AS(kraus_apply(phase_flip(0.5), random_density({3}), 0), std::invalid_argument);
}

TEST_CASE("Pauli capacity expression at the reference points") {
  const PauliCapacity zero = pauli_quantum_capacity(PauliNoise{1.0 / 6.0, 1.0 / 6.0, 0.0});
  REQUIRE(std::abs(zero.raw) <= 1e-12);
  REQUIRE_FALSE(zero.is_positive);

  const PauliCapacity clean = pauli_quantum_capacity(PauliNoise{0.0, 0.0, 0.0});
  REQUIRE(clean.raw == 1.0);
  REQUIRE(clean.is_positive);

  const PauliCapacity weak = pauli_quantum_capacity(PauliNoise{0.01, 0.0, 0.0});
  REQUIRE(weak.raw == Catch::Approx(0.98).margin(1e-14));
}

TEST_CASE("Pauli capacity is symmetric in the noise components") {
  const PauliNoise base{0.05, 0.11, 0.02};
  const double reference = pauli_quantum_capacity(base).raw;
  for (const PauliNoise& perm : {PauliNoise{0.11, 0.05, 0.02}, PauliNoise{0.02, 0.11, 0.05},
                                 PauliNoise{0.05, 0.02, 0.11}}) {
    REQUIRE(pauli_quantum_capacity(perm).raw == Catch::Approx(reference).margin(1e-14));
  }
  REQUIRE_THROWS_AS(pauli_quantum_capacity(PauliNoise{-0.1, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("measure-and-prepare channel breaks entanglement") {
  const EntanglementBreakingChannel eb;
  const DensityMatrix out = kraus_apply(eb.kraus(), bell_phi_plus(), 1);
  REQUIRE(ppt_check(out, 1).is_ppt);
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(3, 3) = 0.5;
  REQUIRE(max_abs_diff(out.matrix(), expected) < 1e-14);
}

TEST_CASE("measure-and-prepare Kraus operators are unit rank") {
  const EntanglementBreakingChannel eb;
  for (const auto& op : eb.kraus().operators()) {
    Eigen::JacobiSVD<ComplexMatrix> svd(op);
    REQUIRE(svd.singularValues()(0) > 0.9);
    REQUIRE(svd.singularValues()(1) <= 1e-12);
  }
}

TEST_CASE("measure-and-prepare outcome statistics follow the Born rule") {
  const EntanglementBreakingChannel eb;
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  auto outcomes = eb.measure(DensityMatrix(zero, {2}));
  REQUIRE(outcomes[0].probability == Catch::Approx(1.0));
  REQUIRE(outcomes[1].probability == Catch::Approx(0.0));
  REQUIRE(max_abs_diff(outcomes[0].post_state.matrix(), zero) < 1e-15);

  ComplexMatrix mix = ComplexMatrix::Zero(2, 2);
  mix(0, 0) = 0.3;
  mix(1, 1) = 0.7;
  outcomes = eb.measure(DensityMatrix(mix, {2}));
  REQUIRE(outcomes[0].probability == Catch::Approx(0.3));
  REQUIRE(outcomes[1].probability == Catch::Approx(0.7));
}

TEST_CASE("measure_flag on a product state is deterministic") {
  const DensityMatrix ab = random_density({2, 2});
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  const DensityMatrix abc(kron(ab.matrix(), zero), {2, 2, 2});
  const auto outcomes = measure_flag(abc);
  REQUIRE(outcomes[0].probability == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(outcomes[1].probability == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(max_abs_diff(outcomes[0].post_state.matrix(), ab.matrix()) < 1e-12);
}

TEST_CASE("measure_flag probabilities come from the flag-diagonal blocks") {
  const double delta = 1.0 / 3.0;
  const DensityMatrix sigma = apply_joint(input_tripartite({delta, std::nullopt}), 1.0 / 3.0).state;
  const auto outcomes = measure_flag(sigma);
  // direct projection oracle: sum the diagonal over flag value 0
  double block0 = 0.0;
  for (int k : {0, 2, 4, 6}) block0 += sigma.matrix()(k, k).real();
  REQUIRE(outcomes[0].probability == Catch::Approx(block0).margin(1e-14));
  REQUIRE(block0 == Catch::Approx(1.0 - delta).margin(1e-12));
  REQUIRE(outcomes[0].probability + outcomes[1].probability == Catch::Approx(1.0).margin(1e-12));

  for (int trial = 0; trial < 5; ++trial) {
    const auto random_outcomes = measure_flag(random_density({2, 2, 2}));
    REQUIRE(random_outcomes[0].probability + random_outcomes[1].probability ==
            Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("isometric extension is an isometry and reproduces the channel") {
  for (double p : {1.0 / 3.0, 0.5, 0.9}) {
    const KrausChannel ch = phase_flip(p);
    const ComplexMatrix u = isometric_extension(ch);
    REQUIRE(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(2, 2)) <= 1e-12);
    for (int trial = 0; trial < 20; ++trial) {
      const DensityMatrix rho = random_density({2});
      const ComplexMatrix lifted = u * rho.matrix() * u.adjoint();
      const ComplexMatrix reduced = partial_trace(lifted, {2, 2}, {0});
      REQUIRE(max_abs_diff(reduced, kraus_apply(ch, rho, 0).matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("isometric extension of the identity channel leaves a pure environment") {
  const ComplexMatrix u = isometric_extension(identity_channel());
  REQUIRE(u.rows() == 2);
  const DensityMatrix rho = random_density({2});
  const ComplexMatrix lifted = u * rho.matrix() * u.adjoint();
  const ComplexMatrix env = partial_trace(lifted, {2, 1}, {1});
  REQUIRE(std::abs((env * env).trace().real() - 1.0) < 1e-12);
}

TEST_CASE("apply_joint produces the expected output at the illustration point") {
  const DensityMatrix rho = input_tripartite({1.0 / 3.0, std::nullopt});
  const JointChannelResult joint = apply_joint(rho, 1.0 / 3.0);
  REQUIRE(joint.zero_capacity_regime);
  const DensityMatrix sigma_ab = partial_trace(joint.state, {0, 1});
  REQUIRE(sigma_ab.matrix()(0, 3).real() == Catch::Approx(1.0 / 9.0).margin(1e-14));
  REQUIRE(sigma_ab.matrix()(0, 0).real() == Catch::Approx(1.0 / 3.0).margin(1e-14));
}

TEST_CASE("apply_joint at p = 1 removes every coherence") {
  const DensityMatrix rho = input_tripartite({0.2, std::nullopt});
  const DensityMatrix sigma = apply_joint(rho, 1.0).state;
  for (long r = 0; r < 8; ++r)
    for (long c = 0; c < 8; ++c)
      if (r != c) REQUIRE(std::abs(sigma.matrix()(r, c)) < 1e-14);
}

TEST_CASE("apply_joint output stays PPT across every cut before the flag readout") {
  for (double p : {1.0 / 3.0, 0.6, 1.0}) {
    for (double delta : {0.05, 0.2, 1.0 / 3.0}) {
      const JointChannelResult joint = apply_joint(input_tripartite({delta, std::nullopt}), p);
      const DensityMatrix sigma_ab = partial_trace(joint.state, {0, 1});
      REQUIRE(ppt_check(sigma_ab, 0).is_ppt);
      REQUIRE(ppt_check(sigma_ab, 1).is_ppt);
      for (int cut = 0; cut < 3; ++cut) REQUIRE(ppt_check(joint.state, cut).is_ppt);
    }
  }
}

TEST_CASE("apply_joint satisfies the gap law on a parameter grid") {
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      const double p = 1.0 / 3.0 + (i - 1) * (2.0 / 3.0) / 9.0;
      const double delta = j / 30.0;
      const DensityMatrix sigma_ab =
          partial_trace(apply_joint(input_tripartite({delta, std::nullopt}), p).state, {0, 1});
      REQUIRE(corner_block_gap(sigma_ab) ==
              Catch::Approx((1.0 - p) * delta).margin(1e-12));
    }
  }
}

TEST_CASE("apply_joint tags the sub-threshold noise regime") {
  const DensityMatrix rho = input_tripartite({0.1, std::nullopt});
  REQUIRE_FALSE(apply_joint(rho, 0.2).zero_capacity_regime);
  REQUIRE(apply_joint(rho, 1.0 / 3.0).zero_capacity_regime);
  REQUIRE_THROWS_AS(apply_joint(rho, 1.2), std::invalid_argument);
}
