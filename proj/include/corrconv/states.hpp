#pragma once

#include <algorithm>
#include <array>
#include <optional>

#include "corrconv/linalg.hpp"

namespace corrconv {

/// Bloch-vector parameterization of the two-qubit X family: local z-components
/// r, s and correlation coefficients c1, c2, c3, all in [-1, 1].
struct BellDiagonalParams {
  double r = 0.0;
  double s = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

/// The four closed-form eigenvalues of the X family; they sum to one.
struct EigenQuadruple {
  double v_plus = 0.0;
  double v_minus = 0.0;
  double u_plus = 0.0;
  double u_minus = 0.0;
};

/// Input family parameter: delta_in is the eigenvalue gap of the {|00>,|11>}
/// block of the two-qubit marginal, restricted to (0, 1/3]. flag_mix, when
/// set, overrides the distribution used to sample the flag readout.
struct InputSpec {
  double delta_in = 1.0 / 3.0;
  std::optional<std::array<double, 2>> flag_mix;
};

/// Correlation coefficients that realize the gap-delta input family:
/// c1 = delta, c2 = -delta, c3 = 1 - 2*delta (r = s = 0).
inline BellDiagonalParams params_for_gap(double delta) {
  return BellDiagonalParams{0.0, 0.0, delta, -delta, 1.0 - 2.0 * delta};
}

inline EigenQuadruple bloch_eigenvalues(const BellDiagonalParams& q) {
  const double dm = std::hypot(q.r - q.s, q.c1 + q.c2);
  const double dp = std::hypot(q.r + q.s, q.c1 - q.c2);
  EigenQuadruple e;
  e.v_plus = 0.25 * (1.0 - q.c3 + dm);
  e.v_minus = 0.25 * (1.0 - q.c3 - dm);
  e.u_plus = 0.25 * (1.0 + q.c3 + dp);
  e.u_minus = 0.25 * (1.0 + q.c3 - dp);
  return e;
}

namespace detail {
inline void check_param_ranges(const BellDiagonalParams& q) {
  for (double x : {q.r, q.s, q.c1, q.c2, q.c3})
    if (!(x >= -1.0 && x <= 1.0))
      throw std::invalid_argument("Bloch parameters must lie in [-1, 1]");
}
}  // namespace detail

/// X-shaped 4x4 state of the (r, s, c) parameterization. Throws when the
/// parameters produce a negative eigenvalue.
inline DensityMatrix bell_diagonal_state(const BellDiagonalParams& q) {
  detail::check_param_ranges(q);
  const EigenQuadruple e = bloch_eigenvalues(q);
  const double min_eig = std::min({e.v_plus, e.v_minus, e.u_plus, e.u_minus});
  if (min_eig < -tol::psd)
    throw std::domain_error("Bloch parameters yield negative eigenvalue " + std::to_string(min_eig));
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.25 * (1.0 + q.r + q.s + q.c3);
  m(1, 1) = 0.25 * (1.0 + q.r - q.s - q.c3);
  m(2, 2) = 0.25 * (1.0 - q.r + q.s - q.c3);
  m(3, 3) = 0.25 * (1.0 - q.r - q.s + q.c3);
  m(0, 3) = m(3, 0) = 0.25 * (q.c1 - q.c2);
  m(1, 2) = m(2, 1) = 0.25 * (q.c1 + q.c2);
  return DensityMatrix(std::move(m), {2, 2});
}

/// The X-family template with corner-block gap `gap`: diagonal
/// (1/2 - gap/2, gap/2, gap/2, 1/2 - gap/2) and corners gap/2. Equals
/// bell_diagonal_state(params_for_gap(gap)).
inline DensityMatrix gap_family_state(double gap) {
  if (!(gap >= 0.0 && gap <= 0.5))
    throw std::invalid_argument("gap template requires gap in [0, 1/2]");
  return bell_diagonal_state(params_for_gap(gap));
}

inline void validate(const InputSpec& spec) {
  if (!(spec.delta_in > 0.0) || spec.delta_in > 1.0 / 3.0 + 1e-12)
    throw std::invalid_argument("delta_in must lie in (0, 1/3]");
  if (spec.flag_mix) {
    const auto& mix = *spec.flag_mix;
    if (mix[0] < 0.0 || mix[1] < 0.0 || std::abs(mix[0] + mix[1] - 1.0) > tol::trace_one)
      throw std::invalid_argument("flag_mix must be a probability pair");
  }
}

/// Three-qubit input: qubits A, B carry the gap-delta family, qubit C is the
/// flag. The only coherence sits on |000><110| + h.c., so the two-qubit
/// marginal over A, B reproduces the gap family exactly for every delta.
///
/// The residual diagonal weight is split between the flag sectors: the
/// |01>, |10> populations ride with flag 0 and the remaining |00>, |11>
/// weight with flag 1. This split is what keeps every partial transpose of
/// the tripartite state nonnegative (the state is a mixture of a separable
/// two-qubit state against flag 0 and a classical one against flag 1).
/// Charging all of it to the flag-1 sector instead leaves the same marginal
/// but turns the B-side transpose negative; that variant is kept below and
/// its divergence is reported by the claim table.
inline DensityMatrix input_tripartite(const InputSpec& spec) {
  validate(spec);
  const double d = spec.delta_in;
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  m(0, 0) = m(6, 6) = 0.5 - d;   // |000>, |110>
  m(0, 6) = m(6, 0) = 0.5 * d;   // coherent corner
  m(2, 2) = m(4, 4) = 0.5 * d;   // |010>, |100>
  m(1, 1) = m(7, 7) = 0.5 * d;   // |001>, |111>
  return DensityMatrix(std::move(m), {2, 2, 2});
}

/// Variant with every residual diagonal weight in the flag-1 sector
/// (|001>, |011>, |101>, |111>). Same two-qubit marginal; its B-side partial
/// transpose has eigenvalue -delta/2, so it fails the advertised
/// transposition conditions.
inline DensityMatrix input_tripartite_flag1_weighted(const InputSpec& spec) {
  validate(spec);
  const double d = spec.delta_in;
  ComplexMatrix m = ComplexMatrix::Zero(8, 8);
  m(0, 0) = m(6, 6) = 0.5 - d;
  m(0, 6) = m(6, 0) = 0.5 * d;
  m(1, 1) = m(3, 3) = m(5, 5) = m(7, 7) = 0.5 * d;
  return DensityMatrix(std::move(m), {2, 2, 2});
}

namespace detail {
inline void require_x_shape(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4)
    throw std::invalid_argument("X-shape check requires a 4x4 matrix");
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c) {
      if (r == c || r + c == 3) continue;
      if (std::abs(m(r, c)) > tol::x_shape)
        throw std::invalid_argument("matrix is not X-shaped");
    }
}
}  // namespace detail

/// Eigenvalue gap of the {|00>,|11>} 2x2 block of an X-shaped two-qubit
/// state. This is the quantity the closed-form entanglement expression and
/// the flag-branch probability are built from.
inline double corner_block_gap(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("corner_block_gap requires a two-qubit state");
  detail::require_x_shape(rho.matrix());
  const ComplexMatrix& m = rho.matrix();
  return std::hypot(m(0, 0).real() - m(3, 3).real(), 2.0 * std::abs(m(0, 3)));
}

struct SeparabilityVerdict {
  double max_eigenvalue = 0.0;
  bool eigenvalue_bound_holds = false;  // max of the closed-form spectrum <= 1/2
  double correlation_abs_sum = 0.0;     // |c1| + |c2| + |c3|
  bool octahedron_holds = false;        // <= 1; conclusive when r = s = 0
  bool bloch_vanishes = false;
};

inline SeparabilityVerdict separability_conditions(const BellDiagonalParams& q) {
  const EigenQuadruple e = bloch_eigenvalues(q);
  SeparabilityVerdict v;
  v.max_eigenvalue = std::max({e.v_plus, e.v_minus, e.u_plus, e.u_minus});
  v.eigenvalue_bound_holds = v.max_eigenvalue <= 0.5 + 1e-12;
  v.correlation_abs_sum = std::abs(q.c1) + std::abs(q.c2) + std::abs(q.c3);
  v.octahedron_holds = v.correlation_abs_sum <= 1.0 + 1e-12;
  v.bloch_vanishes = std::abs(q.r) <= 1e-12 && std::abs(q.s) <= 1e-12;
  return v;
}

struct PptVerdict {
  bool is_ppt = false;
  double min_pt_eigenvalue = 0.0;
};

/// Peres-Horodecki check: transpose one subsystem and inspect the spectrum.
inline PptVerdict ppt_check(const DensityMatrix& rho, int subsystem) {
  const ComplexMatrix pt = partial_transpose(rho, subsystem);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(pt, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  PptVerdict v;
  v.min_pt_eigenvalue = solver.eigenvalues().minCoeff();
  v.is_ppt = v.min_pt_eigenvalue >= -tol::psd;
  return v;
}

}  // namespace corrconv
