#pragma once

#include <optional>
#include <span>

#include "corrconv/states.hpp"

namespace corrconv {

/// d-dimensional extension parameters: input Schmidt coefficients b (unit sum
/// of squares, descending), the two largest target coefficients a1 >= a2 of
/// the evolved pure part, the mixing parameter M entering tau = 1/(1 + M d),
/// and the channel noise p. The modeling premise M < a1*a2 is documented, not
/// enforced; the threshold arithmetic is well defined without it.
struct QuditConfig {
  int d = 2;
  std::vector<double> schmidt_b;
  double a1 = 0.0;
  double a2 = 0.0;
  double m = 0.0;
  double p = 0.0;
};

inline void validate(const QuditConfig& c) {
  if (c.d < 2 || c.d > 6)
    throw std::invalid_argument("qudit dimension must lie in [2, 6]");
  if (c.schmidt_b.empty() || c.schmidt_b.size() > static_cast<std::size_t>(c.d))
    throw std::invalid_argument("need between 1 and d Schmidt coefficients");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < c.schmidt_b.size(); ++i) {
    if (c.schmidt_b[i] < 0.0) throw std::invalid_argument("Schmidt coefficients must be nonnegative");
    if (i > 0 && c.schmidt_b[i] > c.schmidt_b[i - 1] + 1e-12)
      throw std::invalid_argument("Schmidt coefficients must be descending");
    norm2 += c.schmidt_b[i] * c.schmidt_b[i];
  }
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw std::invalid_argument("Schmidt coefficients must have unit sum of squares");
  if (c.a1 < c.a2 || c.a2 < 0.0) throw std::invalid_argument("need a1 >= a2 >= 0");
  if (c.m < 0.0) throw std::invalid_argument("mixing parameter must be nonnegative");
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw std::invalid_argument("noise must lie in [0, 1]");
}

/// Fills a1/a2 from the two largest input coefficients and M from b1*b2
/// unless explicit values are given.
inline QuditConfig make_qudit_config(int d, std::vector<double> schmidt_b, double p,
                                     std::optional<double> m = std::nullopt,
                                     std::optional<std::pair<double, double>> a = std::nullopt) {
  QuditConfig c;
  c.d = d;
  c.schmidt_b = std::move(schmidt_b);
  c.p = p;
  const double b1 = c.schmidt_b.empty() ? 0.0 : c.schmidt_b[0];
  const double b2 = c.schmidt_b.size() > 1 ? c.schmidt_b[1] : 0.0;
  c.a1 = a ? a->first : b1;
  c.a2 = a ? a->second : b2;
  c.m = m ? *m : b1 * b2;
  validate(c);
  return c;
}

/// tau = 1/(1 + M d); equals the input corner-block gap of the construction.
inline double tau(const QuditConfig& c) {
  validate(c);
  return 1.0 / (1.0 + c.m * c.d);
}

namespace detail {
inline ComplexVector schmidt_input_vector(const QuditConfig& c) {
  // |phi>_AB (x) |0>_C with |phi> = sum_i b_i |i>_A |i>_B.
  const long d = c.d;
  ComplexVector v = ComplexVector::Zero(d * d * d);
  for (std::size_t i = 0; i < c.schmidt_b.size(); ++i)
    v(static_cast<long>(i) * d * d + static_cast<long>(i) * d + 0) = c.schmidt_b[i];
  return v;
}
}  // namespace detail

/// Member of the tripartite input family with an explicit pure-part weight:
/// weight * |phi><phi|_AB (x) |0><0|_C + (1 - weight) * I/D, with D the full
/// product dimension (the mixing term is normalized on the whole space so the
/// state has unit trace).
inline DensityMatrix qudit_family_state(const QuditConfig& c, double weight) {
  validate(c);
  if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("weight must lie in [0, 1]");
  const long dim = static_cast<long>(c.d) * c.d * c.d;
  const ComplexVector v = detail::schmidt_input_vector(c);
  ComplexMatrix m = weight * (v * v.adjoint());
  m += (1.0 - weight) / static_cast<double>(dim) * ComplexMatrix::Identity(dim, dim);
  return DensityMatrix(std::move(m), {c.d, c.d, c.d});
}

inline DensityMatrix qudit_input(const QuditConfig& c) { return qudit_family_state(c, tau(c)); }

/// Default joint action on A and C: the controlled shift |i>_A |c>_C ->
/// |i>_A |c + i mod d>_C, which maps |i, 0> to the orthonormal set |i, i>.
inline ComplexMatrix default_flag_unitary(int d) {
  if (d < 2) throw std::invalid_argument("qudit dimension must be at least 2");
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c) u(i * d + (c + i) % d, i * d + c) = 1.0;
  return u;
}

/// Completes d orthonormal target columns (the images of |i, 0>) to a full
/// unitary on A (x) C; remaining input basis vectors map into the orthogonal
/// complement of the targets.
inline ComplexMatrix flag_unitary_from_targets(const ComplexMatrix& targets, int d) {
  if (targets.rows() != static_cast<long>(d) * d || targets.cols() != d)
    throw std::invalid_argument("need d orthonormal target columns of length d^2");
  const ComplexMatrix gram = targets.adjoint() * targets;
  if ((gram - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("target columns must be orthonormal");
  Eigen::HouseholderQR<ComplexMatrix> qr(targets);
  const ComplexMatrix q = qr.householderQ();
  ComplexMatrix u = ComplexMatrix::Zero(d * d, d * d);
  // Input index (i, c): c = 0 goes to the target, the rest to the complement.
  long comp = d;
  for (int i = 0; i < d; ++i) u.col(i * d) = targets.col(i);
  for (int i = 0; i < d; ++i)
    for (int c = 1; c < d; ++c) u.col(i * d + c) = q.col(comp++);
  return u;
}

/// Channel action in the modeled form: the pure part is carried through the
/// joint unitary on A and C while its weight shrinks from tau to
/// (1 - p) * tau; the isotropic remainder is untouched. Conjugating back with
/// the same unitary lands on the input family at the damped weight.
inline DensityMatrix qudit_evolve(const QuditConfig& c, const ComplexMatrix& u_ac) {
  validate(c);
  const long d2 = static_cast<long>(c.d) * c.d;
  if (u_ac.rows() != d2 || u_ac.cols() != d2)
    throw std::invalid_argument("joint unitary must act on A (x) C");
  if ((u_ac.adjoint() * u_ac - ComplexMatrix::Identity(d2, d2)).cwiseAbs().maxCoeff() >
      tol::unitarity)
    throw std::invalid_argument("joint operator is not unitary");
  const std::vector<int> dims{c.d, c.d, c.d};
  const ComplexMatrix w = embed_operator(u_ac, dims, {0, 2});
  const ComplexVector psi = w * detail::schmidt_input_vector(c);
  const double gt = (1.0 - c.p) * tau(c);
  const long dim = static_cast<long>(c.d) * d2;
  ComplexMatrix m = gt * (psi * psi.adjoint());
  m += (1.0 - gt) / static_cast<double>(dim) * ComplexMatrix::Identity(dim, dim);
  return DensityMatrix(std::move(m), dims);
}

inline DensityMatrix qudit_evolve(const QuditConfig& c) {
  return qudit_evolve(c, default_flag_unitary(c.d));
}

inline double qudit_threshold(double a1, double a2, int d) {
  if (a1 < 0.0 || a2 < 0.0 || d < 2) throw std::invalid_argument("invalid threshold arguments");
  return 1.0 / (1.0 + a1 * a2 * d);
}

/// Strict threshold verdict: entangled iff tau*gamma > 1/(1 + a1 a2 d).
/// Boundary equality is not entangled.
inline bool qudit_entangled(double tau_gamma, double a1, double a2, int d) {
  if (tau_gamma < 0.0) throw std::invalid_argument("tau*gamma must be nonnegative");
  return tau_gamma > qudit_threshold(a1, a2, d);
}

/// Two-qudit family mixing the Schmidt-correlated pure state sum_i a_i |ii>
/// with the maximally mixed state on the orthogonal complement of the
/// correlated subspace. For d = 2 its PPT threshold sits exactly at
/// 1/(1 + a1 a2 d), which makes it the conclusive cross-check family for the
/// threshold verdict.
inline DensityMatrix correlated_isotropic_state(double weight, std::span<const double> a, int d) {
  if (d < 2) throw std::invalid_argument("qudit dimension must be at least 2");
  if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("weight must lie in [0, 1]");
  if (a.empty() || a.size() > static_cast<std::size_t>(d))
    throw std::invalid_argument("need between 1 and d Schmidt coefficients");
  double norm2 = 0.0;
  for (double x : a) {
    if (x < 0.0) throw std::invalid_argument("Schmidt coefficients must be nonnegative");
    norm2 += x * x;
  }
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw std::invalid_argument("Schmidt coefficients must have unit sum of squares");

  const long dim = static_cast<long>(d) * d;
  ComplexVector v = ComplexVector::Zero(dim);
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<long>(i) * d + static_cast<long>(i)) = a[i];
  ComplexMatrix complement = ComplexMatrix::Identity(dim, dim);
  for (int i = 0; i < d; ++i) complement(i * d + i, i * d + i) = 0.0;
  ComplexMatrix m = weight * (v * v.adjoint());
  m += (1.0 - weight) / static_cast<double>(dim - d) * complement;
  return DensityMatrix(std::move(m), {d, d});
}

}  // namespace corrconv
