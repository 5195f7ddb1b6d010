#pragma once

#include <random>

#include <corrconv/corrconv.hpp>

namespace testsupport {

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x1234abcdULL);
  return engine;
}

inline corrconv::ComplexMatrix random_complex(int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  corrconv::ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = corrconv::Complex(gauss(rng()), gauss(rng()));
  return m;
}

inline corrconv::ComplexMatrix random_hermitian(int n) {
  const corrconv::ComplexMatrix g = random_complex(n);
  return 0.5 * (g + g.adjoint());
}

inline corrconv::ComplexMatrix random_unitary(int n) {
  Eigen::HouseholderQR<corrconv::ComplexMatrix> qr(random_complex(n));
  return corrconv::ComplexMatrix(qr.householderQ());
}

inline corrconv::DensityMatrix random_density(const std::vector<int>& dims) {
  long d = 1;
  for (int x : dims) d *= x;
  const corrconv::ComplexMatrix g = random_complex(static_cast<int>(d));
  corrconv::ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return corrconv::DensityMatrix(std::move(m), dims);
}

inline corrconv::DensityMatrix bell_phi_plus() {
  corrconv::ComplexVector v = corrconv::ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return corrconv::pure_state(v, {2, 2});
}

inline double max_abs_diff(const corrconv::ComplexMatrix& a, const corrconv::ComplexMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline corrconv::ComplexMatrix pauli(char axis) {
  corrconv::ComplexMatrix m = corrconv::ComplexMatrix::Zero(2, 2);
  switch (axis) {
    case 'x': m(0, 1) = m(1, 0) = 1.0; break;
    case 'y': m(0, 1) = corrconv::Complex(0, -1); m(1, 0) = corrconv::Complex(0, 1); break;
    case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    default: throw std::invalid_argument("unknown axis");
  }
  return m;
}

}  // namespace testsupport
