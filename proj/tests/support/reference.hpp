#pragma once

// Test-only reference constructions, independent of the library's dyad-action
// generator assembly and of its integrators.

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ptfloquet/fock_basis.hpp"

namespace ptfloquet::testing {

/// Truncated ladder operator built from explicit sqrt factors on the ordered
/// basis, without TwoModeBasis::annihilation.
inline CMatrix ladder(const TwoModeBasis& basis, int mode) {
  const int d = basis.dim();
  CMatrix a = CMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const FockState s = basis.state(j);
    const int occ = mode == 1 ? s.m : s.h;
    if (occ == 0) continue;
    const FockState t = mode == 1 ? FockState{s.m - 1, s.h} : FockState{s.m, s.h - 1};
    a(basis.index(t), j) = std::sqrt(static_cast<double>(occ));
  }
  return a;
}

/// vec(A X B) = (B^T kron A) vec(X) for column-major stacking.
inline CMatrix left_right(const CMatrix& a, const CMatrix& b) {
  return Eigen::kroneckerProduct(CMatrix(b.transpose()), a);
}

inline CMatrix kron_liouvillian(const TwoModeBasis& basis, double kappa, double gamma) {
  const int d = basis.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix a1 = ladder(basis, 1);
  const CMatrix a2 = ladder(basis, 2);
  const CMatrix h = kappa * (a1.adjoint() * a2 + a2.adjoint() * a1);
  const CMatrix n1 = a1.adjoint() * a1;
  const Complex i(0.0, 1.0);
  return -i * (left_right(h, id) - left_right(id, h)) + 2.0 * gamma * left_right(a1, a1.adjoint()) -
         gamma * (left_right(n1, id) + left_right(id, n1));
}

inline CVector vec(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

/// Random density matrix: random mixture of random pure states.
inline CMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix x(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) x(r, c) = Complex(g(rng), g(rng));
  CMatrix rho = x * x.adjoint();
  return rho / rho.trace().real();
}

/// Classical RK4 with a fixed step, for small reference problems.
template <class Rhs>
CVector rk4(Rhs&& rhs, CVector y, double z0, double z1, int steps) {
  const double h = (z1 - z0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double z = z0 + k * h;
    const CVector k1 = rhs(z, y);
    const CVector k2 = rhs(z + h / 2, y + h / 2 * k1);
    const CVector k3 = rhs(z + h / 2, y + h / 2 * k2);
    const CVector k4 = rhs(z + h, y + h * k3);
    y += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace ptfloquet::testing
