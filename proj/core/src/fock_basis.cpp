#include "ptfloquet/fock_basis.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace ptfloquet {

TwoModeBasis::TwoModeBasis(int n_max) : n_max_(n_max) {
  if (n_max < 0) {
    throw InputError("n_max must be non-negative, got " + std::to_string(n_max));
  }
  states_.reserve(static_cast<std::size_t>(dimension_for(n_max)));
  for (int n = 0; n <= n_max; ++n) {
    for (int h = 0; h <= n; ++h) {
      states_.push_back(FockState{n - h, h});
    }
  }
}

FockState TwoModeBasis::state(int i) const {
  if (i < 0 || i >= dim()) {
    throw InputError("basis index " + std::to_string(i) + " out of range");
  }
  return states_[static_cast<std::size_t>(i)];
}

bool TwoModeBasis::contains(FockState s) const {
  return s.m >= 0 && s.h >= 0 && s.total() <= n_max_;
}

int TwoModeBasis::index(FockState s) const {
  if (!contains(s)) {
    throw InputError("state |" + std::to_string(s.m) + "," + std::to_string(s.h) +
                     "> is outside the basis with n_max=" + std::to_string(n_max_));
  }
  return sector_begin(s.total()) + s.h;
}

CMatrix TwoModeBasis::annihilation(int mode) const {
  if (mode != 1 && mode != 2) {
    throw InputError("mode must be 1 or 2");
  }
  CMatrix a = CMatrix::Zero(dim(), dim());
  for (int col = 0; col < dim(); ++col) {
    const FockState s = states_[static_cast<std::size_t>(col)];
    const int occ = mode == 1 ? s.m : s.h;
    if (occ == 0) continue;
    const FockState lowered = mode == 1 ? FockState{s.m - 1, s.h} : FockState{s.m, s.h - 1};
    a(index(lowered), col) = std::sqrt(static_cast<double>(occ));
  }
  return a;
}

CMatrix TwoModeBasis::number(int mode) const {
  const CMatrix a = annihilation(mode);
  return a.adjoint() * a;
}

TwoModeBasis build_basis(int n_max) { return TwoModeBasis(n_max); }

DensityMatrix::DensityMatrix(TwoModeBasis basis, CMatrix elements)
    : basis_(std::move(basis)), elements_(std::move(elements)) {
  if (elements_.rows() != basis_.dim() || elements_.cols() != basis_.dim()) {
    throw InputError("density matrix shape " + std::to_string(elements_.rows()) + "x" +
                     std::to_string(elements_.cols()) + " inconsistent with basis dimension " +
                     std::to_string(basis_.dim()));
  }
}

DensityMatrix DensityMatrix::pure(TwoModeBasis basis, const CVector& amplitudes) {
  if (amplitudes.size() != basis.dim()) {
    throw InputError("amplitude vector length inconsistent with basis dimension");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) {
    throw InputError("amplitude vector must be non-zero");
  }
  const CVector psi = amplitudes / norm;
  return DensityMatrix(std::move(basis), psi * psi.adjoint());
}

double DensityMatrix::trace() const { return elements_.trace().real(); }

double DensityMatrix::purity() const { return (elements_ * elements_).trace().real(); }

double DensityMatrix::hermiticity_defect() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const CMatrix herm = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::mean_photon_number() const {
  double total = 0.0;
  for (int i = 0; i < basis_.dim(); ++i) {
    total += basis_.state(i).total() * elements_(i, i).real();
  }
  return total;
}

LiouvilleVector::LiouvilleVector(TwoModeBasis basis, CVector data)
    : basis_(std::move(basis)), data_(std::move(data)) {
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  if (data_.size() != d * d) {
    throw InputError("Liouville vector length " + std::to_string(data_.size()) +
                     " inconsistent with basis dimension " + std::to_string(d));
  }
}

LiouvilleVector vectorize(const DensityMatrix& rho) {
  const CMatrix& e = rho.elements();
  // Eigen storage is column-major, so the reshaped view is the column stacking.
  return LiouvilleVector(rho.basis(), Eigen::Map<const CVector>(e.data(), e.size()));
}

DensityMatrix devectorize(const TwoModeBasis& basis, const CVector& data) {
  const auto d = static_cast<Eigen::Index>(basis.dim());
  if (data.size() != d * d) {
    throw InputError("cannot devectorize: length " + std::to_string(data.size()) +
                     " does not match basis dimension " + std::to_string(d));
  }
  return DensityMatrix(basis, Eigen::Map<const CMatrix>(data.data(), d, d));
}

DensityMatrix devectorize(const LiouvilleVector& v) { return devectorize(v.basis(), v.data()); }

double occupation(const DensityMatrix& rho, int n, int h) {
  if (h < 0 || n < h || n > rho.basis().n_max()) {
    throw InputError("occupation P(" + std::to_string(n) + "," + std::to_string(h) +
                     ") requires 0 <= h <= n <= n_max=" + std::to_string(rho.basis().n_max()));
  }
  const int i = rho.basis().index(n - h, h);
  const Complex p = rho(i, i);
  if (std::abs(p.imag()) > 1e-12) {
    throw NumericalError("diagonal element has imaginary part " + std::to_string(p.imag()));
  }
  return p.real();
}

DensityMatrix superposition_state(const TwoModeBasis& basis, int n) {
  if (n < 1 || n > basis.n_max()) {
    throw InputError("superposition photon number " + std::to_string(n) +
                     " must lie in [1, n_max=" + std::to_string(basis.n_max()) + "]");
  }
  CVector psi = CVector::Zero(basis.dim());
  psi(basis.index(0, n)) = 1.0 / std::sqrt(2.0);
  psi(basis.index(n, 0)) = 1.0 / std::sqrt(2.0);
  return DensityMatrix::pure(basis, psi);
}

DensityMatrix fock_state(const TwoModeBasis& basis, int m, int h) {
  CVector psi = CVector::Zero(basis.dim());
  psi(basis.index(m, h)) = 1.0;
  return DensityMatrix::pure(basis, psi);
}

CVector vectorized_identity(const TwoModeBasis& basis) {
  const CMatrix id = CMatrix::Identity(basis.dim(), basis.dim());
  return Eigen::Map<const CVector>(id.data(), id.size());
}

}  // namespace ptfloquet
