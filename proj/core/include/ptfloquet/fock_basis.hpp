#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "ptfloquet/types.hpp"

namespace ptfloquet {

/// Occupation |m, h>: m photons in waveguide 1 (the lossy one), h in waveguide 2.
struct FockState {
  int m = 0;
  int h = 0;

  [[nodiscard]] constexpr int total() const { return m + h; }
  friend constexpr auto operator<=>(const FockState&, const FockState&) = default;
};

/// Two-mode Fock space truncated at total photon number n_max.
///
/// States are ordered by ascending total photon number n = m + h and by
/// ascending h inside a sector, so sector n occupies the contiguous index range
/// [n(n+1)/2, (n+1)(n+2)/2). The truncation is exact for every dynamics in this
/// library: the coupler Hamiltonian conserves n and the loss only lowers it.
class TwoModeBasis {
 public:
  explicit TwoModeBasis(int n_max);

  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] int dim() const { return static_cast<int>(states_.size()); }
  [[nodiscard]] const std::vector<FockState>& states() const { return states_; }
  [[nodiscard]] FockState state(int i) const;

  /// Throws InputError for states outside the truncated space.
  [[nodiscard]] int index(FockState s) const;
  [[nodiscard]] int index(int m, int h) const { return index(FockState{m, h}); }
  [[nodiscard]] bool contains(FockState s) const;

  /// First basis index of the n-photon sector.
  [[nodiscard]] static constexpr int sector_begin(int n) { return n * (n + 1) / 2; }
  [[nodiscard]] static constexpr int dimension_for(int n_max) {
    return (n_max + 1) * (n_max + 2) / 2;
  }

  /// Truncated annihilation operator a_mode (mode 1 or 2) as a dim x dim matrix.
  [[nodiscard]] CMatrix annihilation(int mode) const;
  [[nodiscard]] CMatrix number(int mode) const;

  friend bool operator==(const TwoModeBasis& a, const TwoModeBasis& b) {
    return a.n_max_ == b.n_max_;
  }

 private:
  int n_max_;
  std::vector<FockState> states_;
};

TwoModeBasis build_basis(int n_max);

/// Column-major position of the operator element (row, col) in Liouville space.
[[nodiscard]] constexpr std::size_t liouville_index(int dim, int row, int col) {
  return static_cast<std::size_t>(row) + static_cast<std::size_t>(dim) * static_cast<std::size_t>(col);
}

class DensityMatrix {
 public:
  DensityMatrix(TwoModeBasis basis, CMatrix elements);

  /// |psi><psi| for an amplitude vector on the basis (normalized on entry).
  static DensityMatrix pure(TwoModeBasis basis, const CVector& amplitudes);

  [[nodiscard]] const TwoModeBasis& basis() const { return basis_; }
  [[nodiscard]] const CMatrix& elements() const { return elements_; }
  [[nodiscard]] Complex operator()(int row, int col) const { return elements_(row, col); }

  [[nodiscard]] double trace() const;
  [[nodiscard]] double purity() const;
  /// max |rho - rho^dagger|
  [[nodiscard]] double hermiticity_defect() const;
  /// Smallest eigenvalue of the Hermitian part.
  [[nodiscard]] double min_eigenvalue() const;
  /// Expectation of the total photon number.
  [[nodiscard]] double mean_photon_number() const;

 private:
  TwoModeBasis basis_;
  CMatrix elements_;
};

/// |rho>> with column-major stacking: v[row + D*col] = rho(row, col).
class LiouvilleVector {
 public:
  LiouvilleVector(TwoModeBasis basis, CVector data);

  [[nodiscard]] const TwoModeBasis& basis() const { return basis_; }
  [[nodiscard]] const CVector& data() const { return data_; }

 private:
  TwoModeBasis basis_;
  CVector data_;
};

[[nodiscard]] LiouvilleVector vectorize(const DensityMatrix& rho);
[[nodiscard]] DensityMatrix devectorize(const LiouvilleVector& v);
[[nodiscard]] DensityMatrix devectorize(const TwoModeBasis& basis, const CVector& data);

/// P(n, h) = <n-h, h| rho |n-h, h>. Requires 0 <= h <= n <= n_max.
[[nodiscard]] double occupation(const DensityMatrix& rho, int n, int h);

/// Pure state (|0,n> + |n,0>)/sqrt(2), 1 <= n <= n_max.
[[nodiscard]] DensityMatrix superposition_state(const TwoModeBasis& basis, int n);

/// Pure Fock state |m, h>.
[[nodiscard]] DensityMatrix fock_state(const TwoModeBasis& basis, int m, int h);

/// Vectorized identity operator, the left null vector of every trace-preserving generator.
[[nodiscard]] CVector vectorized_identity(const TwoModeBasis& basis);

}  // namespace ptfloquet
