#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

#include "ptfloquet/fock_basis.hpp"
#include "ptfloquet/loss_profile.hpp"
#include "ptfloquet/types.hpp"

namespace ptfloquet {

using SparseCMatrix = Eigen::SparseMatrix<Complex>;

/// Coupler kappa (a1^dag a2 + a2^dag a1) with loss gamma(z) on waveguide 1.
struct CouplerParams {
  double kappa = 1.0;
  LossProfile loss = LossProfile::constant(0.0, 1.0);

  /// Throws InputError unless kappa > 0.
  void validate() const;
};

/// Linear map on Liouville space, stored dense below kDenseThreshold rows and
/// sparse above.
class Superoperator {
 public:
  static constexpr Eigen::Index kDenseThreshold = 400;

  Superoperator(TwoModeBasis basis, SparseCMatrix matrix, std::string label);
  Superoperator(TwoModeBasis basis, CMatrix matrix, std::string label);

  [[nodiscard]] const TwoModeBasis& basis() const { return basis_; }
  [[nodiscard]] const std::string& label() const { return label_; }
  [[nodiscard]] Eigen::Index dim() const { return dim_; }
  [[nodiscard]] bool is_sparse() const { return use_sparse_; }

  [[nodiscard]] CMatrix dense() const;
  [[nodiscard]] SparseCMatrix sparse() const;
  [[nodiscard]] Complex element(Eigen::Index row, Eigen::Index col) const;

  [[nodiscard]] CVector apply(const CVector& v) const;
  [[nodiscard]] LiouvilleVector apply(const LiouvilleVector& v) const;

 private:
  TwoModeBasis basis_;
  Eigen::Index dim_;
  bool use_sparse_;
  CMatrix dense_;
  SparseCMatrix sparse_;
  std::string label_;
};

/// Bilinear generator by label. Accepted labels:
///   "Li+Lj-" : A -> a_i^dag a_j A
///   "Ri+Rj-" : A -> A a_j^dag a_i
///   "Li-Rj-" : A -> a_i A a_j^dag
///   "ML" = L1+L1- + L2+L2-,  "MR" = R1+R1- + R2+R2-
///   "K0L" = L1+L1- - L2+L2-, "K0R" = R1+R1- - R2+R2-
/// with i, j in {1, 2}. The matrix is assembled from the action on basis dyads
/// |s><t|; any image outside the truncated space is a logic error.
[[nodiscard]] SparseCMatrix generator_matrix(std::string_view label, const TwoModeBasis& basis);
[[nodiscard]] Superoperator generator(std::string_view label, const TwoModeBasis& basis);

/// Liouvillian split as L(gamma) = coherent + gamma * dissipator.
struct LiouvillianParts {
  SparseCMatrix coherent;
  SparseCMatrix dissipator;

  [[nodiscard]] SparseCMatrix at(double gamma) const { return coherent + gamma * dissipator; }
};

[[nodiscard]] LiouvillianParts liouvillian_parts(double kappa, const TwoModeBasis& basis);

/// -i kappa (L1+L2- + L2+L1- - R1+R2- - R2+R1-) + 2 gamma L1-R1- - gamma (R1+R1- + L1+L1-)
[[nodiscard]] Superoperator liouvillian(const CouplerParams& params, double gamma,
                                        const TwoModeBasis& basis);

/// Largest |entry| that maps a dyad into a sector with more photons on either
/// side. Zero (exactly) for every generator of the coupler dynamics.
[[nodiscard]] double sector_violation(const CMatrix& op, const TwoModeBasis& basis);

struct CommutatorCheck {
  std::string name;
  double residual;
};

struct CommutatorReport {
  std::vector<CommutatorCheck> checks;
  double max_residual = 0.0;
  double threshold = 1e-12;
  [[nodiscard]] bool passed() const { return max_residual <= threshold; }
};

/// Numerically verifies the Lie-algebra relations behind the product expansion,
/// restricted to dyads with at most n_max - 1 photons on each side. Requires n_max >= 2.
[[nodiscard]] CommutatorReport commutator_table(const TwoModeBasis& basis, double threshold = 1e-12);

}  // namespace ptfloquet
