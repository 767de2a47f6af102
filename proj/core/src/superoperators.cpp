#include "ptfloquet/superoperators.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace ptfloquet {

namespace {

struct Ladder {
  int mode;     // 1 or 2
  bool raise;   // a^dag if true
};

// Ladder operator applied to a ket; nullopt when the result vanishes.
std::optional<std::pair<double, FockState>> apply_ladder(Ladder op, FockState s) {
  int& occ = op.mode == 1 ? s.m : s.h;
  if (op.raise) {
    const double c = std::sqrt(static_cast<double>(occ + 1));
    ++occ;
    return std::pair{c, s};
  }
  if (occ == 0) return std::nullopt;
  const double c = std::sqrt(static_cast<double>(occ));
  --occ;
  return std::pair{c, s};
}

// Applies ops right-to-left to a ket (ops[0] is the leftmost factor).
std::optional<std::pair<double, FockState>> apply_word(const std::vector<Ladder>& ops, FockState s) {
  double coef = 1.0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    auto r = apply_ladder(*it, s);
    if (!r) return std::nullopt;
    coef *= r->first;
    s = r->second;
  }
  return std::pair{coef, s};
}

// Superoperator A -> X A Y^dag with X = left word, Y = right word, both acting on kets.
// The right action A -> A Z for the generators in this file always has the form
// Z = Y^dag with Y a product of ladder operators, since <t| Y^dag = (Y|t>)^dag.
SparseCMatrix sandwich(const TwoModeBasis& basis, const std::vector<Ladder>& left,
                       const std::vector<Ladder>& right, std::string_view label) {
  const int d = basis.dim();
  const auto n = static_cast<Eigen::Index>(d) * d;
  std::vector<Eigen::Triplet<Complex>> triplets;
  for (int t = 0; t < d; ++t) {
    for (int s = 0; s < d; ++s) {
      const auto ket = apply_word(left, basis.state(s));
      if (!ket) continue;
      const auto bra = apply_word(right, basis.state(t));
      if (!bra) continue;
      if (!basis.contains(ket->second) || !basis.contains(bra->second)) {
        throw std::logic_error("generator " + std::string(label) +
                               " leaks out of the truncated Fock space");
      }
      const auto row = liouville_index(d, basis.index(ket->second), basis.index(bra->second));
      const auto col = liouville_index(d, s, t);
      triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col),
                            Complex(ket->first * bra->first, 0.0));
    }
  }
  SparseCMatrix m(n, n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

int parse_mode(char c, std::string_view label) {
  if (c == '1') return 1;
  if (c == '2') return 2;
  throw InputError("unknown superoperator label '" + std::string(label) + "'");
}

}  // namespace

void CouplerParams::validate() const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw InputError("coupling kappa must be positive, got " + std::to_string(kappa));
  }
}

Superoperator::Superoperator(TwoModeBasis basis, SparseCMatrix matrix, std::string label)
    : basis_(std::move(basis)), dim_(matrix.rows()), label_(std::move(label)) {
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  if (matrix.rows() != d * d || matrix.cols() != d * d) {
    throw InputError("superoperator shape inconsistent with basis dimension");
  }
  use_sparse_ = dim_ >= kDenseThreshold;
  if (use_sparse_) {
    sparse_ = std::move(matrix);
    sparse_.makeCompressed();
  } else {
    dense_ = CMatrix(matrix);
  }
}

Superoperator::Superoperator(TwoModeBasis basis, CMatrix matrix, std::string label)
    : basis_(std::move(basis)),
      dim_(matrix.rows()),
      use_sparse_(false),
      dense_(std::move(matrix)),
      label_(std::move(label)) {
  const auto d = static_cast<Eigen::Index>(basis_.dim());
  if (dense_.rows() != d * d || dense_.cols() != d * d) {
    throw InputError("superoperator shape inconsistent with basis dimension");
  }
}

CMatrix Superoperator::dense() const { return use_sparse_ ? CMatrix(sparse_) : dense_; }

SparseCMatrix Superoperator::sparse() const {
  return use_sparse_ ? sparse_ : SparseCMatrix(dense_.sparseView());
}

Complex Superoperator::element(Eigen::Index row, Eigen::Index col) const {
  return use_sparse_ ? sparse_.coeff(row, col) : dense_(row, col);
}

CVector Superoperator::apply(const CVector& v) const {
  if (v.size() != dim_) {
    throw InputError("vector length inconsistent with superoperator dimension");
  }
  if (use_sparse_) return sparse_ * v;
  return dense_ * v;
}

LiouvilleVector Superoperator::apply(const LiouvilleVector& v) const {
  if (!(v.basis() == basis_)) {
    throw InputError("Liouville vector and superoperator use different bases");
  }
  return LiouvilleVector(basis_, apply(v.data()));
}

SparseCMatrix generator_matrix(std::string_view label, const TwoModeBasis& basis) {
  if (label == "ML") return generator_matrix("L1+L1-", basis) + generator_matrix("L2+L2-", basis);
  if (label == "MR") return generator_matrix("R1+R1-", basis) + generator_matrix("R2+R2-", basis);
  if (label == "K0L") return generator_matrix("L1+L1-", basis) - generator_matrix("L2+L2-", basis);
  if (label == "K0R") return generator_matrix("R1+R1-", basis) - generator_matrix("R2+R2-", basis);

  if (label.size() != 6) throw InputError("unknown superoperator label '" + std::string(label) + "'");
  const char side1 = label[0];
  const char sign1 = label[2];
  const char side2 = label[3];
  const char sign2 = label[5];
  const int i = parse_mode(label[1], label);
  const int j = parse_mode(label[4], label);

  if (side1 == 'L' && side2 == 'L' && sign1 == '+' && sign2 == '-') {
    // a_i^dag a_j A
    return sandwich(basis, {Ladder{i, true}, Ladder{j, false}}, {}, label);
  }
  if (side1 == 'R' && side2 == 'R' && sign1 == '+' && sign2 == '-') {
    // A a_j^dag a_i = A (a_i^dag a_j)^dag
    return sandwich(basis, {}, {Ladder{i, true}, Ladder{j, false}}, label);
  }
  if (side1 == 'L' && side2 == 'R' && sign1 == '-' && sign2 == '-') {
    // a_i A a_j^dag
    return sandwich(basis, {Ladder{i, false}}, {Ladder{j, false}}, label);
  }
  throw InputError("unknown superoperator label '" + std::string(label) + "'");
}

Superoperator generator(std::string_view label, const TwoModeBasis& basis) {
  return Superoperator(basis, generator_matrix(label, basis), std::string(label));
}

LiouvillianParts liouvillian_parts(double kappa, const TwoModeBasis& basis) {
  const SparseCMatrix hopping = generator_matrix("L1+L2-", basis) + generator_matrix("L2+L1-", basis) -
                                generator_matrix("R1+R2-", basis) - generator_matrix("R2+R1-", basis);
  LiouvillianParts parts;
  parts.coherent = Complex(0.0, -kappa) * hopping;
  parts.dissipator = Complex(2.0, 0.0) * generator_matrix("L1-R1-", basis) -
                     generator_matrix("R1+R1-", basis) - generator_matrix("L1+L1-", basis);
  return parts;
}

Superoperator liouvillian(const CouplerParams& params, double gamma, const TwoModeBasis& basis) {
  params.validate();
  if (!(gamma >= 0.0)) throw InputError("loss rate must be non-negative");
  return Superoperator(basis, liouvillian_parts(params.kappa, basis).at(gamma), "L");
}

double sector_violation(const CMatrix& op, const TwoModeBasis& basis) {
  const int d = basis.dim();
  double worst = 0.0;
  for (Eigen::Index col = 0; col < op.cols(); ++col) {
    const int cs = basis.state(static_cast<int>(col % d)).total();
    const int ct = basis.state(static_cast<int>(col / d)).total();
    for (Eigen::Index row = 0; row < op.rows(); ++row) {
      const int rs = basis.state(static_cast<int>(row % d)).total();
      const int rt = basis.state(static_cast<int>(row / d)).total();
      if (rs > cs || rt > ct) worst = std::max(worst, std::abs(op(row, col)));
    }
  }
  return worst;
}

CommutatorReport commutator_table(const TwoModeBasis& basis, double threshold) {
  if (basis.n_max() < 2) {
    throw InputError("commutator table needs n_max >= 2");
  }
  const int d = basis.dim();
  const int interior = basis.n_max() - 1;
  std::vector<Eigen::Index> domain;
  for (int t = 0; t < d; ++t) {
    for (int s = 0; s < d; ++s) {
      if (basis.state(s).total() <= interior && basis.state(t).total() <= interior) {
        domain.push_back(static_cast<Eigen::Index>(liouville_index(d, s, t)));
      }
    }
  }

  const auto g = [&](std::string_view label) { return CMatrix(generator_matrix(label, basis)); };
  const auto residual = [&](const CMatrix& m) {
    double worst = 0.0;
    for (Eigen::Index col : domain) worst = std::max(worst, m.col(col).cwiseAbs().maxCoeff());
    return worst;
  };
  const auto comm = [](const CMatrix& a, const CMatrix& b) -> CMatrix { return a * b - b * a; };

  CommutatorReport report;
  report.threshold = threshold;
  const auto add = [&](std::string name, const CMatrix& m) {
    const double r = residual(m);
    report.max_residual = std::max(report.max_residual, r);
    report.checks.push_back({std::move(name), r});
  };

  for (const char side : {'L', 'R'}) {
    const std::string s(1, side);
    const CMatrix kp = g(s + "1+" + s + "2-");
    const CMatrix km = g(s + "2+" + s + "1-");
    const CMatrix k0 = g("K0" + s);
    const CMatrix total = g("M" + s);
    add("[K0,K+]-2K+ (" + s + ")", comm(k0, kp) - 2.0 * kp);
    add("[K0,K-]+2K- (" + s + ")", comm(k0, km) + 2.0 * km);
    add("[K+,K-]-K0 (" + s + ")", comm(kp, km) - k0);
    add("[M,K+] (" + s + ")", comm(total, kp));
    add("[M,K-] (" + s + ")", comm(total, km));
    add("[M,K0] (" + s + ")", comm(total, k0));
  }

  const std::vector<std::string> left = {"L1+L1-", "L1+L2-", "L2+L1-", "L2+L2-"};
  const std::vector<std::string> right = {"R1+R1-", "R1+R2-", "R2+R1-", "R2+R2-"};
  for (const auto& l : left) {
    for (const auto& r : right) add("[" + l + "," + r + "]", comm(g(l), g(r)));
  }

  const std::vector<std::string> jumps = {"L1-R1-", "L2-R2-", "L2-R1-", "L1-R2-"};
  for (std::size_t a = 0; a < jumps.size(); ++a) {
    for (std::size_t b = a + 1; b < jumps.size(); ++b) {
      add("[" + jumps[a] + "," + jumps[b] + "]", comm(g(jumps[a]), g(jumps[b])));
    }
  }
  const CMatrix ml = g("ML");
  const CMatrix mr = g("MR");
  for (const auto& j : jumps) {
    const CMatrix jm = g(j);
    add("[ML," + j + "]+" + j, comm(ml, jm) + jm);
    add("[MR," + j + "]+" + j, comm(mr, jm) + jm);
  }
  return report;
}

}  // namespace ptfloquet
