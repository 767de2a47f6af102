#include <doctest.h>

#include <random>

#include "ptfloquet/expm.hpp"
#include "reference.hpp"

using namespace ptfloquet;

TEST_CASE("Pade expm matches Eigen's matrix exponential across norms") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  for (double scale : {1e-6, 0.05, 0.8, 3.0, 40.0}) {
    for (int n : {1, 4, 12}) {
      CMatrix a(n, n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) a(r, c) = scale * Complex(g(rng), g(rng)) / std::sqrt(double(n));
      const CMatrix ref = a.exp();
      CHECK((expm(a) - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
    }
  }
  CHECK((expm(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("generator exponentials by structure") {
  const TwoModeBasis b(3);
  const Complex c(0.3, -1.1);
  for (const char* label : {"K0L", "MR", "L1+L2-", "R2+R1-", "L1-R1-", "L2-R1-"}) {
    const SparseCMatrix gen = generator_matrix(label, b);
    const CMatrix ref = (c * CMatrix(gen)).exp();
    CHECK((exp_generator(c, gen) - ref).norm() <= 1e-12 * ref.norm());
    CHECK((CMatrix(exp_generator_sparse(c, gen)) - ref).norm() <= 1e-12 * ref.norm());
  }
  // neither diagonal nor nilpotent: falls back to the dense path
  const SparseCMatrix mixed = generator_matrix("L1+L2-", b) + generator_matrix("L2+L1-", b);
  const CMatrix ref = (c * CMatrix(mixed)).exp();
  CHECK((exp_generator(c, mixed) - ref).norm() <= 1e-12 * ref.norm());
}
