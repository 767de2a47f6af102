#include <doctest.h>

#include <random>

#include "ptfloquet/fock_basis.hpp"
#include "reference.hpp"

using namespace ptfloquet;

TEST_CASE("basis dimension and ordering") {
  CHECK(build_basis(0).dim() == 1);
  CHECK(build_basis(3).dim() == 10);
  for (int n = 0; n <= 10; ++n) CHECK(TwoModeBasis(n).dim() == (n + 1) * (n + 2) / 2);

  const TwoModeBasis b1(1);
  REQUIRE(b1.dim() == 3);
  CHECK(b1.state(0) == FockState{0, 0});
  CHECK(b1.state(1) == FockState{1, 0});
  CHECK(b1.state(2) == FockState{0, 1});

  const TwoModeBasis b(6);
  for (int i = 0; i < b.dim(); ++i) CHECK(b.index(b.state(i)) == i);
  for (int i = 1; i < b.dim(); ++i) {
    const auto p = b.state(i - 1);
    const auto s = b.state(i);
    CHECK((p.total() < s.total() || (p.total() == s.total() && p.h < s.h)));
  }
  CHECK(TwoModeBasis::sector_begin(3) == 6);
}

TEST_CASE("basis rejects bad input") {
  CHECK_THROWS_AS(TwoModeBasis(-1), InputError);
  const TwoModeBasis b(2);
  CHECK_THROWS_AS((void)b.index(2, 1), InputError);
  CHECK_THROWS_AS((void)b.index(-1, 0), InputError);
  CHECK_FALSE(b.contains({3, 0}));
}

TEST_CASE("annihilation operators match explicit ladder factors") {
  const TwoModeBasis b(4);
  for (int mode : {1, 2}) CHECK((b.annihilation(mode) - testing::ladder(b, mode)).norm() == 0.0);
  CHECK_THROWS_AS((void)b.annihilation(3), InputError);
}

TEST_CASE("vectorization round trip and linearity") {
  const TwoModeBasis b(3);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    const CMatrix x = testing::random_density(b.dim(), rng);
    const DensityMatrix rho(b, x);
    CHECK((devectorize(vectorize(rho)).elements() - x).norm() == 0.0);
    const CMatrix y = testing::random_density(b.dim(), rng);
    const CVector sum = vectorize(DensityMatrix(b, x + y)).data();
    CHECK((sum - vectorize(DensityMatrix(b, x)).data() - vectorize(DensityMatrix(b, y)).data()).norm() <
          1e-14);
  }
  const CVector vac = vectorize(fock_state(b, 0, 0)).data();
  CHECK(vac[0] == Complex(1.0));
  CHECK(vac.norm() == doctest::Approx(1.0));

  CHECK(liouville_index(3, 1, 2) == 7u);
  CHECK_THROWS_AS((void)devectorize(b, CVector::Zero(99)), InputError);
  CHECK_THROWS_AS(DensityMatrix(b, CMatrix::Zero(4, 4)), InputError);
}

TEST_CASE("occupations of reference states") {
  const TwoModeBasis b(3);
  CHECK(occupation(fock_state(b, 0, 3), 3, 3) == doctest::Approx(1.0));

  const DensityMatrix psi = superposition_state(b, 3);
  double total = 0.0;
  for (int n = 0; n <= 3; ++n) {
    for (int h = 0; h <= n; ++h) {
      const double p = occupation(psi, n, h);
      total += p;
      if (n == 3 && (h == 0 || h == 3)) {
        CHECK(p == doctest::Approx(0.5).epsilon(1e-15));
      } else {
        CHECK(p == 0.0);
      }
    }
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(psi.purity() == doctest::Approx(1.0));
  CHECK(std::abs(psi(b.index(3, 0), b.index(0, 3)) - Complex(0.5)) < 1e-15);
  CHECK(psi.hermiticity_defect() == 0.0);
  CHECK(psi.min_eigenvalue() > -1e-12);

  const DensityMatrix one = superposition_state(b, 1);
  CHECK(one.trace() == doctest::Approx(1.0));
  CHECK(one.purity() == doctest::Approx(1.0));
  CHECK(one.mean_photon_number() == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)superposition_state(b, 4), InputError);
  CHECK_THROWS_AS((void)superposition_state(b, 0), InputError);
  CHECK_THROWS_AS((void)occupation(psi, 2, 3), InputError);
  CHECK_THROWS_AS((void)occupation(psi, 4, 0), InputError);
}

TEST_CASE("occupation rejects complex diagonal") {
  const TwoModeBasis b(1);
  CMatrix x = CMatrix::Identity(3, 3) / 3.0;
  x(1, 1) += Complex(0.0, 1e-6);
  CHECK_THROWS_AS((void)occupation(DensityMatrix(b, x), 1, 0), NumericalError);
}

TEST_CASE("vectorized identity is the trace functional") {
  const TwoModeBasis b(2);
  std::mt19937_64 rng(3);
  const CMatrix x = testing::random_density(b.dim(), rng);
  const Complex tr = vectorized_identity(b).dot(vectorize(DensityMatrix(b, x)).data());
  CHECK(std::abs(tr - Complex(1.0)) < 1e-14);
}
