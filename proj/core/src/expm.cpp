#include "ptfloquet/expm.hpp"

#include <array>
#include <cmath>

namespace ptfloquet {

namespace {

double one_norm(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Returns (U, V) with exp(A) ~ (V - U)^{-1} (V + U).
template <std::size_t N>
std::pair<CMatrix, CMatrix> pade(const CMatrix& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix odd = b[1] * id;
  CMatrix even = b[0] * id;
  CMatrix power = id;
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    odd += b[k + 1] * power;
    even += b[k] * power;
  }
  return {a * odd, even};
}

std::pair<CMatrix, CMatrix> pade13(const CMatrix& a) {
  constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * id;
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                    b[2] * a2 + b[0] * id;
  return {a * u_inner, v};
}

CMatrix solve_pade(const std::pair<CMatrix, CMatrix>& uv) {
  const auto& [u, v] = uv;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw InputError("expm needs a square matrix");
  if (!a.allFinite()) throw NumericalError("expm of a matrix with non-finite entries");
  if (a.rows() == 0) return a;

  const double norm = one_norm(a);
  if (norm <= 1.495585217958292e-2) {
    return solve_pade(pade(a, std::array<double, 4>{120.0, 60.0, 12.0, 1.0}));
  }
  if (norm <= 2.539398330063230e-1) {
    return solve_pade(pade(a, std::array<double, 6>{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0}));
  }
  if (norm <= 9.504178996162932e-1) {
    return solve_pade(pade(a, std::array<double, 8>{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                    25200.0, 1512.0, 56.0, 1.0}));
  }
  if (norm <= 2.097847961257068) {
    return solve_pade(pade(a, std::array<double, 10>{17643225600.0, 8821612800.0, 2075673600.0,
                                                     302702400.0, 30270240.0, 2162160.0, 110880.0,
                                                     3960.0, 90.0, 1.0}));
  }
  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
  CMatrix result = solve_pade(pade13(a / std::ldexp(1.0, squarings)));
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

SparseCMatrix exp_generator_sparse(Complex coef, const SparseCMatrix& generator) {
  const auto n = generator.rows();
  bool diagonal = true;
  for (Eigen::Index k = 0; k < generator.outerSize() && diagonal; ++k) {
    for (SparseCMatrix::InnerIterator it(generator, k); it; ++it) {
      if (it.row() != it.col() && it.value() != Complex(0.0)) {
        diagonal = false;
        break;
      }
    }
  }
  if (diagonal) {
    const CVector d = (CVector(generator.diagonal()) * coef).array().exp().matrix();
    SparseCMatrix out(n, n);
    out.reserve(Eigen::VectorXi::Constant(n, 1));
    for (Eigen::Index i = 0; i < n; ++i) out.insert(i, i) = d[i];
    out.makeCompressed();
    return out;
  }

  // Ladder-type generators strictly lower a grading, so their powers vanish
  // structurally after at most n steps.
  const SparseCMatrix scaled = generator * coef;
  SparseCMatrix result(n, n);
  result.setIdentity();
  SparseCMatrix term = result;
  for (Eigen::Index k = 1; k <= n; ++k) {
    term = SparseCMatrix(term * scaled).pruned(Complex(0.0), 0.0) / static_cast<double>(k);
    if (term.nonZeros() == 0) return result;
    result += term;
  }
  return expm(CMatrix(scaled)).sparseView();
}

CMatrix exp_generator(Complex coef, const SparseCMatrix& generator) {
  return CMatrix(exp_generator_sparse(coef, generator));
}

}  // namespace ptfloquet
