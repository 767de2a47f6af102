#pragma once

#include "ptfloquet/superoperators.hpp"
#include "ptfloquet/types.hpp"

namespace ptfloquet {

/// Matrix exponential by scaling and squaring with diagonal Pade approximants
/// of degree 3..13 (Higham 2005 thresholds, 1-norm).
[[nodiscard]] CMatrix expm(const CMatrix& a);

/// exp(coef * generator) for a sparse generator. Diagonal generators are
/// exponentiated entrywise; nilpotent ones by their terminating Taylor series;
/// anything else goes through expm().
[[nodiscard]] CMatrix exp_generator(Complex coef, const SparseCMatrix& generator);
[[nodiscard]] SparseCMatrix exp_generator_sparse(Complex coef, const SparseCMatrix& generator);

}  // namespace ptfloquet
