#pragma once

#include <cstddef>
#include <vector>

#include "qid/numeric.hpp"

namespace qid {

/// F(z) = p + f-hat(z), with f sampled on x0 + k*dx and read as a step
/// function (each sample owns a cell of width dx).
struct WienerElement {
  cplx p{};
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<cplx> f;

  cplx eval(double z) const;
};

/// |p| + sum |f_k| dx.
double wiener_norm(const WienerElement& e);

/// Pointwise product of transforms: constant p_a p_b, function
/// p_a f_b + p_b f_a + f_a * f_b. Both factors must share dx.
WienerElement product(const WienerElement& a, const WienerElement& b);

/// Unit of the algebra (p = 1, f = 0) on the given step.
WienerElement wiener_unit(double dx = 1.0);

}  // namespace qid
