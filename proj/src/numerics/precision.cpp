#include "intmult/numerics/precision.hpp"

#include <cmath>

#include "intmult/errors.hpp"

namespace intmult {

void PrecisionContext::validate() const {
  if (mantissa_bits < 53) throw InvalidArgument("mantissa_bits must be >= 53");
  if (convergence_tol < 0.0) throw InvalidArgument("convergence_tol must be positive");
  if (convergence_tol > 0.0 &&
      convergence_tol < std::ldexp(1.0, static_cast<int>(1 - mantissa_bits))) {
    throw InvalidArgument("convergence_tol below 2^(1-mantissa_bits)");
  }
}

Real PrecisionContext::tol() const {
  PrecisionScope scope(mantissa_bits);
  if (convergence_tol > 0.0) return Real(convergence_tol);
  return exp2i(-mantissa_bits / 2);
}

Real PrecisionContext::separation() const {
  PrecisionScope scope(mantissa_bits);
  return exp2i(-mantissa_bits / 4);
}

}  // namespace intmult
