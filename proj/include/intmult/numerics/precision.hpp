#pragma once

#include "intmult/numerics/real.hpp"

namespace intmult {

// Numerical precision dial shared by every floating computation.
struct PrecisionContext {
  long mantissa_bits = 53;
  double convergence_tol = 0.0;  // 0 selects 2^(-mantissa_bits/2)

  static PrecisionContext with_bits(long bits) { return PrecisionContext{bits, 0.0}; }

  // Throws InvalidArgument when the invariants do not hold.
  void validate() const;

  Real tol() const;
  // Cluster / minimal-period separation threshold 2^(-bits/4).
  Real separation() const;
  // Same context at doubled mantissa, convergence tolerance rederived.
  PrecisionContext doubled() const { return with_bits(2 * mantissa_bits); }
};

}  // namespace intmult
