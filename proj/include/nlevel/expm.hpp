#pragma once

#include "nlevel/types.hpp"

namespace nlevel {

/// Scaling-and-squaring matrix exponential: degree-12 Taylor polynomial on
/// A / 2^s with |A / 2^s|_1 <= 0.5, then s squarings.
/// Throws InvalidInput for non-finite entries and NumericError when
/// |A|_1 > 1e6.
ComplexMatrix reference_expm(const ComplexMatrix& a);

}  // namespace nlevel
