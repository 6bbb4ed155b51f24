#pragma once

// Central finite differences with Richardson extrapolation.  The Taylor
// jet machinery is the primary way derivatives are computed; this engine
// serves models without a closed-form exponential map and acts as an
// independent cross-check.

#include <functional>

#include "wue/fields.hpp"

namespace wue {

struct FiniteDifferenceOptions {
  /// Step used for first derivatives; order-k derivatives use step * k.
  double step = 1e-2;
  /// Richardson levels (0 = plain central difference).
  int levels = 2;
};

using ComplexFunction = std::function<Complex(const Point&)>;

/// Symmetric tensor of all order-k partial derivatives of f at q.
Tensor<Complex> fd_derivative_tensor(const ComplexFunction& f, const Point& q, int k,
                                     const FiniteDifferenceOptions& options = {});

/// One mixed partial derivative, given as exponents per coordinate.
Complex fd_partial(const ComplexFunction& f, const Point& q, std::span<const int> exponents,
                   const FiniteDifferenceOptions& options = {});

}  // namespace wue
