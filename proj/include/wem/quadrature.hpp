#pragma once

// Adaptive Gauss-Kronrod quadrature over piecewise smooth integrands.

#include <complex>
#include <functional>
#include <vector>

namespace wem {

struct QuadratureResult {
  std::complex<double> value;
  double error = 0.0;  // accumulated a-posteriori estimate
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

/// Integrates across consecutive breakpoints; each piece must be smooth.
QuadratureResult integratePieces(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                 double relativeTolerance = 1e-13, unsigned maxDepth = 15);

/// Globally adaptive bisection stopping when the error estimate is below
/// max(absoluteTolerance, relativeTolerance * |value|); pieces are split at the breakpoints.
QuadratureResult integrateAdaptive(const ComplexIntegrand& f, const std::vector<double>& breakpoints,
                                   double absoluteTolerance, double relativeTolerance = 1e-13, int maxDepth = 20);

/// [a, b] split at every integer strictly inside it.
std::vector<double> integerBreakpoints(double a, double b);

/// Shorthand for integratePieces(f, integerBreakpoints(a, b)).
QuadratureResult integrateIntegerPieces(const ComplexIntegrand& f, double a, double b,
                                        double relativeTolerance = 1e-13);

}  // namespace wem
