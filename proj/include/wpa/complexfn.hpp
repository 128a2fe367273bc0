#pragma once

#include <complex>

namespace wpa {

using Complex = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) (A&S 7.1.3), accurate to
/// better than 1e-12 relative error for |z| <= 1e4 with Im z >= -20.
///
/// Evaluation is region-switched: Maclaurin series for |z| <= 0.5, a
/// pole-corrected midpoint/trapezoidal sum over exp(-t^2) samples for
/// moderate |z| (Hunter & Regan 1972; Al Azah & Chandler-Wilde 2017), and
/// the large-|z| asymptotic series for |z| >= 8, all in the closed upper
/// half-plane. The lower half-plane is reached through the reflection
/// w(-z) = 2 exp(-z^2) - w(z).
///
/// Throws invalid_input for non-finite z and overflow_error when the
/// reflection term 2 exp(-z^2) exceeds the representable range (deep in
/// the lower half-plane, Im(z)^2 - Re(z)^2 > ~709).
Complex faddeeva_w(Complex z);

/// Partial Maclaurin sum  sum_{n=0}^{n_terms-1} (iz)^n / Gamma(n/2 + 1).
/// Pure arithmetic; n_terms must be >= 1.
Complex faddeeva_w_series(Complex z, int n_terms);

/// dw/dz through the identity w'(z) = -2 z w(z) + 2i/sqrt(pi).
Complex faddeeva_w_derivative(Complex z);

/// dw/dz computed by differentiating the active branch representation
/// term by term, independent of the identity used by
/// faddeeva_w_derivative. Used to cross-check the derivative relation.
Complex faddeeva_w_derivative_direct(Complex z);

}  // namespace wpa
