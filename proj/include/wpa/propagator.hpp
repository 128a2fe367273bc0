#pragma once

#include <array>
#include <complex>

#include "wpa/quadrature.hpp"
#include "wpa/states.hpp"
#include "wpa/units.hpp"

namespace wpa {

/// Free-particle kernel <x|e^{-iHt/hbar}|x'> = (m/(iht))^{1/2} e^{im(x-x')^2/(2 hbar t)}
/// with the principal square root. Throws domain_error for t <= 0 (the kernel
/// is distributional at t = 0).
Complex propagator_kernel(double x, double x_prime, double t, const UnitSystem& units);

/// psi(x,t) = int dp <x|p> e^{-i p^2 t/(2 m hbar)} <p|psi(0)>, <x|p> = h^{-1/2} e^{i p x/hbar}.
///
/// For t != 0 the half-line integral is evaluated on the rotated path
/// p = e^{-i sgn(t) pi/4} s, where the kernel becomes e^{-s^2 |t|/(2 m hbar)},
/// whenever the amplitude's growth along the ray keeps the peak integrand
/// amplification small; otherwise it falls back to adaptive real-axis
/// quadrature subdivided at the stationary-phase scale sqrt(2 pi m hbar/|t|)
/// and truncated at cfg.momentum_cutoff_sigmas. Valid for either sign of t.
Complex evolve_quadrature(const WavePacket& state, double x, double t, const UnitSystem& units,
                          const QuadratureConfig& cfg);

/// Exact psi(x,t) through Faddeeva-function closed forms. Supported variants:
/// TruncatedGaussian, Gaussian, LinearGaussian; throws unsupported_variant
/// otherwise. All square roots are principal (their arguments have positive
/// real part for every t).
Complex evolve_closed_form(const WavePacket& state, double x, double t, const UnitSystem& units);

/// One retained term of the long-time expansion at x = 0: the contribution
/// coeff * f^{order+1} * moment with f = (1-i) sqrt(m hbar/t) and
/// moment = int_0^infty u^order e^{-u^2} du = Gamma((order+1)/2)/2.
struct SteepestDescentTerm {
    Complex f;          // the rotated momentum scale, arg f = -pi/4 for t > 0
    int order;          // power of u retained
    double moment;      // Gamma((order+1)/2)/2
    Complex amplitude;  // full additive contribution to psi(0,t), h^{-1/2} included
};

/// The two leading terms of the steepest-descent expansion of psi(0,t) for an
/// amplitude c1 p + c2 p^2 + ... near p = 0. Throws domain_error for t <= 0.
std::array<SteepestDescentTerm, 2> steepest_descent_terms(Complex c1, Complex c2, double t,
                                                          const UnitSystem& units);

/// psi(0,t) ~ h^{-1/2} [c1 f^2 M1 + c2 f^3 M2], M1 = 1/2, M2 = sqrt(pi)/4.
/// Both terms are retained so the c1 = 0 case falls through to the t^{-3/2}
/// amplitude.
Complex asymptotic_prediction(Complex c1, Complex c2, double t, const UnitSystem& units);

}  // namespace wpa
