#pragma once

#include <complex>
#include <string>
#include <utility>
#include <variant>

#include "wpa/complexfn.hpp"
#include "wpa/quadrature.hpp"
#include "wpa/units.hpp"

namespace wpa {

// Initial wave packets in momentum representation. Each variant stores its
// resolved normalization so that int |<p|psi>|^2 dp = 1. All packets except
// Gaussian vanish identically for p < 0.

/// <p|psi> = C (1 - e^{-alpha p^2/hbar^2}) e^{-delta^2 (p-p0)^2/hbar^2 - i p x0/hbar}, p > 0.
/// Vanishes quadratically at p = 0.
struct TruncatedGaussian {
    double alpha;  // suppression scale (length^2)
    double delta;  // momentum-space width parameter (length)
    double p0;     // center momentum
    double x0;     // center position
    double norm;   // C, fixed by quadrature at construction
};

/// <p|psi> = C' e^{-delta^2 (p-p0)^2/hbar^2 - i p x0/hbar}, all p.
struct Gaussian {
    double delta;
    double p0;
    double x0;
    double norm;  // C' = sqrt(delta/hbar) (2/pi)^{1/4}
};

/// psi(x,0) = N/(x + i alpha)^2, i.e. <p|psi> = -2 (alpha/hbar)^{3/2} p e^{-alpha p/hbar}, p > 0.
struct LorentzianSquared {
    double alpha;  // length
    double norm;   // N = sqrt(2 alpha^3/pi)
};

/// <p|psi> = 2/(pi^{1/4} beta^{3/4}) p e^{-p^2/(2 beta)}, p > 0.
struct LinearGaussian {
    double beta;  // momentum^2
    double norm;  // 2/(pi^{1/4} beta^{3/4})
};

/// Synthetic packet <p|psi> = (c1 p + c2 p^2) e^{-(p/cutoff)^2}, p > 0, whose
/// leading Taylor coefficients at p = 0 are c1 and c2 by construction.
/// The stored coefficients absorb the normalization applied at construction.
struct TaylorStub {
    Complex c1;
    Complex c2;
    double cutoff;
};

using WavePacket = std::variant<TruncatedGaussian, Gaussian, LorentzianSquared, LinearGaussian, TaylorStub>;

WavePacket make_truncated_gaussian(double alpha, double delta, double p0, double x0, const UnitSystem& units);
WavePacket make_gaussian(double delta, double p0, double x0, const UnitSystem& units);
WavePacket make_lorentzian_squared(double alpha, const UnitSystem& units);
WavePacket make_linear_gaussian(double beta, const UnitSystem& units);
WavePacket make_taylor_stub(Complex c1, Complex c2, double cutoff, const UnitSystem& units);

/// <p|psi(0)>. Exactly zero for p < 0 on the truncated variants.
Complex momentum_amplitude(const WavePacket& state, double p, const UnitSystem& units);

/// psi(x, 0): closed form for LorentzianSquared, Fourier quadrature of the
/// momentum amplitude otherwise.
Complex position_wavefunction_initial(const WavePacket& state, double x, const UnitSystem& units);

/// The multiplicative constant that square-normalizes the momentum amplitude
/// (C, C', N, the LinearGaussian prefactor; 1 for the pre-scaled TaylorStub).
double normalization_constant(const WavePacket& state, const UnitSystem& units);

/// One-sided Taylor coefficients of the momentum amplitude at p -> 0+:
/// first = d<p|psi>/dp|_0, second = (1/2) d^2<p|psi>/dp^2|_0.
std::pair<Complex, Complex> taylor_coefficients(const WavePacket& state, const UnitSystem& units);

/// True for the variants whose amplitude vanishes identically for p < 0.
bool theta_truncated(const WavePacket& state);

/// [p_lo, p_hi] outside of which the amplitude modulus is suppressed by at
/// least exp(-n_sigmas^2/2) relative to its scale.
std::pair<double, double> momentum_support(const WavePacket& state, double n_sigmas, const UnitSystem& units);

/// Nominal initial packet center in position space.
double position_center(const WavePacket& state);

/// Parses "state=truncated_gaussian alpha=0.5 delta=1 p0=1 x0=-10" style
/// key-value text, or a JSON object with the same keys.
WavePacket parse_state_spec(const std::string& text, const UnitSystem& units);

/// Short lowercase name of the variant ("truncated_gaussian", ...).
std::string variant_name(const WavePacket& state);

}  // namespace wpa
