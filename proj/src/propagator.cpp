#include "wpa/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wpa/complexfn.hpp"
#include "wpa/errors.hpp"

namespace wpa {
namespace {

constexpr Complex kI{0.0, 1.0};

// Rotation is used only while the peak integrand amplification e^{lambda^2/(4a)}
// stays below e^1; beyond that the real-axis fallback is cheaper and keeps the
// roundoff floor well under the requested tolerances.
constexpr double kMaxRayAmplification = 1.0;
// -log of the neglected tail of the rotated integrand.
constexpr double kRayTailSuppression = 42.0;

// Analytic continuation of the p > 0 branch of the momentum amplitude, split
// as bounded * exp(exponent). On the rotated path the exponent must be
// combined with the kernel's before exponentiating: the factors alone can
// overflow even where the product is tame.
struct FactoredAmplitude {
    Complex bounded;   // polynomial-like factor, O(|p|^2) at worst
    Complex exponent;  // everything exponential
};

FactoredAmplitude amplitude_factored(const WavePacket& state, Complex p, const UnitSystem& units) {
    const double hbar = units.hbar;
    return std::visit(
        [&](const auto& s) -> FactoredAmplitude {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) {
                // |e^{-alpha p^2/hbar^2}| = 1 on the +-45 degree rays
                const Complex cut = 1.0 - std::exp(-s.alpha * p * p / (hbar * hbar));
                const Complex q = p - s.p0;
                return {s.norm * cut, -s.delta * s.delta * q * q / (hbar * hbar) - kI * p * s.x0 / hbar};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const Complex q = p - s.p0;
                return {Complex{s.norm, 0.0}, -s.delta * s.delta * q * q / (hbar * hbar) - kI * p * s.x0 / hbar};
            } else if constexpr (std::is_same_v<T, LorentzianSquared>) {
                return {-2.0 * std::pow(s.alpha / hbar, 1.5) * p, -s.alpha * p / hbar};
            } else if constexpr (std::is_same_v<T, LinearGaussian>) {
                return {s.norm * p, -p * p / (2.0 * s.beta)};
            } else {
                return {s.c1 * p + s.c2 * p * p, -p * p / (s.cutoff * s.cutoff)};
            }
        },
        state);
}

struct RayInfo {
    double lambda;      // growth rate of |integrand| ~ e^{lambda s} on the ray
    double phase_quad;  // |coefficient| of s^2 in the on-ray phase (oscillation density)
};

// On the ray p = eta * omega * s with omega = e^{-i sgn(t) pi/4}:
// Re p = eta s/sqrt(2), Re(i p) = eta sgn(t) s/sqrt(2), Re p^2 = 0.
RayInfo ray_info(const WavePacket& state, double x, int eta, int time_sign, const UnitSystem& units) {
    const double hbar = units.hbar;
    const double half_sqrt2 = std::numbers::sqrt2 / 2.0;
    const double phase_dir = eta * time_sign * half_sqrt2;  // multiplies linear phase coefficients

    return std::visit(
        [&](const auto& s) -> RayInfo {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) {
                const double lam = phase_dir * (x - s.x0) / hbar +
                                   eta * std::numbers::sqrt2 * s.delta * s.delta * s.p0 / (hbar * hbar);
                return {lam, (s.delta * s.delta + s.alpha) / (hbar * hbar)};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const double lam = phase_dir * (x - s.x0) / hbar +
                                   eta * std::numbers::sqrt2 * s.delta * s.delta * s.p0 / (hbar * hbar);
                return {lam, s.delta * s.delta / (hbar * hbar)};
            } else if constexpr (std::is_same_v<T, LorentzianSquared>) {
                return {phase_dir * x / hbar - eta * half_sqrt2 * s.alpha / hbar, 0.0};
            } else if constexpr (std::is_same_v<T, LinearGaussian>) {
                return {phase_dir * x / hbar, 0.5 / s.beta};
            } else {
                return {phase_dir * x / hbar, 1.0 / (s.cutoff * s.cutoff)};
            }
        },
        state);
}

std::vector<double> uniform_breaks(double lo, double hi, int panels) {
    std::vector<double> breaks;
    breaks.reserve(panels + 1);
    for (int i = 0; i <= panels; ++i) breaks.push_back(lo + (hi - lo) * i / panels);
    return breaks;
}

// Half-line integral on the rotated path p = eta * omega * s, s in [0, S].
QuadratureOutcome<Complex> rotated_half(const WavePacket& state, double x, double t, int eta,
                                        const UnitSystem& units, const QuadratureConfig& cfg, double lambda,
                                        double phase_quad) {
    const int time_sign = t > 0 ? 1 : -1;
    const double a = std::abs(t) / (2.0 * units.mass * units.hbar);
    const Complex omega = std::polar(1.0, -time_sign * std::numbers::pi / 4.0);
    const Complex dir = static_cast<double>(eta) * omega;

    const double peak = std::max(0.0, lambda) * std::max(0.0, lambda) / (4.0 * a);
    const double s_max = (lambda + std::sqrt(lambda * lambda + 4.0 * a * (kRayTailSuppression + peak))) / (2.0 * a);

    const int osc_panels = static_cast<int>(std::clamp(phase_quad * s_max * s_max / std::numbers::pi, 1.0, 4096.0));
    auto breaks = uniform_breaks(0.0, s_max, osc_panels);

    const auto f = [&](double s) -> Complex {
        const Complex p = dir * s;
        const FactoredAmplitude amp = amplitude_factored(state, p, units);
        return amp.bounded * std::exp(amp.exponent + kI * p * x / units.hbar - a * s * s);
    };
    auto out = integrate_adaptive<Complex>(f, breaks, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
    out.value *= omega / std::sqrt(units.h());
    return out;
}

// Real-axis integral over [lo, hi] subdivided at the stationary-phase scale.
QuadratureOutcome<Complex> real_axis_integral(const WavePacket& state, double x, double t, double lo, double hi,
                                              const UnitSystem& units, const QuadratureConfig& cfg) {
    if (hi <= lo) return {Complex{0.0, 0.0}, 0.0, 0, true};
    const double kernel_scale =
        t != 0.0 ? std::sqrt(2.0 * std::numbers::pi * units.mass * units.hbar / std::abs(t))
                 : std::numeric_limits<double>::infinity();
    const double x_scale = x != 0.0 ? 2.0 * std::numbers::pi * units.hbar / std::abs(x)
                                    : std::numeric_limits<double>::infinity();
    const double panel = std::min(kernel_scale, x_scale);
    const int panels = static_cast<int>(std::clamp((hi - lo) / panel, 1.0, 131072.0));
    auto breaks = uniform_breaks(lo, hi, panels);

    const double chirp = t / (2.0 * units.mass * units.hbar);
    const auto f = [&](double p) -> Complex {
        return momentum_amplitude(state, p, units) * std::exp(kI * (p * x / units.hbar - chirp * p * p));
    };
    auto out = integrate_adaptive<Complex>(f, breaks, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
    out.value /= std::sqrt(units.h());
    return out;
}

}  // namespace

Complex propagator_kernel(double x, double x_prime, double t, const UnitSystem& units) {
    units.validate();
    if (!std::isfinite(x) || !std::isfinite(x_prime)) throw invalid_input("propagator_kernel: non-finite position");
    if (!(t > 0.0)) throw domain_error("propagator_kernel: t must be > 0");
    const Complex root = std::sqrt(Complex{0.0, -units.mass / (units.h() * t)});
    const double phase = units.mass * (x - x_prime) * (x - x_prime) / (2.0 * units.hbar * t);
    return root * std::exp(Complex{0.0, phase});
}

Complex evolve_quadrature(const WavePacket& state, double x, double t, const UnitSystem& units,
                          const QuadratureConfig& cfg) {
    units.validate();
    cfg.validate();
    if (!std::isfinite(x) || !std::isfinite(t)) throw invalid_input("evolve_quadrature: non-finite argument");

    const auto [lo, hi] = momentum_support(state, cfg.momentum_cutoff_sigmas, units);

    if (t == 0.0) {
        auto out = real_axis_integral(state, x, 0.0, lo, hi, units, cfg);
        if (!out.converged)
            throw non_convergence("evolve_quadrature did not converge at t = 0", out.value, out.error);
        return out.value;
    }

    const int time_sign = t > 0 ? 1 : -1;
    const double a = std::abs(t) / (2.0 * units.mass * units.hbar);

    Complex total{0.0, 0.0};
    double total_err = 0.0;
    bool converged = true;

    const bool has_backward = !theta_truncated(state) && lo < 0.0;
    for (int eta : {1, -1}) {
        if (eta == -1 && !has_backward) continue;
        const RayInfo info = ray_info(state, x, eta, time_sign, units);
        const double amplification = std::max(0.0, info.lambda) * std::max(0.0, info.lambda) / (4.0 * a);
        QuadratureOutcome<Complex> out;
        if (amplification <= kMaxRayAmplification) {
            out = rotated_half(state, x, t, eta, units, cfg, info.lambda, info.phase_quad);
        } else if (eta == 1) {
            out = real_axis_integral(state, x, t, std::max(0.0, lo), hi, units, cfg);
        } else {
            out = real_axis_integral(state, x, t, lo, std::min(0.0, hi), units, cfg);
        }
        total += out.value;
        total_err += out.error;
        converged = converged && out.converged;
    }

    if (!converged) throw non_convergence("evolve_quadrature did not converge", total, total_err);
    return total;
}

Complex evolve_closed_form(const WavePacket& state, double x, double t, const UnitSystem& units) {
    units.validate();
    if (!std::isfinite(x) || !std::isfinite(t)) throw invalid_input("evolve_closed_form: non-finite argument");
    const double hbar = units.hbar;
    const double m = units.mass;
    const double h = units.h();
    const double sqrt_pi = std::sqrt(std::numbers::pi);

    if (const auto* tg = std::get_if<TruncatedGaussian>(&state)) {
        // psi = C sqrt(h)/(4 sqrt(pi)) e^{-delta^2 k0^2}
        //       [ w(-i g/(2 sqrt(A)))/sqrt(A) - w(-i g/(2 sqrt(A+alpha)))/sqrt(A+alpha) ],
        // A = delta^2 + i hbar t/(2m), g = 2 k0 delta^2 + i (x - x0), k0 = p0/hbar.
        // Re A = delta^2 > 0 keeps both square roots on the principal branch.
        const double k0 = tg->p0 / hbar;
        const Complex width{tg->delta * tg->delta, hbar * t / (2.0 * m)};
        const Complex lin{2.0 * tg->delta * tg->delta * k0, x - tg->x0};
        const Complex root_a = std::sqrt(width);
        const Complex root_b = std::sqrt(width + tg->alpha);
        const Complex w_a = faddeeva_w(-kI * lin / (2.0 * root_a));
        const Complex w_b = faddeeva_w(-kI * lin / (2.0 * root_b));
        const double prefactor = tg->norm * std::sqrt(h) / (4.0 * sqrt_pi) *
                                 std::exp(-tg->delta * tg->delta * k0 * k0);
        return prefactor * (w_a / root_a - w_b / root_b);
    }
    if (const auto* gs = std::get_if<Gaussian>(&state)) {
        // Full-line Gaussian integral: psi = C' sqrt(h)/(2 sqrt(pi))
        //   e^{g^2/(4A) - delta^2 k0^2} / sqrt(A).
        const double k0 = gs->p0 / hbar;
        const Complex width{gs->delta * gs->delta, hbar * t / (2.0 * m)};
        const Complex lin{2.0 * gs->delta * gs->delta * k0, x - gs->x0};
        const Complex root_a = std::sqrt(width);
        const Complex expo = lin * lin / (4.0 * width) - gs->delta * gs->delta * k0 * k0;
        return gs->norm * std::sqrt(h) / (2.0 * sqrt_pi) * std::exp(expo) / root_a;
    }
    if (const auto* lg = std::get_if<LinearGaussian>(&state)) {
        // psi = h^{-1/2} kappa/(2B) [1 + i sqrt(pi) xi w(xi)],
        // B = 1/(2 beta) + i t/(2 m hbar), xi = x/(2 hbar sqrt(B)).
        const Complex b{0.5 / lg->beta, t / (2.0 * m * hbar)};
        const Complex xi = x / (2.0 * hbar * std::sqrt(b));
        const Complex bracket = 1.0 + kI * sqrt_pi * xi * faddeeva_w(xi);
        return lg->norm / (2.0 * b * std::sqrt(h)) * bracket;
    }
    throw unsupported_variant("evolve_closed_form: no closed form for " + variant_name(state));
}

std::array<SteepestDescentTerm, 2> steepest_descent_terms(Complex c1, Complex c2, double t,
                                                          const UnitSystem& units) {
    units.validate();
    if (!(t > 0.0)) throw domain_error("steepest_descent_terms: t must be > 0");
    const Complex f = Complex{1.0, -1.0} * std::sqrt(units.mass * units.hbar / t);
    const double inv_sqrt_h = 1.0 / std::sqrt(units.h());
    const double m1 = 0.5;                            // int_0^inf u e^{-u^2} du
    const double m2 = std::sqrt(std::numbers::pi) / 4.0;  // int_0^inf u^2 e^{-u^2} du
    return {SteepestDescentTerm{f, 1, m1, inv_sqrt_h * c1 * f * f * m1},
            SteepestDescentTerm{f, 2, m2, inv_sqrt_h * c2 * f * f * f * m2}};
}

Complex asymptotic_prediction(Complex c1, Complex c2, double t, const UnitSystem& units) {
    const auto terms = steepest_descent_terms(c1, c2, t, units);
    return terms[0].amplitude + terms[1].amplitude;
}

}  // namespace wpa
