#pragma once

#include <string>

#include "wpa/asymptotics.hpp"
#include "wpa/quadrature.hpp"
#include "wpa/states.hpp"
#include "wpa/units.hpp"

namespace wpa {

struct SpatialInterval {
    double a;
    double b;

    void validate() const {
        if (!(a < b)) throw invalid_input("SpatialInterval: require a < b");
    }
    double width() const { return b - a; }
};

/// A dwell-time result: either a finite value or the divergent verdict
/// (which is a result, not an error).
struct DwellOutcome {
    bool divergent = false;
    double value = 0.0;

    static DwellOutcome diverged() { return {true, 0.0}; }
    static DwellOutcome finite(double v) { return {false, v}; }
};

struct DwellReport {
    DwellOutcome time_route;
    DwellOutcome momentum_route;
    DwellOutcome classical_value;
    double tail_exponent_used = 0.0;
    /// |time - momentum| / momentum when both quantum routes converge.
    double relative_discrepancy = 0.0;
};

/// P_ab(t) = int_a^b |psi(x,t)|^2 dx, evaluated through the closed form when
/// the variant has one and through evolve_quadrature otherwise.
double prob_in_interval(const WavePacket& state, const SpatialInterval& interval, double t,
                        const UnitSystem& units, const QuadratureConfig& cfg);

/// Dwell time as int_-inf^inf P_ab(t) dt: adaptive quadrature over
/// [-T-, T+] plus fitted power-law tails C t^n on both sides. The cutoffs
/// are placed where the local log-log slope of P_ab stabilizes. Returns the
/// divergent verdict when a fitted tail exponent is >= -1.1. If
/// tail_exponent is non-null it receives the fitted t -> +inf exponent.
DwellOutcome dwell_time_time_integral(const WavePacket& state, const SpatialInterval& interval,
                                      const UnitSystem& units, const QuadratureConfig& cfg,
                                      double* tail_exponent = nullptr);

/// <p|D(a,b)|p'> = (1/h) int_a^b e^{i (p'-p) x/hbar} dx in closed form;
/// (b-a)/h on the diagonal.
Complex projector_matrix_element(const SpatialInterval& interval, double p, double p_prime,
                                 const UnitSystem& units);

/// Dwell time from the momentum representation of the sojourn-time operator:
/// sum_{alpha=+-} int dp (m h/|p|) <psi|p><p|D|alpha p><alpha p|psi>.
/// Divergent verdict when the amplitude does not vanish at p = 0.
DwellOutcome dwell_time_momentum_form(const WavePacket& state, const SpatialInterval& interval,
                                      const UnitSystem& units, const QuadratureConfig& cfg);

/// Classical ensemble value m (b-a) int dp |<p|psi>|^2 / |p|: every
/// trajectory that traverses the interval dwells m(b-a)/|p| in it. Requires
/// the initial packet to sit on one side of the interval (spatial mass
/// inside or beyond the far edge below 1e-3), precondition_violation
/// otherwise.
DwellOutcome classical_dwell(const WavePacket& state, const SpatialInterval& interval, const UnitSystem& units);

/// Runs all three routes and fills in the discrepancy fields.
DwellReport dwell_report(const WavePacket& state, const SpatialInterval& interval, const UnitSystem& units,
                         const QuadratureConfig& cfg);

/// JSON with explicit "divergent" markers distinct from numeric values.
std::string dwell_report_to_json(const DwellReport& report);

}  // namespace wpa
