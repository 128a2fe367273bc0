#include "wpa/dwell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <numbers>

#include <json.hpp>

#include "wpa/errors.hpp"
#include "wpa/propagator.hpp"

namespace wpa {
namespace {

constexpr Complex kI{0.0, 1.0};

// Tail verdicts: fitted exponent >= -1.1 means the time integral diverges.
constexpr double kDivergenceMargin = 0.1;
// Local slope is considered stable once it moves by less than this between
// t and t/2.
constexpr double kSlopeStabilityTol = 0.01;
constexpr double kTailFitResidualMax = 0.05;
// Relative amplitude at p = 0 above which the |p|^-1 factor is fatal.
constexpr double kAmplitudeAtZeroTol = 1e-12;
// Spatial probability allowed inside/beyond the interval for the classical
// sojourn formula to apply.
constexpr double kClassicalMassTol = 1e-3;

bool has_closed_form(const WavePacket& state) {
    return std::holds_alternative<TruncatedGaussian>(state) || std::holds_alternative<Gaussian>(state) ||
           std::holds_alternative<LinearGaussian>(state);
}

Complex psi_best(const WavePacket& state, double x, double t, const UnitSystem& units,
                 const QuadratureConfig& cfg) {
    return has_closed_form(state) ? evolve_closed_form(state, x, t, units)
                                  : evolve_quadrature(state, x, t, units, cfg);
}

// Peak amplitude over the support, for divergence thresholds.
double amplitude_scale(const WavePacket& state, const UnitSystem& units, const QuadratureConfig& cfg) {
    const auto [lo, hi] = momentum_support(state, cfg.momentum_cutoff_sigmas, units);
    double scale = 0.0;
    for (int i = 0; i <= 64; ++i)
        scale = std::max(scale, std::abs(momentum_amplitude(state, lo + (hi - lo) * i / 64.0, units)));
    return scale;
}

bool amplitude_vanishes_at_zero(const WavePacket& state, const UnitSystem& units, const QuadratureConfig& cfg) {
    const double amp0 = std::abs(momentum_amplitude(state, 0.0, units));
    return amp0 <= kAmplitudeAtZeroTol * amplitude_scale(state, units, cfg);
}

// m (b-a) int dp |<p|psi>|^2 / |p| expressed through the diagonal projector
// element; shared by the momentum route's alpha = + term and the classical
// oracle.
double weighted_inverse_momentum_integral(const WavePacket& state, const SpatialInterval& interval,
                                          const UnitSystem& units, const QuadratureConfig& cfg) {
    const auto [lo, hi] = momentum_support(state, cfg.momentum_cutoff_sigmas, units);
    const double mh = units.mass * units.h();

    const auto integrand = [&](double p) -> double {
        const double apsq = std::norm(momentum_amplitude(state, p, units));
        if (apsq == 0.0) return 0.0;
        return mh / std::abs(p) * apsq * projector_matrix_element(interval, p, p, units).real();
    };

    // a hole of negligible measure around p = 0 keeps 1/|p| off the nodes
    const double floor_p = 1e-10 * std::max(std::abs(lo), hi);
    double total = 0.0;
    for (const auto& [a, b] : {std::pair{lo, -floor_p}, std::pair{floor_p, hi}}) {
        if (b <= a) continue;
        auto out = integrate_adaptive<double>(integrand, std::vector<double>{a, 0.5 * (a + b), b}, cfg.rel_tol,
                                              1e-14, cfg.max_subdivisions);
        if (!out.converged)
            throw non_convergence("momentum-weighted dwell integral did not converge", out.value, out.error);
        total += out.value;
    }
    return total;
}

struct TailAnalysis {
    double cutoff;       // T*: start of the analytic tail
    double t_max;        // end of the fitted window
    double exponent;     // fitted n
    double amplitude;    // fitted C in P ~ C t^n
    bool divergent;
};

// Probes P(dir * t) on a log grid until the local log-log slope stabilizes,
// then fits the power-law tail one decade past the stabilization point.
TailAnalysis analyze_tail(const std::function<double(double)>& prob, double t_start) {
    constexpr int kPointsPerDecade = 10;
    constexpr int kHalfOffset = 3;  // 10^(3/10) ~ 2.0
    const double ratio = std::pow(10.0, 1.0 / kPointsPerDecade);

    std::vector<double> ts{t_start};
    std::vector<double> lp{std::log(std::max(prob(t_start), 1e-300))};
    auto extend_to = [&](double t_goal) {
        while (ts.back() < t_goal * 0.999) {
            ts.push_back(ts.back() * ratio);
            lp.push_back(std::log(std::max(prob(ts.back()), 1e-300)));
        }
    };
    extend_to(1e3);

    const auto slope_at = [&](std::size_t i) {
        return (lp[i + 1] - lp[i - 1]) / (std::log(ts[i + 1]) - std::log(ts[i - 1]));
    };

    double t_stable = -1.0;
    while (true) {
        std::size_t peak = std::distance(lp.begin(), std::max_element(lp.begin(), lp.end()));
        for (std::size_t i = peak + kHalfOffset + 1; i + 1 < ts.size(); ++i) {
            const double s = slope_at(i);
            if (s < -0.5 && std::abs(s - slope_at(i - kHalfOffset)) < kSlopeStabilityTol) {
                t_stable = ts[i];
                break;
            }
        }
        if (t_stable > 0.0 || ts.back() >= 1e6) break;
        extend_to(ts.back() * 10.0);
    }
    if (t_stable < 0.0)
        throw non_convergence("dwell tail: log-log slope did not stabilize by t = 1e6", Complex{0.0, 0.0}, 0.0);

    TailAnalysis tail{};
    tail.cutoff = std::min(10.0 * t_stable, 1e5);
    tail.t_max = 10.0 * tail.cutoff;
    extend_to(tail.t_max);

    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < ts.size(); ++i)
        if (ts[i] >= tail.cutoff) pts.push_back({std::log(ts[i]), lp[i]});
    const auto [slope, intercept] = least_squares_line(pts);
    double ss = 0.0;
    for (const auto& [lx, ly] : pts) {
        const double r = ly - intercept - slope * lx;
        ss += r * r;
    }
    const double residual = std::sqrt(ss / static_cast<double>(pts.size()));
    if (residual > kTailFitResidualMax)
        throw non_convergence("dwell tail: unstable power-law fit (residual " + std::to_string(residual) + ")",
                              Complex{slope, 0.0}, residual);

    tail.exponent = slope;
    tail.amplitude = std::exp(intercept);
    tail.divergent = slope >= -(1.0 + kDivergenceMargin);
    return tail;
}

}  // namespace

double prob_in_interval(const WavePacket& state, const SpatialInterval& interval, double t,
                        const UnitSystem& units, const QuadratureConfig& cfg) {
    interval.validate();
    cfg.validate();
    units.validate();

    QuadratureConfig inner = cfg;
    inner.abs_tol = std::max(cfg.abs_tol, 1e-16);

    const auto density = [&](double x) { return std::norm(psi_best(state, x, t, units, inner)); };
    std::vector<double> breaks;
    for (int i = 0; i <= 8; ++i) breaks.push_back(interval.a + interval.width() * i / 8.0);
    auto out = integrate_adaptive<double>(density, breaks, cfg.rel_tol, std::max(cfg.abs_tol, 1e-14),
                                          cfg.max_subdivisions);
    if (!out.converged)
        throw non_convergence("prob_in_interval quadrature did not converge", out.value, out.error);
    return out.value;
}

DwellOutcome dwell_time_time_integral(const WavePacket& state, const SpatialInterval& interval,
                                      const UnitSystem& units, const QuadratureConfig& cfg,
                                      double* tail_exponent) {
    interval.validate();
    cfg.validate();

    const double t_probe = units.mass / units.hbar;  // natural time scale of the units
    const auto prob_forward = [&](double t) { return prob_in_interval(state, interval, t, units, cfg); };
    const auto prob_backward = [&](double t) { return prob_in_interval(state, interval, -t, units, cfg); };

    const TailAnalysis forward = analyze_tail(prob_forward, t_probe);
    if (tail_exponent) *tail_exponent = forward.exponent;
    if (forward.divergent) return DwellOutcome::diverged();
    const TailAnalysis backward = analyze_tail(prob_backward, t_probe);
    if (backward.divergent) return DwellOutcome::diverged();

    // numeric bulk over [-T*_-, T*_+]
    std::vector<double> breaks{-backward.cutoff, -std::sqrt(backward.cutoff * t_probe), 0.0,
                               std::sqrt(forward.cutoff * t_probe), forward.cutoff};
    const auto integrand = [&](double t) { return prob_in_interval(state, interval, t, units, cfg); };
    auto bulk = integrate_adaptive<double>(integrand, breaks, 1e-5, 1e-12, cfg.max_subdivisions);
    if (!bulk.converged)
        throw non_convergence("dwell time bulk integral did not converge", bulk.value, bulk.error);

    // int_T*^inf C t^n dt = -C T*^{n+1}/(n+1) for n < -1
    const double tail_fwd = -forward.amplitude * std::pow(forward.cutoff, forward.exponent + 1.0) /
                            (forward.exponent + 1.0);
    const double tail_bwd = -backward.amplitude * std::pow(backward.cutoff, backward.exponent + 1.0) /
                            (backward.exponent + 1.0);
    return DwellOutcome::finite(bulk.value + tail_fwd + tail_bwd);
}

Complex projector_matrix_element(const SpatialInterval& interval, double p, double p_prime,
                                 const UnitSystem& units) {
    interval.validate();
    units.validate();
    if (!std::isfinite(p) || !std::isfinite(p_prime))
        throw invalid_input("projector_matrix_element: non-finite momentum");
    const double h = units.h();
    const double dk = (p_prime - p) / units.hbar;
    if (dk == 0.0) return {interval.width() / h, 0.0};
    // (1/h) int_a^b e^{i dk x} dx
    const Complex upper = std::exp(kI * dk * interval.b);
    const Complex lower = std::exp(kI * dk * interval.a);
    return (upper - lower) / (kI * dk * h);
}

DwellOutcome dwell_time_momentum_form(const WavePacket& state, const SpatialInterval& interval,
                                      const UnitSystem& units, const QuadratureConfig& cfg) {
    interval.validate();
    cfg.validate();
    units.validate();

    if (!amplitude_vanishes_at_zero(state, units, cfg)) return DwellOutcome::diverged();

    // alpha = + : the diagonal projector element (b-a)/h
    const double diagonal = weighted_inverse_momentum_integral(state, interval, units, cfg);

    // alpha = - : vanishes identically when <-p|psi> = 0 for p > 0
    double cross = 0.0;
    const auto [lo, hi] = momentum_support(state, cfg.momentum_cutoff_sigmas, units);
    if (!theta_truncated(state) && lo < 0.0) {
        const double mh = units.mass * units.h();
        const auto integrand = [&](double p) -> Complex {
            const Complex bra = std::conj(momentum_amplitude(state, p, units));
            const Complex ket = momentum_amplitude(state, -p, units);
            if (bra == Complex{} || ket == Complex{}) return {};
            return mh / std::abs(p) * bra * projector_matrix_element(interval, p, -p, units) * ket;
        };
        const double floor_p = 1e-10 * std::max(std::abs(lo), hi);
        const double reach = std::max(std::abs(lo), hi);
        Complex sum{0.0, 0.0};
        for (const auto& [a, b] : {std::pair{-reach, -floor_p}, std::pair{floor_p, reach}}) {
            auto out = integrate_adaptive<Complex>(integrand, std::vector<double>{a, 0.5 * (a + b), b},
                                                   cfg.rel_tol, 1e-14, cfg.max_subdivisions);
            if (!out.converged)
                throw non_convergence("momentum-route cross term did not converge", out.value, out.error);
            sum += out.value;
        }
        if (std::abs(sum.imag()) > 1e-10 * std::max(1.0, std::abs(sum.real())))
            throw non_convergence("momentum-route cross term has a non-real residue", sum, std::abs(sum.imag()));
        cross = sum.real();
    }
    return DwellOutcome::finite(diagonal + cross);
}

DwellOutcome classical_dwell(const WavePacket& state, const SpatialInterval& interval, const UnitSystem& units) {
    interval.validate();
    units.validate();
    QuadratureConfig cfg;  // defaults; the oracle has no tolerance knobs in its signature

    // The sojourn formula m(b-a)/|p| per trajectory requires every trajectory
    // to start outside and traverse the interval.
    const double center = position_center(state);
    if (center >= interval.a && center <= interval.b)
        throw precondition_violation("classical_dwell: packet is centered inside the interval");

    const auto density0 = [&](double x) {
        return std::norm(has_closed_form(state) ? evolve_closed_form(state, x, 0.0, units)
                                                : position_wavefunction_initial(state, x, units));
    };
    const double reach = std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian> || std::is_same_v<T, Gaussian>)
                return 40.0 * s.delta;
            else if constexpr (std::is_same_v<T, LorentzianSquared>)
                return 1e3 * s.alpha;
            else if constexpr (std::is_same_v<T, LinearGaussian>)
                return 50.0 * units.hbar / std::sqrt(s.beta);
            else
                return 50.0 * units.hbar / s.cutoff * std::numbers::sqrt2;
        },
        state);

    const auto mass_over = [&](double lo, double hi) {
        auto out = integrate_adaptive<double>(density0, std::vector<double>{lo, 0.5 * (lo + hi), hi}, 1e-8,
                                              1e-12, cfg.max_subdivisions);
        if (!out.converged)
            throw non_convergence("classical_dwell: initial-mass quadrature did not converge", out.value,
                                  out.error);
        return out.value;
    };
    const double mass_inside = mass_over(interval.a, interval.b);
    const double mass_beyond = center < interval.a ? mass_over(interval.b, interval.b + reach)
                                                   : mass_over(interval.a - reach, interval.a);
    if (mass_inside + mass_beyond > kClassicalMassTol)
        throw precondition_violation("classical_dwell: initial spatial mass inside/beyond the interval is " +
                                     std::to_string(mass_inside + mass_beyond) + " (limit 1e-3)");

    if (!amplitude_vanishes_at_zero(state, units, cfg)) return DwellOutcome::diverged();
    return DwellOutcome::finite(weighted_inverse_momentum_integral(state, interval, units, cfg));
}

DwellReport dwell_report(const WavePacket& state, const SpatialInterval& interval, const UnitSystem& units,
                         const QuadratureConfig& cfg) {
    DwellReport report;
    report.momentum_route = dwell_time_momentum_form(state, interval, units, cfg);
    double n = 0.0;
    report.time_route = dwell_time_time_integral(state, interval, units, cfg, &n);
    report.tail_exponent_used = n;
    report.classical_value = classical_dwell(state, interval, units);
    if (!report.time_route.divergent && !report.momentum_route.divergent && report.momentum_route.value != 0.0)
        report.relative_discrepancy =
            std::abs(report.time_route.value - report.momentum_route.value) / report.momentum_route.value;
    return report;
}

std::string dwell_report_to_json(const DwellReport& report) {
    nlohmann::json j;
    const auto encode = [](const DwellOutcome& o) -> nlohmann::json {
        if (o.divergent) return "divergent";
        return o.value;
    };
    j["time_route"] = encode(report.time_route);
    j["momentum_route"] = encode(report.momentum_route);
    j["classical_value"] = encode(report.classical_value);
    j["tail_exponent_used"] = report.tail_exponent_used;
    j["relative_discrepancy"] = report.relative_discrepancy;
    return j.dump(2);
}

}  // namespace wpa
