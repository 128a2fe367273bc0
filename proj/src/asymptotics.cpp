#include "wpa/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "wpa/errors.hpp"

namespace wpa {

TimeGrid TimeGrid::log_spaced(double t_min, double t_max, int points_per_decade) {
    if (!(t_min > 0.0) || !std::isfinite(t_min)) throw invalid_input("TimeGrid: t_min must be > 0");
    if (!(t_max >= t_min) || !std::isfinite(t_max)) throw invalid_input("TimeGrid: t_max must be >= t_min");
    if (points_per_decade < 4) throw invalid_input("TimeGrid: points_per_decade must be >= 4");

    TimeGrid grid{t_min, t_max, points_per_decade, {}};
    if (t_min == t_max) {
        grid.values.push_back(t_min);
        return grid;
    }
    const double decades = std::log10(t_max / t_min);
    const int n = std::max(2, static_cast<int>(std::lround(decades * points_per_decade)) + 1);
    const double log_min = std::log(t_min);
    const double step = (std::log(t_max) - log_min) / (n - 1);
    grid.values.reserve(n);
    for (int i = 0; i < n; ++i) grid.values.push_back(std::exp(log_min + i * step));
    grid.values.back() = t_max;
    return grid;
}

DensityTrace compute_density_trace(const WavePacket& state, double x, const TimeGrid& grid, EvolutionRoute route,
                                   const UnitSystem& units, const QuadratureConfig& cfg) {
    DensityTrace trace{x, grid, {}, route};
    trace.density.reserve(grid.values.size());
    for (double t : grid.values) {
        const Complex psi = route == EvolutionRoute::closed_form ? evolve_closed_form(state, x, t, units)
                                                                 : evolve_quadrature(state, x, t, units, cfg);
        trace.density.push_back(std::norm(psi));
    }
    return trace;
}

std::vector<std::pair<double, double>> log_derivative_curve(const DensityTrace& trace) {
    const auto& t = trace.grid.values;
    const auto& rho = trace.density;
    if (t.size() != rho.size()) throw invalid_input("log_derivative_curve: grid/density length mismatch");
    if (t.size() < 2) throw invalid_input("log_derivative_curve: need at least two samples");

    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i] > 0.0)) bad.push_back(i);
    if (!bad.empty()) throw degenerate_input("log_derivative_curve: non-positive density", bad);

    std::vector<double> log_t(t.size()), log_rho(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        log_t[i] = std::log(t[i]);
        log_rho[i] = std::log(rho[i]);
    }

    std::vector<std::pair<double, double>> curve(t.size());
    const std::size_t n = t.size();
    curve.front() = {log_t.front(), (log_rho[1] - log_rho[0]) / (log_t[1] - log_t[0])};
    for (std::size_t i = 1; i + 1 < n; ++i)
        curve[i] = {log_t[i], (log_rho[i + 1] - log_rho[i - 1]) / (log_t[i + 1] - log_t[i - 1])};
    curve.back() = {log_t[n - 1], (log_rho[n - 1] - log_rho[n - 2]) / (log_t[n - 1] - log_t[n - 2])};
    return curve;
}

std::pair<double, double> least_squares_line(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw invalid_input("least_squares_line: need at least two points");
    double sx = 0, sy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
    }
    const double mx = sx / static_cast<double>(points.size());
    const double my = sy / static_cast<double>(points.size());
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) throw invalid_input("least_squares_line: degenerate abscissa");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

ExponentEstimate fit_exponent(const DensityTrace& trace, double window_decades) {
    if (!(window_decades > 0.0)) throw invalid_input("fit_exponent: window_decades must be > 0");
    const auto& t = trace.grid.values;
    if (t.size() < 2) throw insufficient_span("fit_exponent: trace has fewer than two samples");
    const double span = std::log10(t.back() / t.front());
    if (span < window_decades + 1.0)
        throw insufficient_span("fit_exponent: trace spans " + std::to_string(span) + " decades, need >= " +
                                std::to_string(window_decades + 1.0));

    ExponentEstimate est;
    est.slope_curve = log_derivative_curve(trace);

    const double t_lo = t.back() / std::pow(10.0, window_decades);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= t_lo) pts.push_back({std::log(t[i]), std::log(trace.density[i])});

    const auto [slope, intercept] = least_squares_line(pts);
    est.asymptotic_exponent = slope;
    est.fit_window = {t_lo, t.back()};
    double ss = 0;
    for (const auto& [x, y] : pts) {
        const double r = y - intercept - slope * x;
        ss += r * r;
    }
    est.residual = std::sqrt(ss / static_cast<double>(pts.size()));
    return est;
}

}  // namespace wpa
