#pragma once

#include <utility>
#include <vector>

#include "wpa/propagator.hpp"
#include "wpa/states.hpp"

namespace wpa {

/// Logarithmically spaced sample times. The ratio between neighbours is
/// constant to floating-point rounding.
struct TimeGrid {
    double t_min = 0.1;
    double t_max = 1e6;
    int points_per_decade = 16;
    std::vector<double> values;

    /// Builds the grid; t_min == t_max yields a single point. Throws
    /// invalid_input for non-positive bounds, t_max < t_min, or fewer than
    /// 4 points per decade.
    static TimeGrid log_spaced(double t_min, double t_max, int points_per_decade);
};

enum class EvolutionRoute { closed_form, quadrature };

/// |psi(x, t)|^2 sampled at fixed x over a time grid.
struct DensityTrace {
    double x = 0.0;
    TimeGrid grid;
    std::vector<double> density;
    EvolutionRoute route = EvolutionRoute::closed_form;
};

DensityTrace compute_density_trace(const WavePacket& state, double x, const TimeGrid& grid, EvolutionRoute route,
                                   const UnitSystem& units, const QuadratureConfig& cfg);

/// (ln t, d ln rho/d ln t) by central differences on the log grid, one-sided
/// at the endpoints. Throws degenerate_input listing the grid indices where
/// the density vanishes (or is negative).
std::vector<std::pair<double, double>> log_derivative_curve(const DensityTrace& trace);

struct ExponentEstimate {
    std::vector<std::pair<double, double>> slope_curve;
    double asymptotic_exponent = 0.0;
    std::pair<double, double> fit_window{0.0, 0.0};
    double residual = 0.0;  // RMS deviation of ln rho from the fit line
};

/// Least-squares slope of ln rho versus ln t over the trailing
/// window_decades decades. Requires the trace to span at least
/// window_decades + 1 decades (insufficient_span otherwise).
ExponentEstimate fit_exponent(const DensityTrace& trace, double window_decades);

/// Least-squares line y = intercept + slope * x. Returns {slope, intercept}.
std::pair<double, double> least_squares_line(const std::vector<std::pair<double, double>>& points);

}  // namespace wpa
