#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wpa/asymptotics.hpp"
#include "wpa/errors.hpp"

using wpa::DensityTrace;
using wpa::EvolutionRoute;
using wpa::TimeGrid;
using wpa::UnitSystem;

namespace {

const UnitSystem au = UnitSystem::atomic();
const wpa::QuadratureConfig cfg{1e-10, 1e-16, 8000, 12.0};

DensityTrace synthetic_power_law(double exponent, double amplitude, double t_min, double t_max, int ppd) {
    DensityTrace trace;
    trace.grid = TimeGrid::log_spaced(t_min, t_max, ppd);
    for (double t : trace.grid.values) trace.density.push_back(amplitude * std::pow(t, exponent));
    return trace;
}

}  // namespace

TEST_CASE("log-spaced grid has an exactly constant ratio") {
    const TimeGrid grid = TimeGrid::log_spaced(0.1, 1e6, 16);
    REQUIRE(grid.values.size() == 113);
    CHECK(grid.values.front() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(grid.values.back() == 1e6);
    const double ratio = grid.values[1] / grid.values[0];
    for (std::size_t i = 1; i < grid.values.size(); ++i) {
        CHECK(grid.values[i] > grid.values[i - 1]);
        CHECK(grid.values[i] / grid.values[i - 1] == doctest::Approx(ratio).epsilon(1e-12));
    }

    CHECK(TimeGrid::log_spaced(2.0, 2.0, 16).values.size() == 1);
    CHECK_THROWS_AS(TimeGrid::log_spaced(0.0, 1.0, 16), wpa::invalid_input);
    CHECK_THROWS_AS(TimeGrid::log_spaced(1.0, 0.5, 16), wpa::invalid_input);
    CHECK_THROWS_AS(TimeGrid::log_spaced(0.1, 1e3, 3), wpa::invalid_input);
}

TEST_CASE("exact power law gives a constant slope curve") {
    const DensityTrace trace = synthetic_power_law(-3.0, 2.5, 0.1, 1e4, 16);
    for (const auto& [log_t, slope] : wpa::log_derivative_curve(trace)) {
        CHECK(slope == doctest::Approx(-3.0).epsilon(1e-10));
    }
}

TEST_CASE("linear gaussian slope curve matches the exact law") {
    const wpa::WavePacket state = wpa::make_linear_gaussian(1.0, au);
    const TimeGrid grid = TimeGrid::log_spaced(0.05, 2e3, 128);
    const DensityTrace trace = wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
    const auto curve = wpa::log_derivative_curve(trace);
    for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
        const double t = std::exp(curve[i].first);
        CHECK(curve[i].second == doctest::Approx(-2.0 / (1.0 + 1.0 / (t * t))).epsilon(1e-4));
    }
}

TEST_CASE("linear gaussian slope curve decreases monotonically from 0 toward -2") {
    const wpa::WavePacket state = wpa::make_linear_gaussian(1.0, au);
    const TimeGrid grid = TimeGrid::log_spaced(0.01, 1e3, 16);
    const DensityTrace trace = wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
    const auto curve = wpa::log_derivative_curve(trace);
    CHECK(curve.front().second > -0.01);
    CHECK(curve.back().second == doctest::Approx(-2.0).epsilon(1e-3));
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second < curve[i - 1].second + 1e-9);
}

TEST_CASE("gaussian packet slope approaches -1") {
    const wpa::WavePacket state = wpa::make_gaussian(1.0, 1.0, -10.0, au);
    const TimeGrid grid = TimeGrid::log_spaced(1.0, 1e6, 16);
    const DensityTrace trace = wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
    CHECK(wpa::log_derivative_curve(trace).back().second == doctest::Approx(-1.0).epsilon(2e-3));
}

TEST_CASE("fitted exponents for the catalog states") {
    SUBCASE("truncated gaussian -> -3") {
        const wpa::WavePacket state = wpa::make_truncated_gaussian(0.5, 1.0, 1.0, -10.0, au);
        const TimeGrid grid = TimeGrid::log_spaced(1e2, 1e6, 16);
        const DensityTrace trace =
            wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
        const auto est = fit_exponent(trace, 2.0);  // t in [1e4, 1e6]
        CHECK(est.asymptotic_exponent == doctest::Approx(-3.0).epsilon(0.05 / 3.0));
        CHECK(est.fit_window.first == doctest::Approx(1e4));
    }
    SUBCASE("lorentzian squared -> -2 (quadrature route)") {
        const wpa::WavePacket state = wpa::make_lorentzian_squared(1.0, au);
        const TimeGrid grid = TimeGrid::log_spaced(1.0, 1e6, 16);
        const DensityTrace trace =
            wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::quadrature, au, cfg);
        const auto est = fit_exponent(trace, 1.5);
        CHECK(est.asymptotic_exponent == doctest::Approx(-2.0).epsilon(0.05 / 2.0));
    }
    SUBCASE("gaussian -> -1") {
        const wpa::WavePacket state = wpa::make_gaussian(1.0, 1.0, -10.0, au);
        const TimeGrid grid = TimeGrid::log_spaced(1e2, 1e6, 16);
        const DensityTrace trace =
            wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
        CHECK(fit_exponent(trace, 2.0).asymptotic_exponent == doctest::Approx(-1.0).epsilon(0.05));
    }
    SUBCASE("linear gaussian -> -2") {
        const wpa::WavePacket state = wpa::make_linear_gaussian(1.0, au);
        const TimeGrid grid = TimeGrid::log_spaced(1e2, 1e6, 16);
        const DensityTrace trace =
            wpa::compute_density_trace(state, 0.0, grid, EvolutionRoute::closed_form, au, cfg);
        CHECK(fit_exponent(trace, 2.0).asymptotic_exponent == doctest::Approx(-2.0).epsilon(0.05 / 2.0));
    }
    SUBCASE("synthetic t^{-1} line -> -1 with ~zero residual") {
        const auto est = fit_exponent(synthetic_power_law(-1.0, 7.0, 0.1, 1e4, 16), 1.5);
        CHECK(est.asymptotic_exponent == doctest::Approx(-1.0).epsilon(1e-10));
        CHECK(est.residual < 1e-10);
    }
}

TEST_CASE("exponent estimate is invariant under density rescaling") {
    const DensityTrace base = synthetic_power_law(-2.0, 1.0, 0.1, 1e4, 16);
    DensityTrace scaled = base;
    for (double& d : scaled.density) d *= 7.25e3;

    const auto est_a = fit_exponent(base, 1.5);
    const auto est_b = fit_exponent(scaled, 1.5);
    CHECK(est_a.asymptotic_exponent == doctest::Approx(est_b.asymptotic_exponent).epsilon(1e-13));
    for (std::size_t i = 0; i < est_a.slope_curve.size(); ++i)
        CHECK(est_a.slope_curve[i].second == doctest::Approx(est_b.slope_curve[i].second).epsilon(1e-12));
}

TEST_CASE("exponent estimate is equivariant under time rescaling on a power law") {
    const DensityTrace a = synthetic_power_law(-2.5, 3.0, 0.1, 1e4, 16);
    const DensityTrace b = synthetic_power_law(-2.5, 3.0, 0.7, 7e4, 16);  // t -> 7t
    CHECK(fit_exponent(a, 1.5).asymptotic_exponent ==
          doctest::Approx(fit_exponent(b, 1.5).asymptotic_exponent).epsilon(1e-12));
}

TEST_CASE("degenerate densities raise with offending indices") {
    DensityTrace trace = synthetic_power_law(-1.0, 1.0, 1.0, 100.0, 8);
    trace.density[3] = 0.0;
    trace.density[7] = -1e-30;
    try {
        wpa::log_derivative_curve(trace);
        FAIL("expected degenerate_input");
    } catch (const wpa::degenerate_input& e) {
        REQUIRE(e.indices.size() == 2);
        CHECK(e.indices[0] == 3);
        CHECK(e.indices[1] == 7);
    }
}

TEST_CASE("insufficient span is rejected") {
    const DensityTrace trace = synthetic_power_law(-1.0, 1.0, 1.0, 100.0, 8);  // 2 decades
    CHECK_THROWS_AS(fit_exponent(trace, 1.5), wpa::insufficient_span);
    CHECK_NOTHROW(fit_exponent(trace, 1.0));
}
