// Command-line front end: configures a wave packet, runs density traces,
// decay-exponent fits, dwell-time reports, the two-packet slope figure, and
// the w-function identity-residual table. Emits CSV/JSON artifacts with a
// config header line so every file is reproducible on its own.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wpa/asymptotics.hpp"
#include "wpa/complexfn.hpp"
#include "wpa/dwell.hpp"
#include "wpa/errors.hpp"
#include "wpa/propagator.hpp"
#include "wpa/states.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string state = "truncated_gaussian";
    double alpha = 0.5;
    double delta = 1.0;
    double p0 = 1.0;
    double x0 = -10.0;
    double beta = 1.0;
    double c1_re = 1.0, c1_im = 0.0, c2_re = 0.0, c2_im = 0.0;
    double cutoff = 1.0;
    double x = 0.0;
    double a = -1.0;
    double b = 1.0;
    double tmin = 0.1;
    double tmax = 1e6;
    int per_decade = 16;
    std::string route = "auto";
    std::string out;
    std::string format = "csv";
    double hbar = 1.0;
    double mass = 1.0;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

wpa::WavePacket build_state(const Options& opt, const wpa::UnitSystem& units) {
    if (opt.state == "truncated_gaussian")
        return wpa::make_truncated_gaussian(opt.alpha, opt.delta, opt.p0, opt.x0, units);
    if (opt.state == "gaussian") return wpa::make_gaussian(opt.delta, opt.p0, opt.x0, units);
    if (opt.state == "lorentzian_squared") return wpa::make_lorentzian_squared(opt.alpha, units);
    if (opt.state == "linear_gaussian") return wpa::make_linear_gaussian(opt.beta, units);
    if (opt.state == "taylor_stub")
        return wpa::make_taylor_stub({opt.c1_re, opt.c1_im}, {opt.c2_re, opt.c2_im}, opt.cutoff, units);
    throw wpa::invalid_input("unknown state '" + opt.state + "'");
}

bool state_has_closed_form(const wpa::WavePacket& state) {
    return std::holds_alternative<wpa::TruncatedGaussian>(state) ||
           std::holds_alternative<wpa::Gaussian>(state) || std::holds_alternative<wpa::LinearGaussian>(state);
}

wpa::EvolutionRoute resolve_route(const Options& opt, const wpa::WavePacket& state) {
    if (opt.route == "closed_form") return wpa::EvolutionRoute::closed_form;
    if (opt.route == "quadrature") return wpa::EvolutionRoute::quadrature;
    if (opt.route == "auto")
        return state_has_closed_form(state) ? wpa::EvolutionRoute::closed_form
                                            : wpa::EvolutionRoute::quadrature;
    throw wpa::invalid_input("route '" + opt.route + "' not valid here");
}

nlohmann::json config_json(const std::string& command, const Options& opt) {
    nlohmann::json j;
    j["command"] = command;
    j["state"] = opt.state;
    j["alpha"] = opt.alpha;
    j["delta"] = opt.delta;
    j["p0"] = opt.p0;
    j["x0"] = opt.x0;
    j["beta"] = opt.beta;
    j["cutoff"] = opt.cutoff;
    j["x"] = opt.x;
    j["a"] = opt.a;
    j["b"] = opt.b;
    j["tmin"] = opt.tmin;
    j["tmax"] = opt.tmax;
    j["per_decade"] = opt.per_decade;
    j["route"] = opt.route;
    j["format"] = opt.format;
    j["hbar"] = opt.hbar;
    j["mass"] = opt.mass;
    return j;
}

wpa::QuadratureConfig quad_config() {
    wpa::QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-16;
    cfg.max_subdivisions = 20000;
    if (const char* tol = std::getenv("WPA_TOL")) {
        cfg.rel_tol = std::strtod(tol, nullptr);
    }
    cfg.validate();
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    if (path.empty()) throw wpa::invalid_input("--out is required");
    std::ofstream file(path);
    if (!file) throw wpa::invalid_input("cannot open output path '" + path + "'");
    return file;
}

wpa::TimeGrid build_grid(const Options& opt) {
    return wpa::TimeGrid::log_spaced(opt.tmin, opt.tmax, opt.per_decade);
}

int run_density(const Options& opt) {
    const wpa::UnitSystem units{opt.hbar, opt.mass};
    const wpa::WavePacket state = build_state(opt, units);
    const wpa::TimeGrid grid = build_grid(opt);
    const auto cfg = quad_config();

    auto file = open_output(opt.out);
    file << "# " << config_json("density", opt).dump() << "\n";

    if (opt.route == "both") {
        const auto cf = wpa::compute_density_trace(state, opt.x, grid, wpa::EvolutionRoute::closed_form, units, cfg);
        const auto q = wpa::compute_density_trace(state, opt.x, grid, wpa::EvolutionRoute::quadrature, units, cfg);
        double peak = 1e-300, dev = 0.0;
        for (std::size_t i = 0; i < grid.values.size(); ++i) peak = std::max(peak, cf.density[i]);
        for (std::size_t i = 0; i < grid.values.size(); ++i)
            dev = std::max(dev, std::abs(cf.density[i] - q.density[i]) / peak);

        if (opt.format == "json") {
            nlohmann::json j;
            j["config"] = config_json("density", opt);
            auto rows = nlohmann::json::array();
            for (std::size_t i = 0; i < grid.values.size(); ++i)
                rows.push_back({grid.values[i], cf.density[i], q.density[i]});
            j["columns"] = {"t", "rho_closed_form", "rho_quadrature"};
            j["rows"] = rows;
            j["max_deviation"] = dev;
            file << j.dump(2) << "\n";
            return kExitOk;
        }
        file << "t,rho_closed_form,rho_quadrature\n";
        for (std::size_t i = 0; i < grid.values.size(); ++i)
            file << fmt(grid.values[i]) << ',' << fmt(cf.density[i]) << ',' << fmt(q.density[i]) << "\n";
        nlohmann::json tail;
        tail["max_deviation"] = dev;  // relative to the trace peak
        file << "# " << tail.dump() << "\n";
        return kExitOk;
    }

    const auto trace = wpa::compute_density_trace(state, opt.x, grid, resolve_route(opt, state), units, cfg);
    if (opt.format == "json") {
        nlohmann::json j;
        j["config"] = config_json("density", opt);
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < grid.values.size(); ++i) rows.push_back({grid.values[i], trace.density[i]});
        j["columns"] = {"t", "rho"};
        j["rows"] = rows;
        file << j.dump(2) << "\n";
        return kExitOk;
    }
    file << "t,rho\n";
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        file << fmt(grid.values[i]) << ',' << fmt(trace.density[i]) << "\n";
    return kExitOk;
}

int run_exponent(const Options& opt) {
    const wpa::UnitSystem units{opt.hbar, opt.mass};
    const wpa::WavePacket state = build_state(opt, units);
    const wpa::TimeGrid grid = build_grid(opt);
    const auto cfg = quad_config();
    const double window_decades = 1.5;

    const auto trace = wpa::compute_density_trace(state, opt.x, grid, resolve_route(opt, state), units, cfg);
    const auto est = wpa::fit_exponent(trace, window_decades);

    nlohmann::json summary;
    summary["exponent"] = est.asymptotic_exponent;
    summary["residual"] = est.residual;
    summary["fit_window"] = {est.fit_window.first, est.fit_window.second};
    summary["window_decades"] = window_decades;

    if (opt.format == "json") {
        nlohmann::json j;
        j["config"] = config_json("exponent", opt);
        j["summary"] = summary;
        auto curve = nlohmann::json::array();
        for (const auto& [lt, slope] : est.slope_curve) curve.push_back({lt, slope});
        j["slope_curve"] = curve;
        auto file = open_output(opt.out);
        file << j.dump(2) << "\n";
        return kExitOk;
    }

    auto file = open_output(opt.out);
    file << "# " << config_json("exponent", opt).dump() << "\n";
    file << "ln_t,dlnrho_dlnt\n";
    for (const auto& [lt, slope] : est.slope_curve) file << fmt(lt) << ',' << fmt(slope) << "\n";
    auto side = open_output(opt.out + ".json");
    side << summary.dump(2) << "\n";
    return kExitOk;
}

int run_dwell(const Options& opt) {
    const wpa::UnitSystem units{opt.hbar, opt.mass};
    const wpa::WavePacket state = build_state(opt, units);
    const auto cfg = quad_config();
    const wpa::DwellReport report = wpa::dwell_report(state, {opt.a, opt.b}, units, cfg);

    nlohmann::json j;
    j["config"] = config_json("dwell", opt);
    j["report"] = nlohmann::json::parse(wpa::dwell_report_to_json(report));
    auto file = open_output(opt.out);
    file << j.dump(2) << "\n";
    return kExitOk;
}

int run_figure1(const Options& opt) {
    // the two-packet slope figure: truncated gaussian (solid) vs plain
    // gaussian (dashed) at the standard parameter set, x = 0
    const wpa::UnitSystem units{opt.hbar, opt.mass};
    const auto cfg = quad_config();
    const wpa::WavePacket truncated = wpa::make_truncated_gaussian(0.5, 1.0, 1.0, -10.0, units);
    const wpa::WavePacket plain = wpa::make_gaussian(1.0, 1.0, -10.0, units);
    const wpa::TimeGrid grid = build_grid(opt);

    const auto trace_t =
        wpa::compute_density_trace(truncated, 0.0, grid, wpa::EvolutionRoute::closed_form, units, cfg);
    const auto trace_g =
        wpa::compute_density_trace(plain, 0.0, grid, wpa::EvolutionRoute::closed_form, units, cfg);
    const auto curve_t = wpa::log_derivative_curve(trace_t);
    const auto curve_g = wpa::log_derivative_curve(trace_g);

    auto file = open_output(opt.out);
    if (opt.format == "json") {
        nlohmann::json j;
        j["config"] = config_json("figure1", opt);
        auto rows = nlohmann::json::array();
        for (std::size_t i = 0; i < curve_t.size(); ++i)
            rows.push_back({curve_t[i].first, curve_t[i].second, curve_g[i].second});
        j["columns"] = {"ln_t", "slope_truncated_gaussian", "slope_gaussian"};
        j["rows"] = rows;
        file << j.dump(2) << "\n";
        return kExitOk;
    }
    file << "# " << config_json("figure1", opt).dump() << "\n";
    file << "ln_t,slope_truncated_gaussian,slope_gaussian\n";
    for (std::size_t i = 0; i < curve_t.size(); ++i)
        file << fmt(curve_t[i].first) << ',' << fmt(curve_t[i].second) << ',' << fmt(curve_g[i].second) << "\n";
    return kExitOk;
}

int run_wtest(const Options& opt) {
    // identity residuals on a fixed random cloud |z| <= 5, measured relative
    // to the largest participating term; the series column is evaluated at
    // z/10 to stay inside the Maclaurin branch's domain
    auto file = open_output(opt.out);
    file << "# " << config_json("wtest", opt).dump() << "\n";
    file << "z_re,z_im,reflection,conjugation,derivative,series\n";

    std::mt19937 gen(12345);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    int emitted = 0;
    double worst = 0.0;
    while (emitted < 1000) {
        const wpa::Complex z{coord(gen), coord(gen)};
        if (std::abs(z) > 5.0) continue;
        ++emitted;

        const auto residual = [](wpa::Complex lhs, wpa::Complex rhs, double term_scale) {
            return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), term_scale, 1e-300});
        };
        const wpa::Complex refl = 2.0 * std::exp(-z * z);
        const double r_reflection =
            residual(wpa::faddeeva_w(-z), refl - wpa::faddeeva_w(z), std::abs(refl));
        const double r_conjugation =
            residual(wpa::faddeeva_w(std::conj(z)), std::conj(wpa::faddeeva_w(-z)), 0.0);
        const double r_derivative = residual(wpa::faddeeva_w_derivative_direct(z), wpa::faddeeva_w_derivative(z),
                                             4.0 * std::abs(z * std::exp(-z * z)));
        const wpa::Complex zs = 0.1 * z;
        const double r_series = residual(wpa::faddeeva_w_series(zs, 48), wpa::faddeeva_w(zs), 0.0);

        worst = std::max({worst, r_reflection, r_conjugation, r_derivative, r_series});
        file << fmt(z.real()) << ',' << fmt(z.imag()) << ',' << fmt(r_reflection) << ',' << fmt(r_conjugation)
             << ',' << fmt(r_derivative) << ',' << fmt(r_series) << "\n";
    }
    nlohmann::json tail;
    tail["max_residual"] = worst;
    file << "# " << tail.dump() << "\n";
    return kExitOk;
}

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--state", opt.state,
                    "truncated_gaussian | gaussian | lorentzian_squared | linear_gaussian | taylor_stub");
    cmd->add_option("--alpha", opt.alpha, "suppression scale (truncated_gaussian) or length (lorentzian_squared)");
    cmd->add_option("--delta", opt.delta, "gaussian width parameter");
    cmd->add_option("--p0", opt.p0, "center momentum");
    cmd->add_option("--x0", opt.x0, "center position");
    cmd->add_option("--beta", opt.beta, "linear_gaussian momentum^2 scale");
    cmd->add_option("--c1-re", opt.c1_re, "taylor_stub c1 real part");
    cmd->add_option("--c1-im", opt.c1_im, "taylor_stub c1 imaginary part");
    cmd->add_option("--c2-re", opt.c2_re, "taylor_stub c2 real part");
    cmd->add_option("--c2-im", opt.c2_im, "taylor_stub c2 imaginary part");
    cmd->add_option("--cutoff", opt.cutoff, "taylor_stub momentum cutoff");
    cmd->add_option("--x", opt.x, "evaluation point");
    cmd->add_option("--a", opt.a, "interval left edge (dwell)");
    cmd->add_option("--b", opt.b, "interval right edge (dwell)");
    cmd->add_option("--tmin", opt.tmin, "grid start time");
    cmd->add_option("--tmax", opt.tmax, "grid end time");
    cmd->add_option("--per-decade", opt.per_decade, "grid points per decade");
    cmd->add_option("--route", opt.route, "closed_form | quadrature | both | auto");
    cmd->add_option("--out", opt.out, "output path")->required();
    cmd->add_option("--format", opt.format, "csv | json");
    cmd->add_option("--hbar", opt.hbar, "hbar (atomic units by default)");
    cmd->add_option("--mass", opt.mass, "particle mass");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-particle wave-packet decay and dwell-time toolkit"};
    app.require_subcommand(1);

    Options opt;
    auto* density = app.add_subcommand("density", "|psi(x,t)|^2 over a log time grid");
    auto* exponent = app.add_subcommand("exponent", "log-log slope curve and fitted decay exponent");
    auto* dwell = app.add_subcommand("dwell", "dwell-time report (time/momentum/classical routes)");
    auto* figure1 = app.add_subcommand("figure1", "slope curves of the two standard packets at x = 0");
    auto* wtest = app.add_subcommand("wtest", "w-function identity residual table");
    for (auto* cmd : {density, exponent, dwell, figure1, wtest}) add_common_flags(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (density->parsed()) return run_density(opt);
        if (exponent->parsed()) return run_exponent(opt);
        if (dwell->parsed()) return run_dwell(opt);
        if (figure1->parsed()) return run_figure1(opt);
        if (wtest->parsed()) return run_wtest(opt);
        return kExitConfig;
    } catch (const wpa::invalid_input& e) {
        nlohmann::json err{{"error", "invalid_input"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return kExitConfig;
    } catch (const wpa::error& e) {
        nlohmann::json err{{"error", "numerical_failure"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", "internal"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return kExitNumerical;
    }
}
