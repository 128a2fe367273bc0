#include "wpa/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "wpa/errors.hpp"

namespace wpa {
namespace {

constexpr Complex kI{0.0, 1.0};

// Tight settings for construction-time normalization integrals.
constexpr double kNormRelTol = 1e-13;
constexpr int kNormMaxSubdiv = 20000;

double require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw invalid_input(std::string(name) + " must be positive and finite");
    return v;
}

double require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw invalid_input(std::string(name) + " must be finite");
    return v;
}

// |amplitude|^2 integral over the support, with the normalization constant
// factored out (the integrand is the unnormalized amplitude squared).
template <class F>
double norm_integral(F&& unnormalized_sq, double lo, double hi) {
    auto out = integrate_adaptive<double>(unnormalized_sq, std::vector<double>{lo, 0.5 * (lo + hi), hi},
                                          kNormRelTol, 0.0, kNormMaxSubdiv);
    if (!out.converged)
        throw non_convergence("normalization quadrature did not converge", out.value, out.error);
    return out.value;
}

}  // namespace

WavePacket make_truncated_gaussian(double alpha, double delta, double p0, double x0, const UnitSystem& units) {
    units.validate();
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw invalid_input("alpha must be >= 0 and finite");
    require_positive(delta, "delta");
    require_finite(p0, "p0");
    require_finite(x0, "x0");
    if (alpha == 0.0) throw invalid_input("alpha = 0 leaves the truncated Gaussian identically zero");

    const double hbar = units.hbar;
    const double sigma = hbar / (std::numbers::sqrt2 * delta);
    const double lo = std::max(0.0, p0 - 14.0 * sigma);
    const double hi = p0 + 14.0 * sigma;
    const auto sq = [&](double p) {
        const double cut = 1.0 - std::exp(-alpha * p * p / (hbar * hbar));
        const double gauss = std::exp(-2.0 * delta * delta * (p - p0) * (p - p0) / (hbar * hbar));
        return cut * cut * gauss;
    };
    const double c = 1.0 / std::sqrt(norm_integral(sq, lo, hi));
    return TruncatedGaussian{alpha, delta, p0, x0, c};
}

WavePacket make_gaussian(double delta, double p0, double x0, const UnitSystem& units) {
    units.validate();
    require_positive(delta, "delta");
    require_finite(p0, "p0");
    require_finite(x0, "x0");
    // int e^{-2 delta^2 (p-p0)^2/hbar^2} dp = hbar sqrt(pi/2)/delta
    const double cprime = std::sqrt(delta / units.hbar) * std::pow(2.0 / std::numbers::pi, 0.25);
    return Gaussian{delta, p0, x0, cprime};
}

WavePacket make_lorentzian_squared(double alpha, const UnitSystem& units) {
    units.validate();
    require_positive(alpha, "alpha");
    return LorentzianSquared{alpha, std::sqrt(2.0 * alpha * alpha * alpha / std::numbers::pi)};
}

WavePacket make_linear_gaussian(double beta, const UnitSystem& units) {
    units.validate();
    require_positive(beta, "beta");
    return LinearGaussian{beta, 2.0 / (std::pow(std::numbers::pi, 0.25) * std::pow(beta, 0.75))};
}

WavePacket make_taylor_stub(Complex c1, Complex c2, double cutoff, const UnitSystem& units) {
    units.validate();
    require_positive(cutoff, "cutoff");
    if (!std::isfinite(c1.real()) || !std::isfinite(c1.imag()) || !std::isfinite(c2.real()) ||
        !std::isfinite(c2.imag()))
        throw invalid_input("c1 and c2 must be finite");
    if (std::abs(c1) == 0.0 && std::abs(c2) == 0.0) throw invalid_input("c1 and c2 cannot both vanish");

    const double hi = cutoff * (14.0 / std::numbers::sqrt2);
    const auto sq = [&](double p) {
        const double env = std::exp(-2.0 * p * p / (cutoff * cutoff));
        return std::norm(c1 * p + c2 * p * p) * env;
    };
    const double scale = 1.0 / std::sqrt(norm_integral(sq, 0.0, hi));
    return TaylorStub{scale * c1, scale * c2, cutoff};
}

Complex momentum_amplitude(const WavePacket& state, double p, const UnitSystem& units) {
    if (!std::isfinite(p)) throw invalid_input("momentum_amplitude: p must be finite");
    const double hbar = units.hbar;
    return std::visit(
        [&](const auto& s) -> Complex {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) {
                if (p <= 0.0) return {0.0, 0.0};
                const double cut = 1.0 - std::exp(-s.alpha * p * p / (hbar * hbar));
                const Complex expo{-s.delta * s.delta * (p - s.p0) * (p - s.p0) / (hbar * hbar),
                                   -p * s.x0 / hbar};
                return s.norm * cut * std::exp(expo);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const Complex expo{-s.delta * s.delta * (p - s.p0) * (p - s.p0) / (hbar * hbar),
                                   -p * s.x0 / hbar};
                return s.norm * std::exp(expo);
            } else if constexpr (std::is_same_v<T, LorentzianSquared>) {
                if (p <= 0.0) return {0.0, 0.0};
                return {-2.0 * std::pow(s.alpha / hbar, 1.5) * p * std::exp(-s.alpha * p / hbar), 0.0};
            } else if constexpr (std::is_same_v<T, LinearGaussian>) {
                if (p <= 0.0) return {0.0, 0.0};
                return {s.norm * p * std::exp(-p * p / (2.0 * s.beta)), 0.0};
            } else {
                if (p <= 0.0) return {0.0, 0.0};
                return (s.c1 * p + s.c2 * p * p) * std::exp(-p * p / (s.cutoff * s.cutoff));
            }
        },
        state);
}

Complex position_wavefunction_initial(const WavePacket& state, double x, const UnitSystem& units) {
    if (!std::isfinite(x)) throw invalid_input("position_wavefunction_initial: x must be finite");
    if (const auto* ls = std::get_if<LorentzianSquared>(&state)) {
        const Complex den{x, ls->alpha};
        return ls->norm / (den * den);
    }

    // psi(x,0) = h^{-1/2} int e^{i p x/hbar} <p|psi> dp
    const auto [lo, hi] = momentum_support(state, 14.0, units);
    const double osc = 2.0 * std::numbers::pi * units.hbar / std::max(std::abs(x), 1e-300);
    const double step = std::max(osc, (hi - lo) / 4096.0);
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / step)));
    std::vector<double> breaks;
    breaks.reserve(panels + 1);
    for (int i = 0; i <= panels; ++i) breaks.push_back(lo + (hi - lo) * i / panels);

    const auto f = [&](double p) { return momentum_amplitude(state, p, units) * std::exp(kI * p * x / units.hbar); };
    auto out = integrate_adaptive<Complex>(f, breaks, 1e-11, 1e-14, kNormMaxSubdiv);
    if (!out.converged)
        throw non_convergence("position_wavefunction_initial quadrature did not converge", out.value, out.error);
    return out.value / std::sqrt(units.h());
}

double normalization_constant(const WavePacket& state, const UnitSystem& units) {
    units.validate();
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TaylorStub>)
                return 1.0;  // normalization is absorbed into the stored coefficients
            else
                return s.norm;
        },
        state);
}

std::pair<Complex, Complex> taylor_coefficients(const WavePacket& state, const UnitSystem& units) {
    const double hbar = units.hbar;
    return std::visit(
        [&](const auto& s) -> std::pair<Complex, Complex> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) {
                // amplitude = C (alpha p^2/hbar^2 + O(p^4)) G(p), G(0) = e^{-delta^2 p0^2/hbar^2}
                const double g0 = std::exp(-s.delta * s.delta * s.p0 * s.p0 / (hbar * hbar));
                return {Complex{0.0, 0.0}, Complex{s.norm * s.alpha / (hbar * hbar) * g0, 0.0}};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                // G(p) = C' e^{phi(p)}, phi = -delta^2 (p-p0)^2/hbar^2 - i p x0/hbar
                const Complex g0 = s.norm * std::exp(Complex{-s.delta * s.delta * s.p0 * s.p0 / (hbar * hbar), 0.0});
                const Complex phi1{2.0 * s.delta * s.delta * s.p0 / (hbar * hbar), -s.x0 / hbar};
                const double phi2 = -2.0 * s.delta * s.delta / (hbar * hbar);
                return {phi1 * g0, 0.5 * (phi2 + phi1 * phi1) * g0};
            } else if constexpr (std::is_same_v<T, LorentzianSquared>) {
                const double k = -2.0 * std::pow(s.alpha / hbar, 1.5);
                return {Complex{k, 0.0}, Complex{-k * s.alpha / hbar, 0.0}};
            } else if constexpr (std::is_same_v<T, LinearGaussian>) {
                return {Complex{s.norm, 0.0}, Complex{0.0, 0.0}};
            } else {
                return {s.c1, s.c2};
            }
        },
        state);
}

bool theta_truncated(const WavePacket& state) { return !std::holds_alternative<Gaussian>(state); }

std::pair<double, double> momentum_support(const WavePacket& state, double n_sigmas, const UnitSystem& units) {
    const double hbar = units.hbar;
    const double suppression = 0.5 * n_sigmas * n_sigmas;  // -log of the neglected amplitude factor
    return std::visit(
        [&](const auto& s) -> std::pair<double, double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) {
                const double sigma = hbar / (std::numbers::sqrt2 * s.delta);
                return {std::max(0.0, s.p0 - n_sigmas * sigma), s.p0 + n_sigmas * sigma};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const double sigma = hbar / (std::numbers::sqrt2 * s.delta);
                return {s.p0 - n_sigmas * sigma, s.p0 + n_sigmas * sigma};
            } else if constexpr (std::is_same_v<T, LorentzianSquared>) {
                return {0.0, suppression * hbar / s.alpha};
            } else if constexpr (std::is_same_v<T, LinearGaussian>) {
                return {0.0, n_sigmas * std::sqrt(s.beta)};
            } else {
                return {0.0, n_sigmas * s.cutoff / std::numbers::sqrt2};
            }
        },
        state);
}

double position_center(const WavePacket& state) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian> || std::is_same_v<T, Gaussian>)
                return s.x0;
            else
                return 0.0;
        },
        state);
}

std::string variant_name(const WavePacket& state) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, TruncatedGaussian>) return "truncated_gaussian";
            if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
            if constexpr (std::is_same_v<T, LorentzianSquared>) return "lorentzian_squared";
            if constexpr (std::is_same_v<T, LinearGaussian>) return "linear_gaussian";
            return "taylor_stub";
        },
        state);
}

namespace {

WavePacket build_from_fields(const std::string& name, const nlohmann::json& fields, const UnitSystem& units) {
    auto get = [&](const char* key, double fallback) -> double {
        if (!fields.contains(key)) return fallback;
        return fields.at(key).get<double>();
    };
    if (name == "truncated_gaussian")
        return make_truncated_gaussian(get("alpha", 0.5), get("delta", 1.0), get("p0", 1.0), get("x0", -10.0), units);
    if (name == "gaussian") return make_gaussian(get("delta", 1.0), get("p0", 1.0), get("x0", -10.0), units);
    if (name == "lorentzian_squared") return make_lorentzian_squared(get("alpha", 1.0), units);
    if (name == "linear_gaussian") return make_linear_gaussian(get("beta", 1.0), units);
    if (name == "taylor_stub")
        return make_taylor_stub(Complex{get("c1_re", 1.0), get("c1_im", 0.0)},
                                Complex{get("c2_re", 0.0), get("c2_im", 0.0)}, get("cutoff", 1.0), units);
    throw invalid_input("unknown state '" + name + "'");
}

}  // namespace

WavePacket parse_state_spec(const std::string& text, const UnitSystem& units) {
    nlohmann::json fields;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        fields = nlohmann::json::parse(text, nullptr, false);
        if (fields.is_discarded() || !fields.is_object())
            throw invalid_input("parse_state_spec: malformed JSON state spec");
    } else {
        std::istringstream in(text);
        std::string token;
        while (in >> token) {
            const auto eq = token.find('=');
            if (eq == std::string::npos || eq == 0)
                throw invalid_input("parse_state_spec: expected key=value, got '" + token + "'");
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "state") {
                fields[key] = value;
            } else {
                try {
                    std::size_t used = 0;
                    const double v = std::stod(value, &used);
                    if (used != value.size()) throw std::invalid_argument(value);
                    fields[key] = v;
                } catch (const std::exception&) {
                    throw invalid_input("parse_state_spec: non-numeric value for '" + key + "'");
                }
            }
        }
    }
    if (!fields.contains("state")) throw invalid_input("parse_state_spec: missing 'state' key");
    return build_from_fields(fields.at("state").get<std::string>(), fields, units);
}

}  // namespace wpa
