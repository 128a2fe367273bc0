#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wpa {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rejected argument (non-finite input, bad configuration value).
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& msg) : error(msg) {}
};

/// A result exceeds the representable floating-point range.
class overflow_error : public error {
public:
    explicit overflow_error(const std::string& msg) : error(msg) {}
};

/// Argument outside the mathematical domain of the operation.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

/// Quadrature or fit failed to reach the requested tolerance.
/// Carries the best estimate obtained and its error bound.
class non_convergence : public error {
public:
    non_convergence(const std::string& msg, std::complex<double> best, double bound)
        : error(msg + " (best estimate " + std::to_string(best.real()) + (best.imag() < 0 ? "-" : "+")
                + std::to_string(std::abs(best.imag())) + "i, error bound " + std::to_string(bound) + ")"),
          best_estimate(best),
          error_bound(bound) {}

    std::complex<double> best_estimate;
    double error_bound;
};

/// Input data that is structurally unusable (e.g. zero densities in a
/// logarithmic derivative). Lists the offending indices.
class degenerate_input : public error {
public:
    degenerate_input(const std::string& msg, std::vector<std::size_t> bad)
        : error(msg + " at indices " + join(bad)), indices(std::move(bad)) {}

    std::vector<std::size_t> indices;

private:
    static std::string join(const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size() && i < 16; ++i) s += (i ? "," : "") + std::to_string(v[i]);
        if (v.size() > 16) s += ",...";
        return s;
    }
};

/// Data does not span enough decades for the requested fit window.
class insufficient_span : public error {
public:
    explicit insufficient_span(const std::string& msg) : error(msg) {}
};

/// The operation has no implementation for this wave-packet variant.
class unsupported_variant : public error {
public:
    explicit unsupported_variant(const std::string& msg) : error(msg) {}
};

/// A documented precondition of the operation does not hold.
class precondition_violation : public error {
public:
    explicit precondition_violation(const std::string& msg) : error(msg) {}
};

}  // namespace wpa
