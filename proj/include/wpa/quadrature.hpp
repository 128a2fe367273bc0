#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "wpa/errors.hpp"

namespace wpa {

/// Tolerances and limits shared by every quadrature-backed operation.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_subdivisions = 4000;
    /// Integration-domain truncation in units of the state's momentum spread.
    double momentum_cutoff_sigmas = 12.0;

    void validate() const {
        if (!(rel_tol > 0.0) || rel_tol > 1e-3) throw invalid_input("QuadratureConfig: rel_tol must lie in (0, 1e-3]");
        if (!(abs_tol >= 0.0)) throw invalid_input("QuadratureConfig: abs_tol must be >= 0");
        if (max_subdivisions < 10) throw invalid_input("QuadratureConfig: max_subdivisions must be >= 10");
        if (!(momentum_cutoff_sigmas > 0.0)) throw invalid_input("QuadratureConfig: momentum_cutoff_sigmas must be > 0");
    }
};

template <class Value>
struct QuadratureOutcome {
    Value value{};
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

namespace quad_detail {

// Gauss 7 / Kronrod 15 nodes and weights (QUADPACK dqk15).
template <class Real>
struct GK15 {
    static constexpr Real xgk[8] = {
        Real(0.991455371120812639206854697526329L), Real(0.949107912342758524526189684047851L),
        Real(0.864864423359769072789712788640926L), Real(0.741531185599394439863864773280788L),
        Real(0.586087235467691130294144838258730L), Real(0.405845151377397166906606412076961L),
        Real(0.207784955007898467600689403773245L), Real(0.0L)};
    static constexpr Real wgk[8] = {
        Real(0.022935322010529224963732008058970L), Real(0.063092092629978553290700663189204L),
        Real(0.104790010322250183839876322541518L), Real(0.140653259715525918745189590510238L),
        Real(0.169004726639267902826583426598550L), Real(0.190350578064785409913256402421014L),
        Real(0.204432940075298892414161999234649L), Real(0.209482141084727828012999174891714L)};
    static constexpr Real wg[4] = {
        Real(0.129484966168869693270611432679082L), Real(0.279705391489276667901467771423780L),
        Real(0.381830050505118944950369775488975L), Real(0.417959183673469387755102040816327L)};
};

template <class Real, class Value, class F>
void kronrod_panel(F& f, Real a, Real b, Value& value, Real& err) {
    using G = GK15<Real>;
    const Real center = (a + b) / 2;
    const Real half = (b - a) / 2;

    Value fc = f(center);
    Value gauss = G::wg[3] * fc;
    Value kronrod = G::wgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const Real dx = half * G::xgk[i];
        const Value pair = f(center - dx) + f(center + dx);
        kronrod += G::wgk[i] * pair;
        if (i % 2 == 1) gauss += G::wg[i / 2] * pair;
    }
    value = kronrod * Value(half);
    err = static_cast<Real>(std::abs(Value(kronrod - gauss) * Value(half)));
}

}  // namespace quad_detail

/// Adaptive Gauss-Kronrod integration over a list of initial panels given by
/// consecutive breakpoints. Value may be real or complex; Real selects the
/// working precision (double in the library, long double in test oracles).
template <class Value, class Real = double, class F>
QuadratureOutcome<Value> integrate_adaptive(F&& f, const std::vector<Real>& breakpoints, double rel_tol,
                                            double abs_tol, int max_subdivisions) {
    struct Segment {
        Real a, b, err;
        Value val;
        bool operator<(const Segment& o) const { return err < o.err; }
    };

    QuadratureOutcome<Value> out;
    if (breakpoints.size() < 2) {
        out.converged = true;
        return out;
    }

    std::priority_queue<Segment> queue;
    Value total{};
    Real total_err = 0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        Segment s{breakpoints[i], breakpoints[i + 1], 0, Value{}};
        if (s.a == s.b) continue;
        quad_detail::kronrod_panel<Real, Value>(f, s.a, s.b, s.val, s.err);
        out.evaluations += 15;
        total += s.val;
        total_err += s.err;
        queue.push(s);
    }

    int splits = 0;
    while (!queue.empty()) {
        const double tolerance = std::max(abs_tol, rel_tol * static_cast<double>(std::abs(total)));
        if (static_cast<double>(total_err) <= tolerance) break;
        if (splits >= max_subdivisions) break;
        Segment worst = queue.top();
        queue.pop();
        total -= worst.val;
        total_err -= worst.err;

        const Real mid = (worst.a + worst.b) / 2;
        if (mid <= worst.a || mid >= worst.b) {  // interval at floating-point resolution
            total += worst.val;
            total_err += worst.err;
            break;
        }
        for (int side = 0; side < 2; ++side) {
            Segment s{side == 0 ? worst.a : mid, side == 0 ? mid : worst.b, 0, Value{}};
            quad_detail::kronrod_panel<Real, Value>(f, s.a, s.b, s.val, s.err);
            out.evaluations += 15;
            total += s.val;
            total_err += s.err;
            queue.push(s);
        }
        ++splits;
    }

    out.value = total;
    out.error = static_cast<double>(total_err);
    out.converged = out.error <= std::max(abs_tol, rel_tol * static_cast<double>(std::abs(total)));
    return out;
}

template <class Value, class Real = double, class F>
QuadratureOutcome<Value> integrate_adaptive(F&& f, Real a, Real b, double rel_tol, double abs_tol,
                                            int max_subdivisions) {
    return integrate_adaptive<Value, Real>(static_cast<F&&>(f), std::vector<Real>{a, b}, rel_tol, abs_tol,
                                           max_subdivisions);
}

}  // namespace wpa
