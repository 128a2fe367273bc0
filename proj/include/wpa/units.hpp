#pragma once

#include <numbers>

#include "wpa/errors.hpp"

namespace wpa {

/// Physical constants of the run. h is derived from hbar so the relation
/// h = 2 pi hbar holds exactly.
struct UnitSystem {
    double hbar = 1.0;
    double mass = 1.0;

    double h() const { return 2.0 * std::numbers::pi * hbar; }

    void validate() const {
        if (!(hbar > 0.0)) throw invalid_input("UnitSystem: hbar must be > 0");
        if (!(mass > 0.0)) throw invalid_input("UnitSystem: mass must be > 0");
    }

    /// hbar = m = 1.
    static UnitSystem atomic() { return {1.0, 1.0}; }
};

}  // namespace wpa
