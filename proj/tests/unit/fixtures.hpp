#pragma once

#include <cmath>
#include <random>
#include <string>

#include "sfl/group_config.hpp"
#include "sfl/schottky.hpp"
#include "sfl/thermo.hpp"

namespace fx {

inline std::string group_path(const std::string& name) { return std::string(SFL_DATA_DIR) + "/groups/" + name; }

inline const sfl::SchottkyGroup& dense() {
    static const sfl::SchottkyGroup g(sfl::dense4());
    return g;
}

inline const sfl::SchottkyGroup& fuchsian() {
    static const sfl::SchottkyGroup g(sfl::fuchsian4());
    return g;
}

// Depth-8 exponents, frozen after agreeing with the pressure oracle in test_thermo.
inline constexpr double kDeltaDense = 0.4297133459;
inline constexpr double kDeltaFuchsian = 0.4334751877;

inline const sfl::PSMeasure& dense_mu() {
    static const sfl::PSMeasure mu(dense(), kDeltaDense, 8);
    return mu;
}

inline const sfl::PSMeasure& fuchsian_mu() {
    static const sfl::PSMeasure mu(fuchsian(), kDeltaFuchsian, 8);
    return mu;
}

inline sfl::MoebiusMap random_map(std::mt19937_64& rng, double spread = 2.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    for (;;) {
        const sfl::cplx a(u(rng), u(rng)), b(u(rng), u(rng)), c(u(rng), u(rng)), d(u(rng), u(rng));
        if (std::abs(a * d - b * c) > 0.1) return sfl::MoebiusMap(a, b, c, d);
    }
}

inline sfl::cplx random_point(std::mt19937_64& rng, double spread = 3.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    return {u(rng), u(rng)};
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace fx
