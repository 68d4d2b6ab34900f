#pragma once

#include <cmath>

namespace csit {

inline constexpr double kSpeedOfLightMps = 299792458.0;

inline double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

inline double linear_to_db(double value) { return 10.0 * std::log10(value); }

inline double ms_to_s(double value_ms) { return value_ms * 1e-3; }

inline double ghz_to_hz(double value_ghz) { return value_ghz * 1e9; }

}  // namespace csit
