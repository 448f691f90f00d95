// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cmath>
#include <limits>

namespace secbeam {

// All internal arithmetic is carried in watts and linear ratios; dB and dBm
// appear only at configuration parse and report emission.

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

inline double watts_to_dbm(double w) {
    if (w <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(w * 1e3);
}

}  // namespace secbeam
