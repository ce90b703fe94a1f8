#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "solitonforge/errors.hpp"

namespace solitonforge {

/// count values log-spaced in [lo, hi], endpoints included. Requires 0 < lo <= hi.
inline std::vector<double> log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi >= lo) || count < 1)
        throw ParameterError("log_spaced: need 0 < lo <= hi and count >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out.push_back(std::exp(llo + t * (lhi - llo)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

inline std::vector<double> linear_spaced(double lo, double hi, int count) {
    if (count < 1) throw ParameterError("linear_spaced: count >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    return out;
}

/// |a - b| <= tol * max(1, |a|, |b|). The floor keeps the comparison meaningful
/// near zero, where a pure relative test degenerates.
inline bool close_rel(double a, double b, double tol) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Log-spaced sampling grid for radial residual sweeps.
struct GridSpec {
    double r_min = 1e-2;
    double r_max = 1e2;
    int count = 1000;

    std::vector<double> points() const { return log_spaced(r_min, r_max, count); }
    std::string describe() const;
};

inline std::string GridSpec::describe() const {
    return std::to_string(count) + " log-spaced r in [" + std::to_string(r_min) + ", " +
           std::to_string(r_max) + "]";
}

} // namespace solitonforge
