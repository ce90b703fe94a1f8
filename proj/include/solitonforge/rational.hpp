#pragma once

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "solitonforge/errors.hpp"

namespace solitonforge {

/// Exact arithmetic for the soliton constants. Desk-scale numerators and
/// denominators fit comfortably in 64 bits.
using Rational = boost::rational<long long>;

inline double to_double(const Rational& q) {
    return boost::rational_cast<double>(q);
}

inline std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

/// Parses "p", "-p" or "p/q". Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(std::string_view text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    const auto parse_ll = [](std::string_view s) -> std::optional<long long> {
        if (s.empty()) return std::nullopt;
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(std::string(s), &pos);
        } catch (const std::exception&) {
            return std::nullopt;
        }
        if (pos != s.size()) return std::nullopt;
        return v;
    };
    if (slash == std::string_view::npos) {
        auto num = parse_ll(text);
        if (!num) return std::nullopt;
        return Rational(*num);
    }
    auto num = parse_ll(text.substr(0, slash));
    auto den = parse_ll(text.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
}

/// A real number that remembers an exact rational value when one is known.
/// Constructors from integers and rationals preserve exactness; plain doubles
/// stay approximate.
struct ExactScalar {
    double value = 0.0;
    std::optional<Rational> exact;

    ExactScalar() = default;
    ExactScalar(double v) : value(v) {}                                     // NOLINT(google-explicit-constructor)
    ExactScalar(int v) : value(v), exact(Rational(v)) {}                    // NOLINT(google-explicit-constructor)
    ExactScalar(const Rational& q) : value(to_double(q)), exact(q) {}       // NOLINT(google-explicit-constructor)

    bool is_exact() const { return exact.has_value(); }
};

} // namespace solitonforge
