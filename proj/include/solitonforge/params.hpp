#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "solitonforge/errors.hpp"
#include "solitonforge/rational.hpp"

namespace solitonforge {

inline Rational schouten_rho_exact(int n) { return Rational(1, 2LL * (n - 1)); }
inline double schouten_rho(int n) { return 1.0 / (2.0 * (n - 1)); }

/// Dimensions and constants of one soliton configuration: base dimension n,
/// fiber dimension m, flow constant rho, fiber Einstein constant lambda_F and
/// soliton constant lambda~. Exact rational copies ride along whenever the
/// inputs were exact.
struct SolitonParams {
    int n = 3;
    int m = 2;
    double rho = 0.25;
    double lambdaF = 0.0;
    double lambdaTilde = 0.0;

    std::optional<Rational> rho_exact;
    std::optional<Rational> lambdaF_exact;
    std::optional<Rational> lambdaTilde_exact;

    static SolitonParams make(int n, int m, ExactScalar rho, ExactScalar lambdaF,
                              ExactScalar lambdaTilde) {
        if (n < 3) throw ParameterError("SolitonParams: n >= 3 required");
        if (m < 1) throw ParameterError("SolitonParams: m >= 1 required");
        if (rho.value == 0.0) throw ParameterError("SolitonParams: rho must be nonzero");
        SolitonParams p;
        p.n = n;
        p.m = m;
        p.rho = rho.value;
        p.lambdaF = lambdaF.value;
        p.lambdaTilde = lambdaTilde.value;
        p.rho_exact = rho.exact;
        p.lambdaF_exact = lambdaF.exact;
        p.lambdaTilde_exact = lambdaTilde.exact;
        return p;
    }

    bool is_schouten() const {
        if (rho_exact) return *rho_exact == schouten_rho_exact(n);
        return std::abs(rho - schouten_rho(n)) <= 1e-15;
    }
};

enum class SolitonType { Shrinking, Steady, Expanding };

/// Sign convention: lambda~ > 0 shrinking, = 0 steady, < 0 expanding.
inline SolitonType soliton_type(double lambdaTilde, double zero_tol = 0.0) {
    if (lambdaTilde > zero_tol) return SolitonType::Shrinking;
    if (lambdaTilde < -zero_tol) return SolitonType::Expanding;
    return SolitonType::Steady;
}

inline std::string to_string(SolitonType t) {
    switch (t) {
        case SolitonType::Shrinking: return "shrinking";
        case SolitonType::Steady: return "steady";
        default: return "expanding";
    }
}

} // namespace solitonforge
