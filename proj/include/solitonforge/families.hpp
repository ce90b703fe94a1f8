#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "solitonforge/errors.hpp"
#include "solitonforge/params.hpp"
#include "solitonforge/profile.hpp"
#include "solitonforge/rational.hpp"

namespace solitonforge {

/// Which side of r = 0 a linear-factor solution lives on. The square-root and
/// logarithmic family only exists on r > 0.
enum class RadialBranch { Positive, Negative };

/// Linear conformal factor family: psi = k2 r with inverse-linear potential.
struct FamilyASolution {
    SolitonParams params; // rho = 1/(2(n-1))
    double k2 = 1.0;
    double k1 = 0.0;
    RadialBranch branch = RadialBranch::Positive;
    bool constant_potential = false;
};

/// Square-root conformal factor family: psi = k2 sqrt(r) with log-quadratic
/// potential; lambda_F and lambda~ are forced by (n, m, k2).
struct FamilyBSolution {
    SolitonParams params;
    double k2 = 1.0;
    double c = 0.0;
    double c1 = 0.0;
};

inline ExactScalar family_A_lambda_tilde(int n, int m, const ExactScalar& lambdaF) {
    // lambda~ = -lambda_F (m - 2n + 2) / (2(n-1))
    const long long num = m - 2LL * n + 2LL;
    const long long den = 2LL * (n - 1);
    ExactScalar out(-lambdaF.value * static_cast<double>(num) / static_cast<double>(den));
    if (lambdaF.exact) out.exact = -(*lambdaF.exact) * Rational(num, den);
    if (out.exact) out.value = to_double(*out.exact);
    return out;
}

inline ExactScalar family_B_lambda_F(int n, const ExactScalar& k2) {
    ExactScalar out((n - 2) * k2.value * k2.value);
    if (k2.exact) out.exact = Rational(n - 2) * (*k2.exact) * (*k2.exact);
    if (out.exact) out.value = to_double(*out.exact);
    return out;
}

inline ExactScalar family_B_lambda_tilde(int n, int m, const ExactScalar& k2) {
    // lambda~ = -(m - n + 1)(n - 2) k2^2 / (2(n-1))
    const long long num = (m - n + 1LL) * (n - 2LL);
    const long long den = 2LL * (n - 1);
    ExactScalar out(-static_cast<double>(num) / static_cast<double>(den) * k2.value * k2.value);
    if (k2.exact) out.exact = -Rational(num, den) * (*k2.exact) * (*k2.exact);
    if (out.exact) out.value = to_double(*out.exact);
    return out;
}

/// psi = k2 r (branch Positive) or psi = k2 |r| (branch Negative), potential
/// h = lambda_F / (2 k2^2 r) + k1. lambda~ is forced; lambda_F stays free.
/// lambda_F = 0 degenerates the potential to the constant k1; such profiles
/// are constructible and flagged, not rejected.
inline std::pair<FamilyASolution, RadialProfile>
make_family_A(int n, int m, ExactScalar lambdaF, ExactScalar k2, double k1 = 0.0,
              RadialBranch branch = RadialBranch::Positive) {
    if (n < 3) throw ParameterError("make_family_A: n >= 3 required");
    if (m < 2) throw ParameterError("make_family_A: m >= 2 required");
    if (!(k2.value > 0.0)) throw ParameterError("make_family_A: k2 must be positive");

    FamilyASolution sol;
    sol.params = SolitonParams::make(n, m, schouten_rho_exact(n), lambdaF,
                                     family_A_lambda_tilde(n, m, lambdaF));
    sol.k2 = k2.value;
    sol.k1 = k1;
    sol.branch = branch;
    sol.constant_potential = lambdaF.value == 0.0;

    const double k2v = k2.value;
    const double hc = lambdaF.value / (2.0 * k2v * k2v);
    // On the negative branch psi = -k2 r keeps the conformal factor positive;
    // the residual systems are invariant under a global sign flip of psi.
    const double sgn = branch == RadialBranch::Positive ? 1.0 : -1.0;

    RadialProfile p;
    p.psi = [k2v, sgn](double r) { return sgn * k2v * r; };
    p.psi1 = [k2v, sgn](double) { return sgn * k2v; };
    p.psi2 = [](double) { return 0.0; };
    p.h = [hc, k1](double r) { return hc / r + k1; };
    p.h1 = [hc](double r) { return -hc / (r * r); };
    p.h2 = [hc](double r) { return 2.0 * hc / (r * r * r); };
    p.domain = branch == RadialBranch::Positive
                   ? Interval{0.0, std::numeric_limits<double>::infinity()}
                   : Interval{-std::numeric_limits<double>::infinity(), 0.0};
    p.constant_potential = sol.constant_potential;
    p.name = "family-A(n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
    return {sol, p};
}

/// psi = k2 sqrt(r), h = (n-2)/8 (ln r)^2 + c ln r + c1 on r > 0. Both
/// lambda_F and lambda~ are forced by (n, m, k2).
inline std::pair<FamilyBSolution, RadialProfile>
make_family_B(int n, int m, ExactScalar k2, double c = 0.0, double c1 = 0.0) {
    if (n < 3) throw ParameterError("make_family_B: n >= 3 required");
    if (m < 2) throw ParameterError("make_family_B: m >= 2 required");
    if (!(k2.value > 0.0)) throw ParameterError("make_family_B: k2 must be positive");

    FamilyBSolution sol;
    sol.params = SolitonParams::make(n, m, schouten_rho_exact(n), family_B_lambda_F(n, k2),
                                     family_B_lambda_tilde(n, m, k2));
    sol.k2 = k2.value;
    sol.c = c;
    sol.c1 = c1;

    const double k2v = k2.value;
    const double q = (n - 2) / 8.0;

    RadialProfile p;
    p.psi = [k2v](double r) { return k2v * std::sqrt(r); };
    p.psi1 = [k2v](double r) { return 0.5 * k2v / std::sqrt(r); };
    p.psi2 = [k2v](double r) { return -0.25 * k2v / (r * std::sqrt(r)); };
    p.h = [q, c, c1](double r) {
        const double lr = std::log(r);
        return q * lr * lr + c * lr + c1;
    };
    p.h1 = [q, c](double r) { return (2.0 * q * std::log(r) + c) / r; };
    p.h2 = [q, c](double r) { return (2.0 * q * (1.0 - std::log(r)) - c) / (r * r); };
    p.domain = Interval{0.0, std::numeric_limits<double>::infinity()};
    p.name = "family-B(n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")";
    return {sol, p};
}

} // namespace solitonforge
