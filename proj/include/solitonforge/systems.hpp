#pragma once

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "solitonforge/curvature.hpp"
#include "solitonforge/errors.hpp"
#include "solitonforge/params.hpp"
#include "solitonforge/profile.hpp"
#include "solitonforge/rational.hpp"
#include "solitonforge/signature.hpp"

namespace solitonforge {

// Stable equation identifiers used in reports. R15-R17 form the general-rho
// radial system, R18-R20 its Schouten specialization, R21 the necessary ODE
// for the conformal factor whose solutions are exactly the power laws.
inline constexpr const char* kEqR15 = "R15";
inline constexpr const char* kEqR16 = "R16";
inline constexpr const char* kEqR17 = "R17";
inline constexpr const char* kEqR18 = "R18";
inline constexpr const char* kEqR19 = "R19";
inline constexpr const char* kEqR20 = "R20";
inline constexpr const char* kEqR21 = "R21";
inline constexpr const char* kEqPdeOffDiag = "PDE-offdiag";
inline constexpr const char* kEqPdeDiag = "PDE-diag";
inline constexpr const char* kEqPdeFiber = "PDE-fiber";

/// Residuals of the full coordinate PDE system at a base point x, partials
/// expanded by the radial chain rule. Order of the returned values:
///   [off-diagonal (i,j), i < j, row-major]  (n(n-1)/2 entries)
///   [diagonal i = 0..n-1]                   (n entries)
///   [fiber trace]                           (1 entry)
inline std::vector<double> pde_residuals(const RadialProfile& profile, const Signature& sig,
                                         const SolitonParams& params, const Eigen::VectorXd& x) {
    const int n = sig.dim();
    if (x.size() != n) throw ParameterError("pde_residuals: point dimension mismatch");
    const double r = sig.radial(x);
    const ProfileValues v = eval_checked(profile, r);
    const RadialPartials psi = radial_partials(v.psi1, v.psi2, sig, x);
    const RadialPartials h = radial_partials(v.h1, v.h2, sig, x);
    const double rho = params.rho;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n * (n - 1) / 2 + n + 1));

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.push_back((n - 2) * psi.hess(i, j) + v.psi * h.hess(i, j) +
                          psi.grad[i] * h.grad[j] + psi.grad[j] * h.grad[i]);

    double ssum = 0.0; // signed sum over k of the shared bracket
    for (int k = 0; k < n; ++k) {
        ssum += sig.eps(k) * (v.psi * psi.hess(k, k) - (n - 1) * psi.grad[k] * psi.grad[k] -
                              v.psi * psi.grad[k] * h.grad[k] -
                              2.0 * (n - 1) * rho * v.psi * psi.hess(k, k) +
                              (n - 1) * n * rho * psi.grad[k] * psi.grad[k]);
    }
    const double rhs_diag = params.lambdaF * params.m * rho + params.lambdaTilde;
    for (int i = 0; i < n; ++i) {
        const double own = (n - 2) * v.psi * psi.hess(i, i) + v.psi * v.psi * h.hess(i, i) +
                           2.0 * v.psi * psi.grad[i] * h.grad[i];
        out.push_back(sig.eps(i) * ssum + own - rhs_diag * sig.eps(i));
    }

    double fiber = 0.0;
    for (int k = 0; k < n; ++k) {
        fiber += sig.eps(k) * ((n - 1) * n * rho * psi.grad[k] * psi.grad[k] -
                               2.0 * (n - 1) * rho * v.psi * psi.hess(k, k));
    }
    out.push_back(fiber - params.lambdaF * (params.m * rho - 1.0) - params.lambdaTilde);
    return out;
}

struct OdeResiduals {
    double r15 = 0.0, r16 = 0.0, r17 = 0.0;
};

/// Radial reduction of the PDE system for general rho.
inline OdeResiduals ode_residuals(const RadialProfile& profile, const SolitonParams& params,
                                  double r) {
    const ProfileValues v = eval_checked(profile, r);
    const int n = params.n;
    const double rho = params.rho;
    OdeResiduals out;
    out.r15 = (n - 2) * v.psi2 + v.psi * v.h2 + 2.0 * v.psi1 * v.h1;
    out.r16 = 2.0 * v.psi * (2.0 * (n - 1) * (1.0 - n * rho) * v.psi1 + v.psi * v.h1) +
              4.0 * r *
                  ((1.0 - 2.0 * (n - 1) * rho) * v.psi * v.psi2 +
                   (n - 1) * (n * rho - 1.0) * v.psi1 * v.psi1 - v.psi * v.psi1 * v.h1) -
              (params.lambdaF * params.m * rho + params.lambdaTilde);
    out.r17 = -4.0 * n * (n - 1) * rho * v.psi * v.psi1 +
              4.0 * r * ((n - 1) * n * rho * v.psi1 * v.psi1 - 2.0 * (n - 1) * rho * v.psi * v.psi2) -
              params.lambdaF * (params.m * rho - 1.0) - params.lambdaTilde;
    return out;
}

struct SchoutenResiduals {
    double r18 = 0.0, r19 = 0.0, r20 = 0.0;
};

/// Radial system at the Schouten value rho = 1/(2(n-1)). Requires params to
/// carry exactly that rho.
inline SchoutenResiduals schouten_residuals(const RadialProfile& profile,
                                            const SolitonParams& params, double r) {
    if (!params.is_schouten())
        throw ParameterError("schouten_residuals: params.rho must equal 1/(2(n-1))");
    const ProfileValues v = eval_checked(profile, r);
    const int n = params.n;
    SchoutenResiduals out;
    out.r18 = (n - 2) * v.psi2 + v.psi * v.h2 + 2.0 * v.psi1 * v.h1;
    out.r19 = v.psi * ((n - 2) * v.psi1 + v.psi * v.h1) +
              r * ((2.0 - n) * v.psi1 * v.psi1 - 2.0 * v.psi * v.psi1 * v.h1) -
              params.lambdaF * params.m / (4.0 * (n - 1)) - 0.5 * params.lambdaTilde;
    out.r20 = -n * v.psi * v.psi1 + 2.0 * r * (0.5 * n * v.psi1 * v.psi1 - v.psi * v.psi2) -
              params.lambdaF * (params.m - 2.0 * n + 2.0) / (4.0 * (n - 1)) -
              0.5 * params.lambdaTilde;
    return out;
}

/// Necessary ODE for the conformal factor: returns r psi psi'' - r (psi')^2 + psi psi'.
/// Vanishes exactly on power laws psi = k r^s, for every s.
inline double power_law_ode_residual(const RadialProfile& profile, double r) {
    const ProfileValues v = eval_checked(profile, r);
    return r * v.psi * v.psi2 - r * v.psi1 * v.psi1 + v.psi * v.psi1;
}

/// One admissible exponent in the power ansatz psi = k2 r^s together with the
/// constraint it imposes on the constant right-hand side
/// C = lambda_F (m-2n+2)/(4(n-1)) + lambda~/2 of the radial equation
/// s(s-1)(n-2) k2^2 r^{2s-1} = C.
struct ExponentRoot {
    double s = 0.0;
    std::string rhs_constraint; // human-readable forced value of C
    bool degenerate = false;    // s = 0 means constant psi, excluded when h' != 0
};

struct ExponentAnalysis {
    double rhs = 0.0;                  // C evaluated from the supplied constants
    std::vector<ExponentRoot> admissible;
    bool consistent = false;           // at least one non-degenerate exponent admitted
};

/// Constant solutions of the exponent equation: s in {0, 1} force C = 0,
/// s = 1/2 forces C = -(n-2) k2^2 / 4. Anything else makes the left side a
/// genuine power of r and cannot match a constant.
inline ExponentAnalysis exponent_constraint(int n, int m, double lambdaF, double lambdaTilde,
                                            double k2 = 1.0, double tol = 1e-12) {
    if (n < 3) throw ParameterError("exponent_constraint: n >= 3 required");
    if (m < 2) throw ParameterError("exponent_constraint: m >= 2 required");
    ExponentAnalysis out;
    out.rhs = lambdaF * (m - 2.0 * n + 2.0) / (4.0 * (n - 1)) + 0.5 * lambdaTilde;
    const double scale =
        std::max({1.0, std::abs(lambdaF), std::abs(lambdaTilde), k2 * k2 * (n - 2)});
    const double half_branch = -(n - 2) * k2 * k2 / 4.0;
    if (std::abs(out.rhs) <= tol * scale) {
        out.admissible.push_back({0.0, "C = 0", true});
        out.admissible.push_back({1.0, "C = 0", false});
    }
    if (std::abs(out.rhs - half_branch) <= tol * scale)
        out.admissible.push_back({0.5, "C = -(n-2) k2^2 / 4", false});
    for (const auto& root : out.admissible) out.consistent = out.consistent || !root.degenerate;
    return out;
}

/// Exact-arithmetic overload; admissibility decided without tolerances.
inline ExponentAnalysis exponent_constraint_exact(int n, int m, const Rational& lambdaF,
                                                  const Rational& lambdaTilde,
                                                  const Rational& k2sq) {
    if (n < 3) throw ParameterError("exponent_constraint: n >= 3 required");
    if (m < 2) throw ParameterError("exponent_constraint: m >= 2 required");
    ExponentAnalysis out;
    const Rational rhs =
        lambdaF * Rational(m - 2LL * n + 2, 4LL * (n - 1)) + lambdaTilde / Rational(2);
    out.rhs = to_double(rhs);
    if (rhs == Rational(0)) {
        out.admissible.push_back({0.0, "C = 0", true});
        out.admissible.push_back({1.0, "C = 0", false});
    }
    if (rhs == -Rational(n - 2, 4) * k2sq)
        out.admissible.push_back({0.5, "C = -(n-2) k2^2 / 4", false});
    for (const auto& root : out.admissible) out.consistent = out.consistent || !root.degenerate;
    return out;
}

/// How the coordinate PDE residuals collapse onto the radial system at a
/// lifted point. The off-diagonal identity is checked entry by entry; the
/// diagonal and fiber residuals are compared against their radial images
///   diag_i  = 4 x_i^2 psi R15 + eps_i R16,
///   fiber   = R17,
/// so vanishing radial residuals force vanishing PDE residuals.
struct PdeOdeConsistency {
    double max_offdiag_dev = 0.0;
    double max_diag_dev = 0.0;
    double fiber_dev = 0.0;
    bool implication_checked = false; // radial residuals vanished at r(x)
    double max_pde_residual = 0.0;    // only meaningful when implication_checked
    bool pass = false;
};

inline PdeOdeConsistency pde_ode_consistency(const RadialProfile& profile, const Signature& sig,
                                             const SolitonParams& params, const Eigen::VectorXd& x,
                                             double tol = 1e-12) {
    const int n = sig.dim();
    const double r = sig.radial(x);
    const std::vector<double> pde = pde_residuals(profile, sig, params, x);
    const OdeResiduals ode = ode_residuals(profile, params, r);
    const double psi = profile.psi(r);

    PdeOdeConsistency out;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++idx) {
            const double expected = 4.0 * sig.eps(i) * sig.eps(j) * x[i] * x[j] * ode.r15;
            out.max_offdiag_dev = std::max(out.max_offdiag_dev, std::abs(pde[idx] - expected));
        }
    }
    for (int i = 0; i < n; ++i, ++idx) {
        const double expected = 4.0 * x[i] * x[i] * psi * ode.r15 + sig.eps(i) * ode.r16;
        out.max_diag_dev = std::max(out.max_diag_dev, std::abs(pde[idx] - expected));
    }
    out.fiber_dev = std::abs(pde[idx] - ode.r17);

    const double ode_mag = std::max({std::abs(ode.r15), std::abs(ode.r16), std::abs(ode.r17)});
    if (ode_mag < tol) {
        out.implication_checked = true;
        for (double v : pde) out.max_pde_residual = std::max(out.max_pde_residual, std::abs(v));
    }
    const double lift_scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    const double ident_tol = tol * std::max(1.0, psi) * lift_scale * lift_scale;
    out.pass = out.max_offdiag_dev <= ident_tol && out.max_diag_dev <= ident_tol &&
               out.fiber_dev <= ident_tol &&
               (!out.implication_checked || out.max_pde_residual <= ident_tol);
    return out;
}

/// Per-equation residual statistics over a sampling grid.
struct EquationStat {
    std::string id;
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double argmax_r = 0.0; // radial location of the maximum
    long count = 0;

    void absorb(double value, double r) {
        const double a = std::abs(value);
        if (a > max_abs) {
            max_abs = a;
            argmax_r = r;
        }
        mean_abs = (mean_abs * count + a) / (count + 1);
        ++count;
    }
};

struct ResidualReport {
    std::vector<EquationStat> per_equation;
    std::string grid;
    double tolerance = 1e-10;
    bool pass = false;

    double max_abs() const {
        double m = 0.0;
        for (const auto& e : per_equation) m = std::max(m, e.max_abs);
        return m;
    }

    void finalize() {
        pass = max_abs() <= tolerance;
        for (auto& e : per_equation)
            if (e.mean_abs > e.max_abs) e.mean_abs = e.max_abs; // guard rounding drift
    }
};

} // namespace solitonforge
