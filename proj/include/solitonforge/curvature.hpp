#pragma once

#include <Eigen/Core>

#include <cmath>
#include <utility>

#include "solitonforge/errors.hpp"
#include "solitonforge/params.hpp"
#include "solitonforge/profile.hpp"
#include "solitonforge/signature.hpp"

namespace solitonforge {

/// First and second coordinate partials of a radial function f(r(x)),
/// r = sum eps_k x_k^2, expanded by the chain rule:
///   f_{,i}  = 2 eps_i x_i f'
///   f_{,ii} = 4 x_i^2 f'' + 2 eps_i f'
///   f_{,ij} = 4 eps_i eps_j x_i x_j f''   (i != j)
struct RadialPartials {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

inline RadialPartials radial_partials(double f1, double f2, const Signature& sig,
                                      const Eigen::VectorXd& x) {
    const int n = sig.dim();
    RadialPartials out;
    out.grad.resize(n);
    out.hess.resize(n, n);
    for (int i = 0; i < n; ++i) {
        out.grad[i] = 2.0 * sig.eps(i) * x[i] * f1;
        for (int j = 0; j < n; ++j) {
            out.hess(i, j) = i == j ? 4.0 * x[i] * x[i] * f2 + 2.0 * sig.eps(i) * f1
                                    : 4.0 * sig.eps(i) * sig.eps(j) * x[i] * x[j] * f2;
        }
    }
    return out;
}

/// Coordinate components of the Ricci tensor of g~ = g/psi^2 + g_F restricted
/// to base lifts, plus the fiber factor: the fiber block is lambda_F g_F and
/// the mixed block vanishes identically for the product structure.
///
///   Ric_ij = (n-2) psi_{,ij} / psi                              (i != j)
///   Ric_ii = [(n-2) psi_{,ii} + eps_i S2] / psi
///            - (n-1) eps_i sum_k eps_k (psi_{,k}/psi)^2
/// with S2 = sum_k eps_k psi_{,kk}.
inline std::pair<Eigen::MatrixXd, double>
ricci_closed_form(const RadialProfile& profile, const Signature& sig, const SolitonParams& params,
                  const Eigen::VectorXd& x) {
    const int n = sig.dim();
    const double r = sig.radial(x);
    const ProfileValues v = eval_checked(profile, r);
    const RadialPartials psi = radial_partials(v.psi1, v.psi2, sig, x);

    double s2 = 0.0, s1sq = 0.0;
    for (int k = 0; k < n; ++k) {
        s2 += sig.eps(k) * psi.hess(k, k);
        s1sq += sig.eps(k) * psi.grad[k] * psi.grad[k];
    }

    Eigen::MatrixXd ric(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                ric(i, i) = ((n - 2) * psi.hess(i, i) + sig.eps(i) * s2) / v.psi -
                            (n - 1) * sig.eps(i) * s1sq / (v.psi * v.psi);
            } else {
                ric(i, j) = (n - 2) * psi.hess(i, j) / v.psi;
            }
        }
    }
    return {ric, params.lambdaF};
}

/// Coordinate components of Hess_{g~} h on base lifts (the potential lives on
/// the base alone, so this is the conformal-metric Hessian of h):
///   H_ij = h_{,ij} + (psi_{,j} h_{,i} + psi_{,i} h_{,j}) / psi  (i != j)
///   H_ii = h_{,ii} + 2 psi_{,i} h_{,i} / psi
///          - eps_i sum_k eps_k psi_{,k} h_{,k} / psi
inline Eigen::MatrixXd hessian_closed_form(const RadialProfile& profile, const Signature& sig,
                                           const Eigen::VectorXd& x) {
    const int n = sig.dim();
    const double r = sig.radial(x);
    const ProfileValues v = eval_checked(profile, r);
    const RadialPartials psi = radial_partials(v.psi1, v.psi2, sig, x);
    const RadialPartials h = radial_partials(v.h1, v.h2, sig, x);

    double cross = 0.0;
    for (int k = 0; k < n; ++k) cross += sig.eps(k) * psi.grad[k] * h.grad[k];

    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                out(i, i) = h.hess(i, i) + 2.0 * psi.grad[i] * h.grad[i] / v.psi -
                            sig.eps(i) * cross / v.psi;
            } else {
                out(i, j) = h.hess(i, j) + (psi.grad[j] * h.grad[i] + psi.grad[i] * h.grad[j]) / v.psi;
            }
        }
    }
    return out;
}

struct ScalarCurvature {
    double K_base = 0.0;
    double K_fiber = 0.0;
    double K_total = 0.0;
};

/// K_base = sum_k eps_k [2(n-1) psi psi_{,kk} - (n-1) n (psi_{,k})^2],
/// K_fiber = lambda_F m, K_total their sum.
inline ScalarCurvature scalar_curvature(const RadialProfile& profile, const Signature& sig,
                                        const SolitonParams& params, const Eigen::VectorXd& x) {
    const int n = sig.dim();
    const double r = sig.radial(x);
    const ProfileValues v = eval_checked(profile, r);
    const RadialPartials psi = radial_partials(v.psi1, v.psi2, sig, x);

    double k_base = 0.0;
    for (int k = 0; k < n; ++k) {
        k_base += sig.eps(k) * (2.0 * (n - 1) * v.psi * psi.hess(k, k) -
                                (n - 1) * n * psi.grad[k] * psi.grad[k]);
    }
    ScalarCurvature out;
    out.K_base = k_base;
    out.K_fiber = params.lambdaF * params.m;
    out.K_total = out.K_base + out.K_fiber;
    return out;
}

/// Coordinate components are canonical; Orthonormal rescales the base blocks
/// by psi^2 (components in the frame e_i = psi d/dx_i).
enum class ComponentFrame { Coordinate, Orthonormal };

struct CurvatureReport {
    Eigen::MatrixXd ric_base;
    bool ric_mixed_zero = true; // identically zero for the product structure
    double ric_fiber_factor = 0.0;
    Eigen::MatrixXd hess_base;
    double K_base = 0.0, K_fiber = 0.0, K_total = 0.0;
    ComponentFrame frame = ComponentFrame::Coordinate;
};

inline CurvatureReport curvature_report(const RadialProfile& profile, const Signature& sig,
                                        const SolitonParams& params, const Eigen::VectorXd& x,
                                        ComponentFrame frame = ComponentFrame::Coordinate) {
    CurvatureReport rep;
    auto [ric, fiber] = ricci_closed_form(profile, sig, params, x);
    rep.ric_base = std::move(ric);
    rep.ric_fiber_factor = fiber;
    rep.hess_base = hessian_closed_form(profile, sig, x);
    const ScalarCurvature k = scalar_curvature(profile, sig, params, x);
    rep.K_base = k.K_base;
    rep.K_fiber = k.K_fiber;
    rep.K_total = k.K_total;
    rep.frame = frame;
    if (frame == ComponentFrame::Orthonormal) {
        const double psi = profile.psi(sig.radial(x));
        rep.ric_base *= psi * psi;
        rep.hess_base *= psi * psi;
    }
    return rep;
}

} // namespace solitonforge
