// Acceptance suite: one line per criterion, [PASS]/[FAIL], exit 0 iff all
// criteria hold at their stated tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "solitonforge/classify.hpp"
#include "solitonforge/config.hpp"
#include "solitonforge/integrate.hpp"
#include "solitonforge/systems.hpp"

using namespace solitonforge;

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// 1. the example catalog reproduces its constants exactly in rational
//    arithmetic, fast.
bool criterion_examples(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = builtin_examples();
    const GridSpec grid{0.1, 10.0, 1000};

    bool ok = records.size() == 3;
    const Rational expected_tilde[3] = {Rational(-1, 2), Rational(0), Rational(1, 3)};
    const Rational expected_lamF[3] = {Rational(1), Rational(2), Rational(2)};
    for (std::size_t i = 0; ok && i < records.size(); ++i) {
        const auto& p = records[i].desc.params;
        ok = p.lambdaTilde_exact && *p.lambdaTilde_exact == expected_tilde[i] &&
             p.lambdaF_exact && *p.lambdaF_exact == expected_lamF[i];
        if (!ok) break;
        // the steady example's fiber constant is n-2 in exact arithmetic
        if (i == 1) ok = *p.lambdaF_exact == Rational(p.n - 2);
        const ResidualReport rep = verify_solution(records[i].desc, grid);
        const CylinderCertificate cert = certify_cylinder(p.n, records[i].desc.k2.value);
        ok = ok && rep.pass && cert.pass;
    }
    const double elapsed = seconds_since(t0);
    detail = "lambda_tilde = (-1/2, 0, 1/3) exact, lambda_F = (1, n-2, 2) exact, " +
             std::to_string(elapsed) + " s";
    return ok && elapsed < 1.0;
}

// 2. both families solve every equation to 1e-10 across the parameter matrix.
bool criterion_exact_residuals(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid{1e-2, 1e2, 1000};
    const ExactScalar k2s[3] = {ExactScalar(Rational(1, 2)), ExactScalar(1), ExactScalar(2)};

    double worst = 0.0;
    for (int n : {3, 4, 5}) {
        for (int m : {2, 3, 4}) {
            for (const ExactScalar& k2 : k2s) {
                auto [sa, pa] = make_family_A(n, m, ExactScalar(3), k2, 0.7);
                SolutionDescriptor da;
                da.family = Family::A;
                da.params = sa.params;
                da.profile = pa;
                da.k2 = k2;
                const ResidualReport ra = verify_solution(da, grid, 1e-10);
                worst = std::max(worst, ra.max_abs());
                if (!ra.pass) {
                    detail = "family A residual above 1e-10 at n=" + std::to_string(n);
                    return false;
                }

                auto [sb, pb] = make_family_B(n, m, k2, 0.3, -0.4);
                SolutionDescriptor db;
                db.family = Family::B;
                db.params = sb.params;
                db.profile = pb;
                db.k2 = k2;
                const ResidualReport rb = verify_solution(db, grid, 1e-10);
                worst = std::max(worst, rb.max_abs());
                if (!rb.pass) {
                    detail = "family B residual above 1e-10 at n=" + std::to_string(n);
                    return false;
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    detail = "max residual " + fmt(worst) + " over 54 configurations, " +
             std::to_string(elapsed) + " s";
    return elapsed < 5.0;
}

// 3. closed-form curvature matches the numerical engine at seeded points.
bool criterion_oracle_agreement(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n : {3, 4}) {
        for (int m : {2, 3}) {
            const FiberChart fiber = sphere_fiber(m, 1.0);
            {
                auto [sol, prof] = make_family_A(n, m, ExactScalar(m - 1), ExactScalar(1), 0.2);
                (void)sol;
                const OracleComparison cmp = compare_with_oracle(
                    prof, Signature::riemannian(n), fiber, 0, 50, 1e-5);
                worst = std::max({worst, cmp.max_ricci_dev, cmp.max_hessian_dev,
                                  cmp.max_scalar_dev});
                if (!cmp.pass) {
                    detail = "family A chart exceeded 1e-5 at n=" + std::to_string(n) +
                             ", m=" + std::to_string(m);
                    return false;
                }
            }
            {
                auto [sol, prof] = make_family_B(n, m, ExactScalar(1), 0.1, 0.0);
                (void)sol;
                const OracleComparison cmp = compare_with_oracle(
                    prof, Signature::riemannian(n), fiber, 1, 50, 1e-5);
                worst = std::max({worst, cmp.max_ricci_dev, cmp.max_hessian_dev,
                                  cmp.max_scalar_dev});
                if (!cmp.pass) {
                    detail = "family B chart exceeded 1e-5 at n=" + std::to_string(n) +
                             ", m=" + std::to_string(m);
                    return false;
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    detail = "max |closed - numeric| " + fmt(worst) + " over Ricci/Hessian/scalar at 50 points x "
             "8 charts, " + std::to_string(elapsed) + " s";
    return elapsed < 30.0;
}

// 4. the square-root base metric is the round cylinder at curvature level.
bool criterion_cylinder(std::string& detail) {
    const CylinderCertificate cert = certify_cylinder(3, 1.0, 1e-4);
    detail = "spherical dev " + fmt(cert.max_spherical_dev) + ", radial dev " +
             fmt(cert.max_radial_dev) + ", scalar dev " + fmt(cert.max_scalar_dev) +
             ", lambda_F = " + std::to_string(cert.lambdaF);
    return cert.pass && cert.expected_spherical == 1.0 && cert.expected_scalar == 2.0 &&
           cert.lambdaF_positive;
}

// 5. the factor ODE flow stays on the power family from seeded initial data.
bool criterion_ode_closure(std::string& detail) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> slope(-1.0, 2.0);
    std::uniform_real_distribution<double> start(0.5, 2.0);
    double worst_closure = 0.0, worst_drift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double r0 = start(rng);
        const double psi0 = amp(rng);
        const double dpsi0 = slope(rng) * psi0 / r0;
        const PowerLawTrajectory tr = integrate_power_law_ode(r0, psi0, dpsi0, 10.0 * r0);
        worst_closure = std::max(worst_closure, tr.closure_error);
        worst_drift = std::max(worst_drift, tr.s_drift);
    }
    detail = "max relative closure error " + fmt(worst_closure) + " (< 1e-6), max s drift " +
             fmt(worst_drift) + " (< 1e-7) over 20 seeded runs";
    return worst_closure < 1e-6 && worst_drift < 1e-7;
}

// 6. every exponent off {1/2, 1} fails, with the failure magnitude the power
//    law predicts; the two admissible exponents pass.
bool criterion_exponent_dichotomy(std::string& detail) {
    const GridSpec grid{1e-2, 1e2, 1000};
    double worst_pred_dev = 0.0;
    int scanned = 0;
    for (int i = 1; i <= 39; ++i) {
        const double s = 0.05 * i;
        if (std::abs(s - 0.5) < 1e-12 || std::abs(s - 1.0) < 1e-12) continue;
        const ExponentScanEntry entry = scan_exponent(3, 2, 1.0, s, grid);
        ++scanned;
        worst_pred_dev = std::max(worst_pred_dev, entry.prediction_rel_dev);
        if (entry.passes || entry.max_residual <= 1e-10) {
            detail = "s = " + std::to_string(s) + " unexpectedly verified";
            return false;
        }
        if (entry.prediction_rel_dev > 1e-6) {
            detail = "s = " + std::to_string(s) + " residual magnitude off the r^{2s-1} power law";
            return false;
        }
    }
    // the two admissible exponents do verify
    auto [sa, pa] = make_family_A(3, 2, ExactScalar(3), ExactScalar(1));
    SolutionDescriptor da;
    da.params = sa.params;
    da.profile = pa;
    auto [sb, pb] = make_family_B(3, 2, ExactScalar(1));
    SolutionDescriptor db;
    db.params = sb.params;
    db.profile = pb;
    const bool families_pass =
        verify_solution(da, grid, 1e-10).pass && verify_solution(db, grid, 1e-10).pass;
    detail = std::to_string(scanned) + " exponents rejected, max deviation from the predicted "
             "minimax magnitude " + fmt(worst_pred_dev) + "; s = 1/2 and s = 1 verified";
    return families_pass && scanned == 37;
}

// 7. vanishing first-order residuals force the factor ODE (necessity).
bool criterion_necessity(std::string& detail) {
    const auto rs = log_spaced(1e-2, 1e2, 1000);
    const ExactScalar k2s[3] = {ExactScalar(Rational(1, 2)), ExactScalar(1), ExactScalar(2)};
    double worst_hyp = 0.0, worst_ode = 0.0;
    for (int n : {3, 4, 5}) {
        for (int m : {2, 3, 4}) {
            for (const ExactScalar& k2 : k2s) {
                for (int fam = 0; fam < 2; ++fam) {
                    RadialProfile prof;
                    SolitonParams params;
                    if (fam == 0) {
                        auto [s, p] = make_family_A(n, m, ExactScalar(3), k2); // lambda_F != 0
                        prof = p;
                        params = s.params;
                    } else {
                        auto [s, p] = make_family_B(n, m, k2);
                        prof = p;
                        params = s.params;
                    }
                    double hyp = 0.0, ode = 0.0;
                    int h1_zeros = 0;
                    for (double r : rs) {
                        const SchoutenResiduals sr = schouten_residuals(prof, params, r);
                        hyp = std::max({hyp, std::abs(sr.r18), std::abs(sr.r19)});
                        ode = std::max(ode, std::abs(power_law_ode_residual(prof, r)));
                        if (std::abs(prof.h1(r)) <= 1e-8) ++h1_zeros;
                    }
                    // hypothesis: the first-order system vanishes at the
                    // closed-form tolerance and h' != 0 on the grid
                    if (hyp >= 1e-10 || h1_zeros > 0) {
                        detail = "hypothesis failed to hold (max " + fmt(hyp) + ")";
                        return false;
                    }
                    if (ode >= 1e-9) {
                        detail = "factor ODE residual " + fmt(ode) + " above 1e-9";
                        return false;
                    }
                    worst_hyp = std::max(worst_hyp, hyp);
                    worst_ode = std::max(worst_ode, ode);
                }
            }
        }
    }
    detail = "max(|R18|,|R19|) " + fmt(worst_hyp) + " (vanishing), max |R21| " + fmt(worst_ode) +
             " (< 1e-9) over 54 configurations";
    return true;
}

// 8. the off-diagonal PDE residual equals its radial image exactly.
bool criterion_pde_ode_identity(std::string& detail) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(1.5, 2.5);
    std::uniform_real_distribution<double> coef(-0.1, 0.1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a0 = amp(rng), a1 = coef(rng), a2 = coef(rng);
        const double b1 = coef(rng), b2 = coef(rng);
        RadialProfile prof;
        prof.psi = [a0, a1, a2](double r) { return a0 + a1 * r + a2 * r * r; };
        prof.psi1 = [a1, a2](double r) { return a1 + 2.0 * a2 * r; };
        prof.psi2 = [a2](double) { return 2.0 * a2; };
        prof.h = [b1, b2](double r) { return b1 * r + b2 * r * r; };
        prof.h1 = [b1, b2](double r) { return b1 + 2.0 * b2 * r; };
        prof.h2 = [b2](double) { return 2.0 * b2; };
        prof.domain = Interval{0.0, 4.0};
        prof.name = "random";

        const Signature sig = trial % 2 == 0 ? Signature::riemannian(4)
                                             : Signature({1, 1, 1, -1});
        const SolitonParams params = SolitonParams::make(
            4, 3, ExactScalar(0.2 + 0.05 * (trial % 5)), ExactScalar(0.4), ExactScalar(-0.3));
        for (int pt = 0; pt < 20; ++pt) {
            const Eigen::VectorXd x = sample_base_point(sig, rng);
            const PdeOdeConsistency rep = pde_ode_consistency(prof, sig, params, x, 1e-12);
            worst = std::max(worst, rep.max_offdiag_dev);
            if (rep.max_offdiag_dev > 1e-12) {
                detail = "off-diagonal identity deviation " + fmt(rep.max_offdiag_dev);
                return false;
            }
        }
    }
    detail = "max |PDE_offdiag - 4 eps_i eps_j x_i x_j R15| = " + fmt(worst) +
             " over 100 profiles x 20 points";
    return true;
}

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::string&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "example catalog constants exact in rational arithmetic", criterion_examples},
        {2, "exact-solution residuals below 1e-10 across the parameter matrix",
         criterion_exact_residuals},
        {3, "closed-form curvature agrees with the numerical engine to 1e-5",
         criterion_oracle_agreement},
        {4, "square-root base certified as the round cylinder at curvature level",
         criterion_cylinder},
        {5, "factor ODE flow closes on the power family", criterion_ode_closure},
        {6, "exponent dichotomy: only s = 1/2 and s = 1 verify", criterion_exponent_dichotomy},
        {7, "vanishing first-order residuals force the factor ODE", criterion_necessity},
        {8, "coordinate residuals collapse onto the radial system", criterion_pde_ode_identity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = c.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s | %s\n", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d acceptance criteria FAILED\n", failures);
    return 1;
}
