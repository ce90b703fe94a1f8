#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "solitonforge/errors.hpp"
#include "solitonforge/numerics.hpp"

namespace solitonforge {

/// Open interval of admissible radial values.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double r) const { return r > lo && r < hi; }
};

using RadialFn = std::function<double(double)>;

/// Radial conformal factor psi(r) and potential h(r) with analytically coded
/// first and second derivatives. Profiles are immutable after construction and
/// may be evaluated concurrently. Derivatives are always closed-form callables,
/// never finite differences, so downstream residual checks measure formula
/// errors rather than differentiation errors.
struct RadialProfile {
    RadialFn psi, psi1, psi2;
    RadialFn h, h1, h2;
    Interval domain;
    bool constant_potential = false;
    std::string name;
};

struct ProfileValues {
    double psi, psi1, psi2;
    double h, h1, h2;
};

/// Evaluates all six callables at r, enforcing the domain and psi > 0.
inline ProfileValues eval_checked(const RadialProfile& p, double r) {
    if (!p.domain.contains(r))
        throw DomainError("profile '" + p.name + "': r = " + std::to_string(r) +
                          " outside validity domain");
    ProfileValues v{p.psi(r), p.psi1(r), p.psi2(r), p.h(r), p.h1(r), p.h2(r)};
    if (!(v.psi > 0.0))
        throw PositivityError("profile '" + p.name + "': psi(r) <= 0 at r = " + std::to_string(r));
    return v;
}

/// Explicit potential specification: either identically zero or a callable
/// triple (h, h', h'').
struct ZeroPotential {};
struct ExplicitPotential {
    RadialFn h, h1, h2;
};
using PotentialSpec = std::variant<ZeroPotential, ExplicitPotential>;

/// psi(r) = k r^s on r > 0, with exact symbolic derivatives.
inline RadialProfile make_power_profile(double k, double s, PotentialSpec hspec = ZeroPotential{}) {
    if (!(k > 0.0)) throw ParameterError("make_power_profile: k must be positive");
    RadialProfile p;
    p.psi = [k, s](double r) { return k * std::pow(r, s); };
    p.psi1 = [k, s](double r) { return k * s * std::pow(r, s - 1.0); };
    p.psi2 = [k, s](double r) { return k * s * (s - 1.0) * std::pow(r, s - 2.0); };
    if (std::holds_alternative<ZeroPotential>(hspec)) {
        p.h = [](double) { return 0.0; };
        p.h1 = [](double) { return 0.0; };
        p.h2 = [](double) { return 0.0; };
        p.constant_potential = true;
    } else {
        auto& e = std::get<ExplicitPotential>(hspec);
        p.h = e.h;
        p.h1 = e.h1;
        p.h2 = e.h2;
    }
    p.domain = Interval{0.0, std::numeric_limits<double>::infinity()};
    p.name = "power(k=" + std::to_string(k) + ", s=" + std::to_string(s) + ")";
    return p;
}

/// Natural cubic spline through strictly increasing abscissae. Evaluation
/// outside [x_front, x_back] is the caller's responsibility (profiles restrict
/// their domain to the open data interval).
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> xs, std::vector<double> ys)
        : x_(std::move(xs)), y_(std::move(ys)) {
        const std::size_t n = x_.size();
        if (n < 4 || y_.size() != n)
            throw ParameterError("CubicSpline: need >= 4 matching samples");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw ParameterError("CubicSpline: abscissae must be strictly increasing");

        // Second derivatives from the standard tridiagonal system, natural ends.
        m_.assign(n, 0.0);
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0);
        diag[0] = diag[n - 1] = 1.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hl = x_[i] - x_[i - 1];
            const double hr = x_[i + 1] - x_[i];
            sub[i] = hl;
            diag[i] = 2.0 * (hl + hr);
            rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
        }
        // Thomas sweep; the sub/super diagonals coincide for this system.
        std::vector<double> c(n, 0.0);
        c[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double hr = x_[i + 1] - x_[i];
            const double denom = diag[i] - sub[i] * c[i - 1];
            c[i] = hr / denom;
            rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) m_[i] = rhs[i] - c[i] * m_[i + 1];
    }

    double eval(double x) const { return piece(x, 0); }
    double deriv1(double x) const { return piece(x, 1); }
    double deriv2(double x) const { return piece(x, 2); }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    double piece(double x, int order) const {
        std::size_t i = segment(x);
        const double hseg = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / hseg;
        const double b = (x - x_[i]) / hseg;
        switch (order) {
            case 0:
                return a * y_[i] + b * y_[i + 1] +
                       ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * hseg * hseg / 6.0;
            case 1:
                return (y_[i + 1] - y_[i]) / hseg +
                       ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * hseg / 6.0;
            default:
                return a * m_[i] + b * m_[i + 1];
        }
    }

    std::size_t segment(double x) const {
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_, y_, m_;
};

struct TabulatedSample {
    double r;
    double psi;
    double h = 0.0;
};

/// Spline-backed profile through (r, psi, h) samples. Domain is the open data
/// interval; psi samples must be positive.
inline RadialProfile make_tabulated_profile(const std::vector<TabulatedSample>& samples) {
    if (samples.size() < 4) throw ParameterError("make_tabulated_profile: need >= 4 samples");
    std::vector<double> r, psi, h;
    r.reserve(samples.size());
    psi.reserve(samples.size());
    h.reserve(samples.size());
    bool h_all_zero = true;
    for (const auto& s : samples) {
        if (!(s.psi > 0.0)) throw PositivityError("make_tabulated_profile: psi samples must be positive");
        r.push_back(s.r);
        psi.push_back(s.psi);
        h.push_back(s.h);
        h_all_zero = h_all_zero && s.h == 0.0;
    }
    auto spsi = std::make_shared<CubicSpline>(r, psi);
    auto sh = std::make_shared<CubicSpline>(r, h);
    RadialProfile p;
    p.psi = [spsi](double x) { return spsi->eval(x); };
    p.psi1 = [spsi](double x) { return spsi->deriv1(x); };
    p.psi2 = [spsi](double x) { return spsi->deriv2(x); };
    p.h = [sh](double x) { return sh->eval(x); };
    p.h1 = [sh](double x) { return sh->deriv1(x); };
    p.h2 = [sh](double x) { return sh->deriv2(x); };
    p.domain = Interval{r.front(), r.back()};
    p.constant_potential = h_all_zero;
    p.name = "tabulated[" + std::to_string(samples.size()) + "]";
    return p;
}

struct DerivativeConsistency {
    double max_rel_dev = 0.0;
    double argmax_r = 0.0;
    bool pass = false;
};

/// Self-consistency of the analytic derivatives against central differences of
/// psi and h. Relative deviation uses a unit floor so flat stretches do not
/// blow up the quotient.
inline DerivativeConsistency check_derivative_consistency(const RadialProfile& p,
                                                          const std::vector<double>& rs,
                                                          double tol = 1e-6) {
    DerivativeConsistency out;
    for (double r : rs) {
        const double step = 1e-4 * std::max(std::abs(r), 1e-8);
        if (!p.domain.contains(r - 2.0 * step) || !p.domain.contains(r + 2.0 * step)) continue;
        const auto check = [&](const RadialFn& f, const RadialFn& d1, const RadialFn& d2) {
            const double fp = (f(r + step) - f(r - step)) / (2.0 * step);
            const double fpp = (f(r + step) - 2.0 * f(r) + f(r - step)) / (step * step);
            const double dev1 =
                std::abs(fp - d1(r)) / std::max({1.0, std::abs(fp), std::abs(d1(r))});
            const double dev2 =
                std::abs(fpp - d2(r)) / std::max({1.0, std::abs(fpp), std::abs(d2(r))});
            const double dev = std::max(dev1, dev2);
            if (dev > out.max_rel_dev) {
                out.max_rel_dev = dev;
                out.argmax_r = r;
            }
        };
        check(p.psi, p.psi1, p.psi2);
        check(p.h, p.h1, p.h2);
    }
    out.pass = out.max_rel_dev <= tol;
    return out;
}

} // namespace solitonforge
