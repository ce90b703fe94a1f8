#pragma once

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solitonforge/errors.hpp"
#include "solitonforge/numerics.hpp"
#include "solitonforge/profile.hpp"

namespace solitonforge {

struct OdeTolerances {
    double rel = 1e-9;
    double abs = 1e-12;
};

struct TrajectoryPoint {
    double r = 0.0;
    double psi = 0.0;
    double dpsi = 0.0;
    double s_local = 0.0; // r psi' / psi, constant along exact solutions
};

/// Sampled solution of the radial ODE psi'' = (psi')^2/psi - psi'/r together
/// with the power law it should coincide with: every solution through
/// positive data is psi = k* r^{s*} with s* = r0 psi0'/psi0.
struct PowerLawTrajectory {
    std::vector<TrajectoryPoint> samples;
    double s_star = 0.0;
    double k_star = 0.0;
    double closure_error = 0.0; // max over samples of |psi - k* r^{s*}| / psi
    double s_drift = 0.0;       // max over samples of |s_local - s*|
};

namespace detail {

constexpr double kPositivityFloor = 1e-12;
constexpr long kMaxSteps = 2000000;

template <typename System, typename Observer>
void integrate_dense(System&& sys, std::array<double, 2> y0, double t0, double t1,
                     const OdeTolerances& tol, const std::vector<double>& sample_times,
                     Observer&& observe, bool enforce_positivity) {
    namespace ode = boost::numeric::odeint;
    using State = std::array<double, 2>;
    auto stepper = ode::make_dense_output(tol.abs, tol.rel, ode::runge_kutta_dopri5<State>());

    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double dt0 = dir * std::min(std::abs(t1 - t0) / 100.0, 0.01 * std::abs(t0) + 1e-6);
    stepper.initialize(y0, t0, dt0);

    std::size_t next_sample = 0;
    const auto emit_through = [&](double t_hi) {
        State y;
        while (next_sample < sample_times.size() &&
               dir * (sample_times[next_sample] - t_hi) <= 1e-14 * std::abs(t_hi)) {
            stepper.calc_state(sample_times[next_sample], y);
            if (enforce_positivity && y[0] <= kPositivityFloor)
                throw PositivityError("integration: psi reached the positivity floor at r = " +
                                      std::to_string(sample_times[next_sample]));
            observe(sample_times[next_sample], y);
            ++next_sample;
        }
    };

    long steps = 0;
    while (dir * (t1 - stepper.current_time()) > 0.0) {
        if (++steps > kMaxSteps)
            throw StiffnessError("integration: step budget exhausted before reaching r1");
        try {
            stepper.do_step(sys);
        } catch (const boost::numeric::odeint::odeint_error& e) {
            throw StiffnessError(std::string("integration: adaptive stepping failed: ") + e.what());
        }
        if (enforce_positivity && stepper.current_state()[0] <= kPositivityFloor)
            throw PositivityError("integration: psi reached the positivity floor at r = " +
                                  std::to_string(stepper.current_time()));
        const double reached = dir > 0 ? std::min(stepper.current_time(), t1)
                                       : std::max(stepper.current_time(), t1);
        emit_through(reached);
    }
    emit_through(t1);
}

} // namespace detail

/// Integrates the radial ODE from (r0, psi0, psi0') to r1 with adaptive
/// 4/5-order stepping and dense-output sampling. sample_count points are
/// log-spaced across [r0, r1] (both endpoints included).
inline PowerLawTrajectory integrate_power_law_ode(double r0, double psi0, double dpsi0, double r1,
                                                  std::optional<int> sample_count = std::nullopt,
                                                  const OdeTolerances& tol = {}) {
    if (!(r0 > 0.0) || !(r1 > 0.0))
        throw ParameterError("integrate_power_law_ode: r0, r1 must be positive");
    if (!(psi0 > 0.0)) throw ParameterError("integrate_power_law_ode: psi0 must be positive");
    if (r0 == r1) throw ParameterError("integrate_power_law_ode: r0 and r1 must differ");
    const int count = std::max(2, sample_count.value_or(257));

    PowerLawTrajectory out;
    out.s_star = r0 * dpsi0 / psi0;
    out.k_star = psi0 / std::pow(r0, out.s_star);

    std::vector<double> times = log_spaced(std::min(r0, r1), std::max(r0, r1), count);
    if (r1 < r0) std::reverse(times.begin(), times.end());

    const auto sys = [](const std::array<double, 2>& y, std::array<double, 2>& dy, double r) {
        dy[0] = y[1];
        dy[1] = y[1] * y[1] / y[0] - y[1] / r;
    };
    detail::integrate_dense(
        sys, {psi0, dpsi0}, r0, r1, tol, times,
        [&](double r, const std::array<double, 2>& y) {
            TrajectoryPoint p;
            p.r = r;
            p.psi = y[0];
            p.dpsi = y[1];
            p.s_local = r * y[1] / y[0];
            const double ref = out.k_star * std::pow(r, out.s_star);
            out.closure_error = std::max(out.closure_error, std::abs(y[0] - ref) / y[0]);
            out.s_drift = std::max(out.s_drift, std::abs(p.s_local - out.s_star));
            out.samples.push_back(p);
        },
        /*enforce_positivity=*/true);
    return out;
}

namespace detail {

/// Piecewise cubic Hermite series on sorted nodes.
class HermiteSeries {
public:
    HermiteSeries(std::vector<double> xs, std::vector<double> ys, std::vector<double> ms)
        : x_(std::move(xs)), y_(std::move(ys)), m_(std::move(ms)) {}

    double eval(double x) const {
        const std::size_t i = segment(x);
        const double dx = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / dx;
        const double t2 = t * t, t3 = t2 * t;
        return y_[i] * (2 * t3 - 3 * t2 + 1) + m_[i] * dx * (t3 - 2 * t2 + t) +
               y_[i + 1] * (-2 * t3 + 3 * t2) + m_[i + 1] * dx * (t3 - t2);
    }

private:
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

} // namespace detail

/// Potential recovered from the conformal factor by the first-order reduction
/// (psi^2 h')' = -(n-2) psi psi'': two chained quadratures integrated with the
/// same adaptive stepper. Normalization: h(r0) = 0, h'(r0) = c_init.
struct RecoveredPotential {
    RadialProfile profile; // psi copied from the input, h recovered
    std::vector<std::array<double, 4>> nodes; // r, h, h', h''
};

inline RecoveredPotential recover_h(const RadialProfile& psi_profile, int n, double c_init,
                                    double r0, double r1, int node_count = 4000,
                                    const OdeTolerances& tol = {}) {
    if (n < 3) throw ParameterError("recover_h: n >= 3 required");
    if (!(r0 > 0.0) || !(r1 > 0.0)) throw ParameterError("recover_h: r0, r1 must be positive");
    if (r0 == r1) throw ParameterError("recover_h: r0 and r1 must differ");
    const double lo = std::min(r0, r1), hi = std::max(r0, r1);
    if (!psi_profile.domain.contains(lo) || !psi_profile.domain.contains(hi))
        throw DomainError("recover_h: [r0, r1] leaves the psi profile domain");

    const auto psi = psi_profile.psi;
    const auto psi1 = psi_profile.psi1;
    const auto psi2 = psi_profile.psi2;
    const double w0 = psi(r0) * psi(r0) * c_init;

    std::vector<double> times = log_spaced(lo, hi, std::max(8, node_count));
    if (r1 < r0) std::reverse(times.begin(), times.end());

    std::vector<double> rs, hs, h1s, h2s;
    rs.reserve(times.size());
    const auto sys = [&](const std::array<double, 2>& y, std::array<double, 2>& dy, double r) {
        const double p = psi(r);
        if (!(p > 0.0)) throw PositivityError("recover_h: psi not positive inside [r0, r1]");
        dy[0] = -(n - 2) * p * psi2(r); // w' with w = psi^2 h'
        dy[1] = y[0] / (p * p);         // h'
    };
    detail::integrate_dense(
        sys, {w0, 0.0}, r0, r1, tol, times,
        [&](double r, const std::array<double, 2>& y) {
            const double p = psi(r);
            const double hp = y[0] / (p * p);
            rs.push_back(r);
            hs.push_back(y[1]);
            h1s.push_back(hp);
            h2s.push_back(-((n - 2) * psi2(r) + 2.0 * psi1(r) * hp) / p);
        },
        /*enforce_positivity=*/false);

    if (r1 < r0) {
        std::reverse(rs.begin(), rs.end());
        std::reverse(hs.begin(), hs.end());
        std::reverse(h1s.begin(), h1s.end());
        std::reverse(h2s.begin(), h2s.end());
    }

    auto h_series = std::make_shared<detail::HermiteSeries>(rs, hs, h1s);
    auto h1_series = std::make_shared<detail::HermiteSeries>(rs, h1s, h2s);

    RecoveredPotential out;
    out.profile = psi_profile;
    out.profile.h = [h_series](double r) { return h_series->eval(r); };
    out.profile.h1 = [h1_series](double r) { return h1_series->eval(r); };
    // Second derivative by differencing the recovered h' so residual checks
    // measure the quadrature itself, not an identity rearrangement.
    out.profile.h2 = [h1_series, lo, hi](double r) {
        double step = 1e-4 * std::max(std::abs(r), 1e-8);
        step = std::min({step, 0.45 * (r - lo), 0.45 * (hi - r)});
        if (!(step > 0.0)) step = 1e-12;
        return (h1_series->eval(r + step) - h1_series->eval(r - step)) / (2.0 * step);
    };
    out.profile.domain = Interval{lo, hi};
    out.profile.constant_potential = false;
    out.profile.name = psi_profile.name + "+recovered-h";
    out.nodes.reserve(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i)
        out.nodes.push_back({rs[i], hs[i], h1s[i], h2s[i]});
    return out;
}

} // namespace solitonforge
