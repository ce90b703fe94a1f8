#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>

#include "solitonforge/errors.hpp"
#include "solitonforge/profile.hpp"
#include "solitonforge/signature.hpp"

namespace solitonforge {

/// A coordinate metric chart: dimension, pointwise metric matrix and an
/// admissibility predicate. Charts are immutable and evaluated concurrently.
struct MetricChart {
    int dim = 0;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> metric;
    std::function<bool(const Eigen::VectorXd&)> admits;
    std::string name;
};

inline MetricChart flat_chart(const Signature& sig) {
    MetricChart c;
    c.dim = sig.dim();
    c.metric = [sig](const Eigen::VectorXd& p) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(sig.dim(), sig.dim());
        for (int i = 0; i < sig.dim(); ++i) g(i, i) = sig.eps(i);
        (void)p;
        return g;
    };
    c.admits = [](const Eigen::VectorXd&) { return true; };
    c.name = "flat" + sig.describe();
    return c;
}

inline MetricChart flat_chart(int n) { return flat_chart(Signature::riemannian(n)); }

/// Conformally rescaled pseudo-Euclidean base chart g*_{ij} = eps_i delta_ij / psi(r)^2.
inline MetricChart conformal_base_chart(const RadialProfile& profile, const Signature& sig) {
    MetricChart c;
    c.dim = sig.dim();
    c.metric = [profile, sig](const Eigen::VectorXd& x) {
        const double r = sig.radial(x);
        if (!profile.domain.contains(r))
            throw DomainError("conformal base chart: r(x) outside profile domain");
        const double psi = profile.psi(r);
        if (!(psi > 0.0)) throw PositivityError("conformal base chart: psi(r) <= 0");
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(sig.dim(), sig.dim());
        const double w = 1.0 / (psi * psi);
        for (int i = 0; i < sig.dim(); ++i) g(i, i) = sig.eps(i) * w;
        return g;
    };
    c.admits = [profile, sig](const Eigen::VectorXd& x) {
        const double r = sig.radial(x);
        return profile.domain.contains(r) && profile.psi(r) > 0.0;
    };
    c.name = "base[" + profile.name + "]";
    return c;
}

/// A fiber chart together with its Einstein constant and a seeded sampler of
/// admitted points (kept with the chart so nested products stay composable).
struct FiberChart {
    MetricChart chart;
    double lambdaF = 0.0;
    std::string kind;
    std::function<Eigen::VectorXd(std::mt19937_64&)> sample;
};

/// Round m-sphere of radius R in the conformally flat chart
/// g = 4R^4/(R^2+|u|^2)^2 delta, admitted for |u| < 3R (stays clear of the
/// projective blow-up). Einstein constant lambda_F = (m-1)/R^2.
inline FiberChart sphere_fiber(int m, double R) {
    if (m < 1) throw ParameterError("sphere_fiber: m >= 1 required");
    if (!(R > 0.0)) throw ParameterError("sphere_fiber: R > 0 required");
    FiberChart f;
    f.chart.dim = m;
    f.chart.metric = [m, R](const Eigen::VectorXd& u) {
        const double s = R * R + u.squaredNorm();
        const double w = 4.0 * R * R * R * R / (s * s);
        return (w * Eigen::VectorXd::Ones(m)).asDiagonal().toDenseMatrix();
    };
    f.chart.admits = [m, R](const Eigen::VectorXd& u) {
        return u.size() == m && u.norm() < 3.0 * R;
    };
    f.chart.name = "sphere(m=" + std::to_string(m) + ", R=" + std::to_string(R) + ")";
    f.lambdaF = (m - 1) / (R * R);
    f.kind = "sphere";
    f.sample = [m, R](std::mt19937_64& rng) {
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> rad(0.0, 0.8 * R);
        Eigen::VectorXd u(m);
        do {
            for (int i = 0; i < m; ++i) u[i] = gauss(rng);
        } while (u.norm() < 1e-6);
        return Eigen::VectorXd(rad(rng) * u.normalized());
    };
    return f;
}

inline FiberChart flat_fiber(int m) {
    if (m < 1) throw ParameterError("flat_fiber: m >= 1 required");
    FiberChart f;
    f.chart.dim = m;
    f.chart.metric = [m](const Eigen::VectorXd&) {
        return Eigen::MatrixXd::Identity(m, m).eval();
    };
    f.chart.admits = [m](const Eigen::VectorXd& u) { return u.size() == m; };
    f.chart.name = "flat(m=" + std::to_string(m) + ")";
    f.lambdaF = 0.0;
    f.kind = "flat";
    f.sample = [m](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> coord(-1.0, 1.0);
        Eigen::VectorXd u(m);
        for (int i = 0; i < m; ++i) u[i] = coord(rng);
        return u;
    };
    return f;
}

/// Block-diagonal product of two charts.
inline MetricChart product_chart(const MetricChart& a, const MetricChart& b) {
    MetricChart c;
    c.dim = a.dim + b.dim;
    const int da = a.dim, db = b.dim;
    c.metric = [a, b, da, db](const Eigen::VectorXd& p) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(da + db, da + db);
        g.topLeftCorner(da, da) = a.metric(p.head(da));
        g.bottomRightCorner(db, db) = b.metric(p.tail(db));
        return g;
    };
    c.admits = [a, b, da, db](const Eigen::VectorXd& p) {
        return p.size() == da + db && a.admits(p.head(da)) && b.admits(p.tail(db));
    };
    c.name = a.name + " x " + b.name;
    return c;
}

/// Product of two Einstein fibers with equal constants is Einstein with the
/// same constant; unequal constants are rejected.
inline FiberChart product_fiber(const FiberChart& a, const FiberChart& b) {
    if (std::abs(a.lambdaF - b.lambdaF) > 1e-12 * std::max(1.0, std::abs(a.lambdaF)))
        throw ConstraintError("product_fiber: factors must share one Einstein constant");
    FiberChart f;
    f.chart = product_chart(a.chart, b.chart);
    f.lambdaF = a.lambdaF;
    f.kind = "product(" + a.kind + ", " + b.kind + ")";
    const auto sa = a.sample, sb = b.sample;
    const int da = a.chart.dim, db = b.chart.dim;
    f.sample = [sa, sb, da, db](std::mt19937_64& rng) {
        Eigen::VectorXd u(da + db);
        u.head(da) = sa(rng);
        u.tail(db) = sb(rng);
        return u;
    };
    return f;
}

/// Full product chart of dimension n + m: conformal base block plus fiber block.
inline MetricChart product_chart(const RadialProfile& profile, const Signature& sig,
                                 const FiberChart& fiber) {
    return product_chart(conformal_base_chart(profile, sig), fiber.chart);
}

} // namespace solitonforge
