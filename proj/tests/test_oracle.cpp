#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "solitonforge/chart.hpp"
#include "solitonforge/curvature.hpp"
#include "solitonforge/families.hpp"
#include "solitonforge/oracle.hpp"

using namespace solitonforge;

namespace {

Eigen::VectorXd vecn(std::initializer_list<double> vals) {
    Eigen::VectorXd x(static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) x[i++] = v;
    return x;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("flat chart has vanishing christoffel symbols and curvature") {
    const MetricChart flat = flat_chart(Signature({1, 1, -1, 1}));
    const Eigen::VectorXd p = vecn({0.3, -2.0, 0.7, 5.0});
    for (const auto& g : oracle::christoffel(flat, p)) CHECK(max_abs(g) < 1e-9);
    CHECK(max_abs(oracle::ricci_numeric(flat, p)) < 1e-7);
    CHECK(std::abs(oracle::scalar_numeric(flat, p)) < 1e-7);

    const Eigen::VectorXd u = vecn({1.0, 0.0, 0.0, 0.0});
    const Eigen::VectorXd v = vecn({0.0, 1.0, 0.0, 1.0});
    CHECK(std::abs(oracle::sectional_numeric(flat, p, u, v)) < 1e-6);
}

TEST_CASE("sphere chart is critical at the origin") {
    const FiberChart sph = sphere_fiber(2, 1.0);
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
    for (const auto& g : oracle::christoffel(sph.chart, origin)) CHECK(max_abs(g) < 1e-9);
}

TEST_CASE("conformal christoffel symbols match the closed form") {
    // g = delta / r^2 on R^3, i.e. psi = r; closed form
    // Gamma^k_ij = -(delta_ik phi_j + delta_jk phi_i - delta_ij phi_k), phi = ln psi.
    const RadialProfile prof = make_power_profile(1.0, 1.0);
    const Signature sig = Signature::riemannian(3);
    const MetricChart chart = conformal_base_chart(prof, sig);
    const Eigen::VectorXd x = vecn({1.0, 0.0, 0.0});

    const double r = sig.radial(x);
    Eigen::VectorXd phi(3); // d_k ln psi(r(x)) = 2 x_k psi' / psi
    for (int k = 0; k < 3; ++k) phi[k] = 2.0 * x[k] * prof.psi1(r) / prof.psi(r);

    const auto gamma = oracle::christoffel(chart, x);
    for (int k = 0; k < 3; ++k) {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const double expected = -((k == i ? phi[j] : 0.0) + (k == j ? phi[i] : 0.0) -
                                          (i == j ? phi[k] : 0.0));
                CHECK_THAT(gamma[static_cast<std::size_t>(k)](i, j),
                           Catch::Matchers::WithinAbs(expected, 1e-6));
            }
        }
    }
}

TEST_CASE("round sphere satisfies its Einstein equation numerically") {
    const FiberChart sph = sphere_fiber(2, 1.0);
    const Eigen::VectorXd u = vecn({0.3, -0.1});
    const Eigen::MatrixXd ric = oracle::ricci_numeric(sph.chart, u);
    const Eigen::MatrixXd g = sph.chart.metric(u);
    CHECK(max_abs(ric - sph.lambdaF * g) < 1e-5);
    CHECK_THAT(oracle::scalar_numeric(sph.chart, u), Catch::Matchers::WithinAbs(2.0, 1e-4));
}

TEST_CASE("examples' fibers carry their stated Einstein constants") {
    CHECK_THAT(sphere_fiber(2, std::sqrt(2.0) / 2.0).lambdaF,
               Catch::Matchers::WithinAbs(2.0, 1e-14));
    CHECK_THAT(sphere_fiber(3, 1.0).lambdaF, Catch::Matchers::WithinAbs(2.0, 1e-14));
    const FiberChart s2s2 = product_fiber(sphere_fiber(2, 1.0), sphere_fiber(2, 1.0));
    CHECK(s2s2.chart.dim == 4);
    CHECK_THAT(s2s2.lambdaF, Catch::Matchers::WithinAbs(1.0, 1e-14));
    CHECK_THROWS_AS(product_fiber(sphere_fiber(2, 1.0), sphere_fiber(2, 2.0)), ConstraintError);
}

TEST_CASE("einstein fiber certification at random admitted points") {
    std::mt19937_64 rng(0);
    for (const FiberChart& fiber :
         {sphere_fiber(2, 1.0), sphere_fiber(3, 1.0), sphere_fiber(2, std::sqrt(2.0) / 2.0),
          product_fiber(sphere_fiber(2, 1.0), sphere_fiber(2, 1.0)), flat_fiber(2)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd u = fiber.sample(rng);
            REQUIRE(fiber.chart.admits(u));
            const Eigen::MatrixXd ric = oracle::ricci_numeric(fiber.chart, u);
            const Eigen::MatrixXd g = fiber.chart.metric(u);
            CHECK(max_abs(ric - fiber.lambdaF * g) < 1e-5);
        }
    }
}

TEST_CASE("product chart has numerically vanishing mixed Ricci block") {
    auto [sol, prof] = make_family_B(3, 2, ExactScalar(1));
    (void)sol;
    const MetricChart chart =
        product_chart(prof, Signature::riemannian(3), sphere_fiber(2, 1.0));
    CHECK(chart.dim == 5);
    const Eigen::VectorXd p = vecn({0.8, 0.3, 0.5, 0.2, -0.1});
    const Eigen::MatrixXd ric = oracle::ricci_numeric(chart, p);
    CHECK(max_abs(ric.topRightCorner(3, 2)) < 1e-6);
}

TEST_CASE("trivial factors assemble the identity chart") {
    const RadialProfile flat = make_power_profile(1.0, 0.0);
    const MetricChart chart = product_chart(flat, Signature::riemannian(3), flat_fiber(2));
    CHECK(chart.dim == 5);
    Eigen::VectorXd p(5);
    p << 0.7, -0.2, 1.1, 0.4, -0.9;
    CHECK(max_abs(chart.metric(p) - Eigen::MatrixXd::Identity(5, 5)) == 0.0);
}

TEST_CASE("expanding example assembles a seven dimensional chart") {
    auto [sol, prof] = make_family_B(3, 4, ExactScalar(1));
    (void)sol;
    const FiberChart s2s2 = product_fiber(sphere_fiber(2, 1.0), sphere_fiber(2, 1.0));
    const MetricChart chart = product_chart(prof, Signature::riemannian(3), s2s2);
    CHECK(chart.dim == 7);
}

TEST_CASE("closed-form Ricci matches the numerical engine on the base chart") {
    auto [sol, prof] = make_family_B(3, 2, ExactScalar(1));
    const Signature sig = Signature::riemannian(3);
    const MetricChart chart = conformal_base_chart(prof, sig);
    const Eigen::VectorXd x = vecn({1.0, 0.0, 0.0});
    auto [ric_closed, fiber] = ricci_closed_form(prof, sig, sol.params, x);
    (void)fiber;
    CHECK(max_abs(oracle::ricci_numeric(chart, x) - ric_closed) < 1e-5);
}

TEST_CASE("square-root base chart has cylinder scalar curvature") {
    auto [sol, prof] = make_family_B(3, 2, ExactScalar(1));
    const Signature sig = Signature::riemannian(3);
    const MetricChart chart = conformal_base_chart(prof, sig);
    const Eigen::VectorXd x = vecn({0.9, 0.4, -0.2});
    const double numeric = oracle::scalar_numeric(chart, x);
    CHECK_THAT(numeric, Catch::Matchers::WithinAbs(2.0, 1e-4));
    const double closed = scalar_curvature(prof, sig, sol.params, x).K_base;
    CHECK_THAT(numeric, Catch::Matchers::WithinAbs(closed, 1e-4));
}

TEST_CASE("cylinder sectional curvatures split by plane type") {
    const RadialProfile prof = make_power_profile(1.0, 0.5); // g = delta / r
    const MetricChart chart = conformal_base_chart(prof, Signature::riemannian(3));
    const Eigen::VectorXd x = vecn({1.0, 0.0, 0.0});
    const Eigen::VectorXd radial = vecn({1.0, 0.0, 0.0});
    const Eigen::VectorXd t1 = vecn({0.0, 1.0, 0.0});
    const Eigen::VectorXd t2 = vecn({0.0, 0.0, 1.0});
    CHECK_THAT(oracle::sectional_numeric(chart, x, t1, t2), Catch::Matchers::WithinAbs(1.0, 1e-4));
    CHECK_THAT(oracle::sectional_numeric(chart, x, radial, t1),
               Catch::Matchers::WithinAbs(0.0, 1e-4));
    CHECK_THROWS_AS(oracle::sectional_numeric(chart, x, t1, 2.0 * t1), PlaneError);
}

TEST_CASE("scalar equals the ricci trace by construction") {
    const FiberChart sph = sphere_fiber(3, 1.0);
    const Eigen::VectorXd u = vecn({0.2, 0.1, -0.3});
    const Eigen::MatrixXd ric = oracle::ricci_numeric(sph.chart, u);
    const Eigen::MatrixXd ginv = oracle::inverse_metric(sph.chart, u);
    const double direct = oracle::scalar_numeric(sph.chart, u);
    CHECK_THAT(direct, Catch::Matchers::WithinAbs((ginv * ric).trace(), 1e-12));
}

TEST_CASE("halving the step cuts the sphere Ricci residual by at least eight") {
    const FiberChart sph = sphere_fiber(2, 1.0);
    const Eigen::VectorXd u = vecn({0.3, -0.1});
    const Eigen::MatrixXd g = sph.chart.metric(u);
    const auto residual = [&](double step) {
        oracle::FdOptions opt;
        opt.step = step;
        return max_abs(oracle::ricci_numeric(sph.chart, u, opt) - sph.lambdaF * g);
    };
    const double coarse = residual(2e-2);
    const double fine = residual(1e-2);
    CHECK(coarse / fine >= 8.0);
}

TEST_CASE("covariant hessian matches the closed form on the base chart") {
    auto [sol, prof] = make_family_B(3, 2, ExactScalar(1), 0.5, 1.0);
    (void)sol;
    const Signature sig = Signature::riemannian(3);
    const MetricChart chart = conformal_base_chart(prof, sig);
    const Eigen::VectorXd x = vecn({1.0, 1.0, 0.0});
    const auto f = [&](const Eigen::VectorXd& q) { return prof.h(sig.radial(q)); };
    const Eigen::MatrixXd numeric = oracle::hessian_numeric(chart, f, x);
    const Eigen::MatrixXd closed = hessian_closed_form(prof, sig, x);
    CHECK(max_abs(numeric - closed) < 1e-5);
}

TEST_CASE("singular metric is rejected") {
    MetricChart degenerate;
    degenerate.dim = 2;
    degenerate.metric = [](const Eigen::VectorXd& p) {
        Eigen::MatrixXd g(2, 2);
        g << p[0], 0.0, 0.0, 1.0;
        return g;
    };
    degenerate.admits = [](const Eigen::VectorXd&) { return true; };
    degenerate.name = "degenerate";
    CHECK_THROWS_AS(oracle::christoffel(degenerate, vecn({0.0, 0.5})), SingularMetricError);
    CHECK_THROWS_AS(oracle::ricci_numeric(degenerate, vecn({0.0, 0.5})), SingularMetricError);
}
