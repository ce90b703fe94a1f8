#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "solitonforge/families.hpp"
#include "solitonforge/integrate.hpp"
#include "solitonforge/systems.hpp"

using namespace solitonforge;

TEST_CASE("known power-law initial data integrates to the closed form") {
    {
        const auto tr = integrate_power_law_ode(1.0, 1.0, 0.5, 4.0);
        CHECK_THAT(tr.s_star, Catch::Matchers::WithinAbs(0.5, 1e-14));
        CHECK_THAT(tr.samples.back().psi, Catch::Matchers::WithinAbs(2.0, 1e-7));
    }
    {
        const auto tr = integrate_power_law_ode(1.0, 1.0, 1.0, 3.0);
        CHECK_THAT(tr.s_star, Catch::Matchers::WithinAbs(1.0, 1e-14));
        CHECK_THAT(tr.samples.back().psi, Catch::Matchers::WithinAbs(3.0, 1e-7));
    }
    {
        const auto tr = integrate_power_law_ode(1.0, 2.0, 1.0, 4.0);
        CHECK_THAT(tr.s_star, Catch::Matchers::WithinAbs(0.5, 1e-14));
        CHECK_THAT(tr.k_star, Catch::Matchers::WithinAbs(2.0, 1e-14));
        CHECK_THAT(tr.samples.back().psi, Catch::Matchers::WithinAbs(4.0, 1e-7));
    }
}

TEST_CASE("trajectories stay on the power family") {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> slope(-1.0, 2.0);
    std::uniform_real_distribution<double> start(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double r0 = start(rng);
        const double psi0 = amp(rng);
        const double dpsi0 = slope(rng) * psi0 / r0;
        const auto tr = integrate_power_law_ode(r0, psi0, dpsi0, 10.0 * r0);
        CHECK(tr.closure_error < 1e-6);
        CHECK(tr.s_drift < 1e-7);
        CHECK(tr.samples.front().r == r0);
        CHECK(tr.samples.back().r == 10.0 * r0);
    }
}

TEST_CASE("backward integration works too") {
    const auto tr = integrate_power_law_ode(4.0, 2.0, 0.25, 1.0);
    CHECK_THAT(tr.s_star, Catch::Matchers::WithinAbs(0.5, 1e-14));
    CHECK_THAT(tr.samples.back().psi, Catch::Matchers::WithinAbs(1.0, 1e-7));
}

TEST_CASE("negative-exponent data decays through the positivity floor") {
    CHECK_THROWS_AS(integrate_power_law_ode(1.0, 1e-3, -1.0, 10.0), PositivityError);
}

TEST_CASE("invalid initial data is rejected") {
    CHECK_THROWS_AS(integrate_power_law_ode(-1.0, 1.0, 0.0, 2.0), ParameterError);
    CHECK_THROWS_AS(integrate_power_law_ode(1.0, 0.0, 0.0, 2.0), ParameterError);
    CHECK_THROWS_AS(integrate_power_law_ode(1.0, 1.0, 0.0, 1.0), ParameterError);
}

TEST_CASE("recovered potential matches the log-quadratic closed form") {
    const RadialProfile psi = make_power_profile(1.0, 0.5);
    const double r1 = std::exp(2.0);
    const auto rec = recover_h(psi, 3, 0.0, 1.0, r1);
    // h(e^2) - h(1) = (n-2)/8 * (ln e^2)^2 = 0.5
    const double lo = rec.profile.h(1.0 + 1e-9);
    const double hi = rec.profile.h(r1 - 1e-9);
    CHECK_THAT(hi - lo, Catch::Matchers::WithinAbs(0.5, 1e-7));
    for (double r : {1.5, 2.5, 5.0}) {
        const double expected = (1.0 / 8.0) * std::log(r) * std::log(r);
        CHECK_THAT(rec.profile.h(r), Catch::Matchers::WithinAbs(expected, 1e-7));
    }
}

TEST_CASE("recovered potential matches the inverse-linear closed form") {
    const double lambdaF = 3.0;
    const RadialProfile psi = make_power_profile(1.0, 1.0);
    const auto rec = recover_h(psi, 4, -lambdaF / 2.0, 1.0, 8.0);
    for (double r : {1.5, 3.0, 7.0}) {
        const double expected = lambdaF / 2.0 * (1.0 / r - 1.0); // h(1) = 0 normalization
        CHECK_THAT(rec.profile.h(r), Catch::Matchers::WithinAbs(expected, 1e-7));
    }
}

TEST_CASE("flat factor with zero seed keeps the potential constant") {
    const RadialProfile psi = make_power_profile(1.0, 0.0);
    const auto rec = recover_h(psi, 3, 0.0, 1.0, 5.0);
    for (double r : {1.2, 2.0, 4.5}) CHECK(std::abs(rec.profile.h(r)) < 1e-12);
}

TEST_CASE("recovery round trip closes the second-order equation") {
    auto [sol, exact] = make_family_B(3, 4, ExactScalar(1));
    const RadialProfile psi = make_power_profile(1.0, 0.5);
    const auto rec = recover_h(psi, 3, 0.0, 1.0, std::exp(2.0));
    for (double r : log_spaced(1.02, std::exp(2.0) * 0.98, 50)) {
        const SchoutenResiduals res = schouten_residuals(rec.profile, sol.params, r);
        CHECK(std::abs(res.r18) < 1e-8);
    }
}
