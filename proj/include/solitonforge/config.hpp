#pragma once

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "solitonforge/chart.hpp"
#include "solitonforge/classify.hpp"
#include "solitonforge/errors.hpp"
#include "solitonforge/families.hpp"
#include "solitonforge/oracle.hpp"
#include "solitonforge/report.hpp"

namespace solitonforge {

/// Config file violates the schema (distinct from malformed JSON, which the
/// JSON library reports itself, and from semantic constraint violations).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchemaVersion = 1;

/// Accepts a JSON number or a "p/q" string; integers and rational strings
/// stay exact.
inline ExactScalar exact_from_json(const Json& j, const std::string& field) {
    if (j.is_string()) {
        const auto q = parse_rational(j.get<std::string>());
        if (!q) throw ConfigError(field + ": malformed rational string '" +
                                  j.get<std::string>() + "'");
        return ExactScalar(*q);
    }
    if (j.is_number_integer()) {
        const long long v = j.get<long long>();
        return ExactScalar(Rational(v));
    }
    if (j.is_number()) return ExactScalar(j.get<double>());
    throw ConfigError(field + ": expected number or rational string");
}

struct ProfileSpec {
    enum class Kind { FamilyA, FamilyB, Power, Tabulated } kind = Kind::FamilyA;
    ExactScalar k2{1.0};
    double k1 = 0.0, c = 0.0, c1 = 0.0; // family constants
    double power_k = 1.0, power_s = 1.0;
    std::vector<TabulatedSample> samples;
};

struct FiberSpec {
    enum class Kind { Sphere, Flat, Product } kind = Kind::Sphere;
    int m = 2;
    double R = 1.0;
    std::vector<FiberSpec> factors;

    FiberChart build() const {
        switch (kind) {
            case Kind::Sphere: return sphere_fiber(m, R);
            case Kind::Flat: return flat_fiber(m);
            default: {
                if (factors.size() < 2) throw ConfigError("fiber: product needs >= 2 factors");
                FiberChart f = product_fiber(factors[0].build(), factors[1].build());
                for (std::size_t i = 2; i < factors.size(); ++i)
                    f = product_fiber(f, factors[i].build());
                return f;
            }
        }
    }

    int dim() const {
        if (kind != Kind::Product) return m;
        int d = 0;
        for (const auto& f : factors) d += f.dim();
        return d;
    }
};

struct Tolerances {
    double closed = 1e-10;
    double oracle = 1e-5;
};

struct VerifyConfig {
    Json raw; // the exact document the run was produced from
    std::uint64_t seed = 0;
    Signature signature = Signature::riemannian(3);
    int m = 2;
    ExactScalar rho{0.25};
    bool rho_is_schouten = true;
    std::optional<ExactScalar> lambdaF;
    std::optional<ExactScalar> lambdaTilde;
    ProfileSpec profile;
    std::optional<FiberSpec> fiber;
    GridSpec grid;
    Tolerances tolerances;

    static VerifyConfig from_json(const Json& j);
    static VerifyConfig from_file(const std::string& path);
};

inline FiberSpec fiber_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("fiber: need an object with 'kind'");
    FiberSpec f;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "sphere") {
        f.kind = FiberSpec::Kind::Sphere;
        f.m = j.at("m").get<int>();
        f.R = j.value("R", 1.0);
    } else if (kind == "flat") {
        f.kind = FiberSpec::Kind::Flat;
        f.m = j.at("m").get<int>();
    } else if (kind == "product") {
        f.kind = FiberSpec::Kind::Product;
        if (!j.contains("factors") || !j.at("factors").is_array())
            throw ConfigError("fiber: product needs a 'factors' array");
        for (const auto& sub : j.at("factors")) f.factors.push_back(fiber_from_json(sub));
        f.m = f.dim();
    } else {
        throw ConfigError("fiber: unknown kind '" + kind + "'");
    }
    return f;
}

inline ProfileSpec profile_from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("profile: need an object");
    ProfileSpec p;
    if (j.contains("family")) {
        const std::string fam = j.at("family").get<std::string>();
        if (fam == "A")
            p.kind = ProfileSpec::Kind::FamilyA;
        else if (fam == "B")
            p.kind = ProfileSpec::Kind::FamilyB;
        else
            throw ConfigError("profile: family must be 'A' or 'B'");
        p.k2 = exact_from_json(j.value("k2", Json(1)), "profile.k2");
        p.k1 = j.value("k1", 0.0);
        p.c = j.value("c", 0.0);
        p.c1 = j.value("c1", 0.0);
    } else if (j.contains("power")) {
        p.kind = ProfileSpec::Kind::Power;
        const Json& pw = j.at("power");
        p.power_k = pw.at("k").get<double>();
        p.power_s = pw.at("s").get<double>();
    } else if (j.contains("tabulated")) {
        p.kind = ProfileSpec::Kind::Tabulated;
        const Json& rows = j.at("tabulated").at("samples");
        if (!rows.is_array()) throw ConfigError("profile.tabulated.samples: need an array");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() < 2)
                throw ConfigError("profile.tabulated.samples: rows are [r, psi] or [r, psi, h]");
            TabulatedSample s;
            s.r = row[0].get<double>();
            s.psi = row[1].get<double>();
            s.h = row.size() > 2 ? row[2].get<double>() : 0.0;
            p.samples.push_back(s);
        }
    } else {
        throw ConfigError("profile: need one of 'family', 'power', 'tabulated'");
    }
    return p;
}

inline VerifyConfig VerifyConfig::from_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    VerifyConfig c;
    c.raw = j;
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kConfigSchemaVersion)
        throw ConfigError("config: unsupported schema_version");
    c.seed = j.value("seed", std::uint64_t{0});

    if (j.contains("signature")) {
        std::vector<int> eps;
        for (const auto& e : j.at("signature")) eps.push_back(e.get<int>());
        c.signature = Signature(std::move(eps));
    } else if (j.contains("n")) {
        c.signature = Signature::riemannian(j.at("n").get<int>());
    } else {
        throw ConfigError("config: need 'n' or 'signature'");
    }
    if (!j.contains("m")) throw ConfigError("config: need 'm'");
    c.m = j.at("m").get<int>();

    const int n = c.signature.dim();
    if (!j.contains("rho") || (j.at("rho").is_string() && j.at("rho").get<std::string>() == "schouten")) {
        c.rho = ExactScalar(schouten_rho_exact(n));
        c.rho_is_schouten = true;
    } else {
        c.rho = exact_from_json(j.at("rho"), "rho");
        c.rho_is_schouten =
            c.rho.exact ? *c.rho.exact == schouten_rho_exact(n)
                        : std::abs(c.rho.value - schouten_rho(n)) <= 1e-15;
    }

    if (j.contains("lambdaF")) c.lambdaF = exact_from_json(j.at("lambdaF"), "lambdaF");
    if (j.contains("lambdaTilde"))
        c.lambdaTilde = exact_from_json(j.at("lambdaTilde"), "lambdaTilde");

    if (!j.contains("profile")) throw ConfigError("config: need 'profile'");
    c.profile = profile_from_json(j.at("profile"));

    if (j.contains("fiber")) c.fiber = fiber_from_json(j.at("fiber"));

    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        c.grid.r_min = g.value("r_min", 1e-2);
        c.grid.r_max = g.value("r_max", 1e2);
        c.grid.count = g.value("count", 1000);
        if (!(c.grid.r_min > 0.0) || !(c.grid.r_max >= c.grid.r_min) || c.grid.count < 1)
            throw ConfigError("config: grid needs 0 < r_min <= r_max and count >= 1");
    }
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        c.tolerances.closed = t.value("closed", 1e-10);
        c.tolerances.oracle = t.value("oracle", 1e-5);
    }
    return c;
}

inline VerifyConfig VerifyConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    Json j;
    in >> j; // malformed JSON raises nlohmann::json::parse_error
    return from_json(j);
}

/// Profile plus fully resolved constants for one verification run.
struct ResolvedModel {
    RadialProfile profile;
    SolitonParams params;
    std::vector<std::string> notes;
    bool constant_potential = false;
};

inline void check_forced(const char* name, const std::optional<ExactScalar>& given,
                         const ExactScalar& forced) {
    if (!given) return;
    bool ok;
    if (given->exact && forced.exact)
        ok = *given->exact == *forced.exact;
    else
        ok = std::abs(given->value - forced.value) <= 1e-12 * std::max(1.0, std::abs(forced.value));
    if (!ok)
        throw ConstraintError(std::string(name) + " = " + std::to_string(given->value) +
                              " contradicts the value " + std::to_string(forced.value) +
                              " forced by the solution family");
}

// An explicit lambdaTilde in a config is the claim under test, not a hard
// constraint: it replaces the family value and the residual sweep exposes any
// mismatch. Family B's lambda_F, by contrast, shapes the potential itself and
// an inconsistent explicit value is a constraint error.
inline void apply_lambda_tilde_claim(const VerifyConfig& c, ResolvedModel& out) {
    if (!c.lambdaTilde) return;
    const bool same = out.params.lambdaTilde_exact && c.lambdaTilde->exact
                          ? *out.params.lambdaTilde_exact == *c.lambdaTilde->exact
                          : std::abs(out.params.lambdaTilde - c.lambdaTilde->value) <=
                                1e-15 * std::max(1.0, std::abs(out.params.lambdaTilde));
    if (!same)
        out.notes.push_back("lambdaTilde taken from the config; differs from the family value " +
                            std::to_string(out.params.lambdaTilde));
    out.params.lambdaTilde = c.lambdaTilde->value;
    out.params.lambdaTilde_exact = c.lambdaTilde->exact;
}

inline ResolvedModel resolve_model(const VerifyConfig& c) {
    const int n = c.signature.dim();
    ResolvedModel out;
    switch (c.profile.kind) {
        case ProfileSpec::Kind::FamilyA: {
            const ExactScalar lamF = c.lambdaF.value_or(ExactScalar(0));
            if (!c.lambdaF) out.notes.push_back("family A: lambdaF defaulted to 0");
            auto [sol, prof] = make_family_A(n, c.m, lamF, c.profile.k2, c.profile.k1);
            out.profile = std::move(prof);
            out.params = sol.params;
            out.constant_potential = sol.constant_potential;
            apply_lambda_tilde_claim(c, out);
            if (out.constant_potential)
                out.notes.push_back("constant potential: lambda_F = 0 makes h identically k1");
            break;
        }
        case ProfileSpec::Kind::FamilyB: {
            auto [sol, prof] = make_family_B(n, c.m, c.profile.k2, c.profile.c, c.profile.c1);
            check_forced("lambdaF", c.lambdaF,
                         sol.params.lambdaF_exact ? ExactScalar(*sol.params.lambdaF_exact)
                                                  : ExactScalar(sol.params.lambdaF));
            out.profile = std::move(prof);
            out.params = sol.params;
            apply_lambda_tilde_claim(c, out);
            break;
        }
        case ProfileSpec::Kind::Power: {
            out.profile = make_power_profile(c.profile.power_k, c.profile.power_s);
            out.params = SolitonParams::make(n, c.m, c.rho, c.lambdaF.value_or(ExactScalar(0)),
                                             c.lambdaTilde.value_or(ExactScalar(0)));
            out.constant_potential = true;
            out.notes.push_back("power profile: potential identically zero");
            break;
        }
        case ProfileSpec::Kind::Tabulated: {
            out.profile = make_tabulated_profile(c.profile.samples);
            out.params = SolitonParams::make(n, c.m, c.rho, c.lambdaF.value_or(ExactScalar(0)),
                                             c.lambdaTilde.value_or(ExactScalar(0)));
            out.constant_potential = out.profile.constant_potential;
            break;
        }
    }
    // Families force the Schouten rho; reject configs that pin another one.
    if ((c.profile.kind == ProfileSpec::Kind::FamilyA ||
         c.profile.kind == ProfileSpec::Kind::FamilyB) &&
        !c.rho_is_schouten)
        throw ConstraintError("family profiles require rho = 1/(2(n-1))");
    return out;
}

struct VerifyRun {
    ResolvedModel model;
    ResidualReport residuals;
    bool pass = false;
};

inline VerifyRun run_verify(const VerifyConfig& c) {
    VerifyRun run;
    run.model = resolve_model(c);
    run.residuals = radial_system_report(run.model.profile, c.signature, run.model.params, c.grid,
                                         c.tolerances.closed);
    run.pass = run.residuals.pass;
    return run;
}

/// Closed-form curvature against the numerical engine on the full product
/// chart at seeded random admitted points.
struct OracleComparison {
    int points = 0;
    std::uint64_t seed = 0;
    double tolerance = 1e-5;
    double max_ricci_dev = 0.0;
    double max_hessian_dev = 0.0;
    double max_scalar_dev = 0.0;
    bool experimental_pseudo_riemannian = false;
    bool pass = false;
};

/// Random base point with the radial invariant drawn uniformly from
/// [r_lo, r_hi]; any negative-signature directions receive a bounded
/// perturbation that the positive block compensates exactly.
inline Eigen::VectorXd sample_base_point(const Signature& sig, std::mt19937_64& rng,
                                         double r_lo = 0.5, double r_hi = 2.5) {
    const int n = sig.dim();
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radial(r_lo, r_hi);
    std::uniform_real_distribution<double> minus_sq(0.0, 0.4);
    Eigen::VectorXd x(n);
    for (;;) {
        double np2 = 0.0, nm2 = 0.0;
        bool has_minus = false;
        for (int i = 0; i < n; ++i) {
            x[i] = gauss(rng);
            (sig.eps(i) > 0 ? np2 : nm2) += x[i] * x[i];
            has_minus = has_minus || sig.eps(i) < 0;
        }
        if (np2 < 1e-12) continue;
        const double q = has_minus && nm2 > 1e-12 ? minus_sq(rng) : 0.0;
        const double p = radial(rng) + q; // r(x) = p - q
        const double sp = std::sqrt(p / np2);
        const double sm = q > 0.0 ? std::sqrt(q / nm2) : 0.0;
        for (int i = 0; i < n; ++i) x[i] *= sig.eps(i) > 0 ? sp : sm;
        return x;
    }
}

/// Sampling window for the radial invariant: O(1) radii when the domain
/// allows, always shrunk away from the domain boundary so finite-difference
/// stencils stay admissible.
inline std::pair<double, double> oracle_radial_window(const Interval& domain) {
    const double dlo = std::max(domain.lo, 0.0);
    if (std::isfinite(domain.hi)) {
        const double w = domain.hi - dlo;
        const double lo = std::max(0.5, dlo + 0.05 * w);
        const double hi = std::min(2.5, domain.hi - 0.05 * w);
        if (lo < hi) return {lo, hi};
        return {dlo + 0.25 * w, domain.hi - 0.25 * w};
    }
    const double lo = std::max(0.5, dlo > 0.0 ? 1.05 * dlo : 0.5);
    return {lo, std::max(2.5, 2.0 * lo)};
}

inline OracleComparison compare_with_oracle(const RadialProfile& profile, const Signature& sig,
                                            const FiberChart& fiber, std::uint64_t seed,
                                            int points, double tolerance,
                                            const oracle::FdOptions& fd = {}) {
    const int n = sig.dim();
    const int mf = fiber.chart.dim;
    const MetricChart chart = product_chart(profile, sig, fiber);

    // The fiber block of the closed form is lambda_F g_F with the fiber's own
    // Einstein constant; the scalar adds lambda_F * dim(F).
    const SolitonParams curv_params =
        SolitonParams::make(n, mf, ExactScalar(schouten_rho(n)), ExactScalar(fiber.lambdaF),
                            ExactScalar(0.0));

    OracleComparison cmp;
    cmp.points = points;
    cmp.seed = seed;
    cmp.tolerance = tolerance;
    cmp.experimental_pseudo_riemannian = !sig.is_riemannian();

    std::mt19937_64 rng(seed);
    const auto [r_lo, r_hi] = oracle_radial_window(profile.domain);
    for (int k = 0; k < points; ++k) {
        const Eigen::VectorXd x = sample_base_point(sig, rng, r_lo, r_hi);
        const Eigen::VectorXd u = fiber.sample(rng);
        Eigen::VectorXd p(n + mf);
        p << x, u;

        auto [ric_base, fiber_factor] = ricci_closed_form(profile, sig, curv_params, x);
        Eigen::MatrixXd ric_expected = Eigen::MatrixXd::Zero(n + mf, n + mf);
        ric_expected.topLeftCorner(n, n) = ric_base;
        ric_expected.bottomRightCorner(mf, mf) = fiber_factor * fiber.chart.metric(u);
        const Eigen::MatrixXd ric_num = oracle::ricci_numeric(chart, p, fd);
        cmp.max_ricci_dev =
            std::max(cmp.max_ricci_dev, (ric_num - ric_expected).cwiseAbs().maxCoeff());

        Eigen::MatrixXd hess_expected = Eigen::MatrixXd::Zero(n + mf, n + mf);
        hess_expected.topLeftCorner(n, n) = hessian_closed_form(profile, sig, x);
        const auto h_on_chart = [&](const Eigen::VectorXd& q) {
            return profile.h(sig.radial(q.head(n)));
        };
        const Eigen::MatrixXd hess_num = oracle::hessian_numeric(chart, h_on_chart, p, fd);
        cmp.max_hessian_dev =
            std::max(cmp.max_hessian_dev, (hess_num - hess_expected).cwiseAbs().maxCoeff());

        const ScalarCurvature ks = scalar_curvature(profile, sig, curv_params, x);
        const double scal_num = oracle::scalar_numeric(chart, p, fd);
        cmp.max_scalar_dev = std::max(cmp.max_scalar_dev, std::abs(scal_num - ks.K_total));
    }
    cmp.pass = cmp.max_ricci_dev < cmp.tolerance && cmp.max_hessian_dev < cmp.tolerance &&
               cmp.max_scalar_dev < cmp.tolerance;
    return cmp;
}

inline OracleComparison run_oracle_compare(const VerifyConfig& c, int points = 50) {
    if (!c.fiber) throw ConfigError("oracle comparison needs a 'fiber' block");
    const ResolvedModel model = resolve_model(c);
    return compare_with_oracle(model.profile, c.signature, c.fiber->build(), c.seed, points,
                               c.tolerances.oracle);
}

inline Json to_json(const OracleComparison& c) {
    Json j;
    j["points"] = c.points;
    j["seed"] = c.seed;
    j["tolerance"] = c.tolerance;
    j["max_ricci_dev"] = c.max_ricci_dev;
    j["max_hessian_dev"] = c.max_hessian_dev;
    j["max_scalar_dev"] = c.max_scalar_dev;
    j["experimental_pseudo_riemannian"] = c.experimental_pseudo_riemannian;
    j["pass"] = c.pass;
    return j;
}

inline Json verify_report_json(const VerifyConfig& c, const VerifyRun& run,
                               const std::optional<OracleComparison>& oracle_cmp) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["tool"] = "soliton-forge";
    j["command"] = "verify";
    j["config"] = c.raw;
    j["signature"] = c.signature.describe();
    j["profile"] = run.model.profile.name;
    j["params"] = to_json(run.model.params);
    j["constant_potential"] = run.model.constant_potential;
    if (!run.model.notes.empty()) j["notes"] = run.model.notes;
    j["residuals"] = to_json(run.residuals);
    bool pass = run.pass;
    if (oracle_cmp) {
        j["oracle"] = to_json(*oracle_cmp);
        pass = pass && oracle_cmp->pass;
    }
    j["pass"] = pass;
    return j;
}

} // namespace solitonforge
