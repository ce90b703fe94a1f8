#pragma once

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>

#include "solitonforge/classify.hpp"
#include "solitonforge/integrate.hpp"
#include "solitonforge/params.hpp"
#include "solitonforge/systems.hpp"

namespace solitonforge {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

/// Numbers that carry an exact rational twin serialize as value + "<key>_exact".
inline void put_exact(Json& j, const std::string& key, double value,
                      const std::optional<Rational>& exact) {
    j[key] = value;
    if (exact) j[key + "_exact"] = to_string(*exact);
}

inline Json to_json(const SolitonParams& p) {
    Json j;
    j["n"] = p.n;
    j["m"] = p.m;
    put_exact(j, "rho", p.rho, p.rho_exact);
    put_exact(j, "lambda_F", p.lambdaF, p.lambdaF_exact);
    put_exact(j, "lambda_tilde", p.lambdaTilde, p.lambdaTilde_exact);
    return j;
}

inline Json to_json(const EquationStat& e) {
    Json j;
    j["id"] = e.id;
    j["max_abs"] = e.max_abs;
    j["mean_abs"] = e.mean_abs;
    j["argmax_r"] = e.argmax_r;
    return j;
}

inline Json to_json(const ResidualReport& r) {
    Json j;
    j["grid"] = r.grid;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    j["max_abs"] = r.max_abs();
    Json eqs = Json::array();
    for (const auto& e : r.per_equation) eqs.push_back(to_json(e));
    j["per_equation"] = std::move(eqs);
    return j;
}

inline Json to_json(const CylinderCertificate& c) {
    Json j;
    j["n"] = c.n;
    j["k2"] = c.k2;
    j["expected_spherical_sectional"] = c.expected_spherical;
    j["expected_scalar"] = c.expected_scalar;
    j["lambda_F"] = c.lambdaF;
    j["lambda_F_positive"] = c.lambdaF_positive;
    j["max_spherical_dev"] = c.max_spherical_dev;
    j["max_radial_dev"] = c.max_radial_dev;
    j["max_scalar_dev"] = c.max_scalar_dev;
    j["points"] = c.points;
    j["planes"] = c.planes;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    if (!c.worst.empty()) j["worst"] = c.worst;
    j["statement"] = c.statement;
    return j;
}

inline Json to_json(const SolutionDescriptor& d) {
    Json j;
    j["family"] = to_string(d.family);
    j["params"] = to_json(d.params);
    put_exact(j, "k2", d.k2.value, d.k2.exact);
    if (d.family == Family::A) {
        j["k1"] = d.k1;
    } else {
        j["c"] = d.c;
        j["c1"] = d.c1;
    }
    j["type"] = to_string(d.type());
    j["constant_potential"] = d.constant_potential;
    j["profile"] = d.profile.name;
    if (!d.note.empty()) j["note"] = d.note;
    return j;
}

inline Json to_json(const ExponentAnalysis& a) {
    Json j;
    j["rhs"] = a.rhs;
    j["consistent"] = a.consistent;
    Json roots = Json::array();
    for (const auto& root : a.admissible) {
        Json r;
        r["s"] = root.s;
        r["rhs_constraint"] = root.rhs_constraint;
        r["degenerate"] = root.degenerate;
        roots.push_back(std::move(r));
    }
    j["admissible"] = std::move(roots);
    return j;
}

inline Json to_json(const ExponentScanEntry& e) {
    Json j;
    j["s"] = e.s;
    j["passes"] = e.passes;
    j["max_residual"] = e.max_residual;
    j["max_R20"] = e.max_r20;
    j["predicted_R20"] = e.predicted_r20;
    j["prediction_rel_dev"] = e.prediction_rel_dev;
    return j;
}

/// CSV export of an integrated trajectory, one row per sample.
inline std::string trajectory_csv(const PowerLawTrajectory& t) {
    std::ostringstream out;
    out.precision(17);
    out << "r,psi,dpsi,s_local\n";
    for (const auto& p : t.samples)
        out << p.r << ',' << p.psi << ',' << p.dpsi << ',' << p.s_local << '\n';
    return out.str();
}

} // namespace solitonforge
