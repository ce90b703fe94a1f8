// soliton-forge: verification and exploration of gradient Schouten solitons on
// conformally radial product metrics. Subcommands: examples, verify,
// oracle-compare, integrate, classify.
//
// Exit codes: 0 pass, 1 verification failure, 2 config parse error,
// 3 domain/constraint error, 4 positivity or step-size breakdown.
// The last stdout line is always a machine-parsable verdict.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "solitonforge/classify.hpp"
#include "solitonforge/config.hpp"
#include "solitonforge/integrate.hpp"
#include "solitonforge/report.hpp"

namespace sf = solitonforge;
using sf::Json;

namespace {

int finish(bool pass) {
    std::cout << (pass ? "verdict=pass" : "verdict=fail") << std::endl;
    return pass ? 0 : 1;
}

int finish_error(int code, const std::string& reason) {
    std::cerr << "error: " << reason << std::endl;
    std::cout << "verdict=error exit=" << code << " reason=\"" << reason << "\"" << std::endl;
    return code;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const nlohmann::json::exception& e) {
        return finish_error(2, e.what());
    } catch (const sf::ConfigError& e) {
        return finish_error(2, e.what());
    } catch (const sf::PositivityError& e) {
        return finish_error(4, e.what());
    } catch (const sf::StiffnessError& e) {
        return finish_error(4, e.what());
    } catch (const sf::ParameterError& e) {
        return finish_error(3, e.what());
    } catch (const sf::DomainError& e) {
        return finish_error(3, e.what());
    } catch (const sf::ConstraintError& e) {
        return finish_error(3, e.what());
    } catch (const sf::SingularMetricError& e) {
        return finish_error(3, e.what());
    } catch (const sf::PlaneError& e) {
        return finish_error(3, e.what());
    } catch (const std::exception& e) {
        return finish_error(3, e.what());
    }
}

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw sf::ConfigError("cannot write report to '" + out_path + "'");
        out << report.dump(2) << "\n";
        std::cout << "report written to " << out_path << "\n";
    }
}

std::string exact_column(double value, const std::optional<sf::Rational>& exact) {
    if (exact) return sf::to_string(*exact);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

struct GridOption {
    bool set = false;
    double r_min = 0, r_max = 0;
    int count = 0;
};

void add_grid_option(CLI::App* cmd, GridOption& g) {
    cmd->add_option_function<std::string>(
        "--grid",
        [&g](const std::string& text) {
            if (std::sscanf(text.c_str(), "%lf:%lf:%d", &g.r_min, &g.r_max, &g.count) != 3 ||
                !(g.r_min > 0.0) || !(g.r_max >= g.r_min) || g.count < 1)
                throw CLI::ValidationError("--grid",
                                           "expected r_min:r_max:count with 0 < r_min <= r_max");
            g.set = true;
        },
        "residual grid as r_min:r_max:count (log-spaced)");
}

Json load_config_with_overrides(const std::string& path, const std::optional<std::uint64_t>& seed,
                                const GridOption& grid, const std::optional<double>& tol_closed,
                                const std::optional<double>& tol_oracle) {
    std::ifstream in(path);
    if (!in) throw sf::ConfigError("config: cannot open '" + path + "'");
    Json raw;
    in >> raw;
    if (seed) raw["seed"] = *seed;
    if (grid.set)
        raw["grid"] = {{"r_min", grid.r_min}, {"r_max", grid.r_max}, {"count", grid.count}};
    if (tol_closed) raw["tolerances"]["closed"] = *tol_closed;
    if (tol_oracle) raw["tolerances"]["oracle"] = *tol_oracle;
    return raw;
}

int cmd_examples(int steady_n, bool as_json, std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto records = sf::builtin_examples(steady_n);
    const sf::GridSpec grid{0.1, 10.0, 1000};

    bool all_pass = true;
    Json rows = Json::array();
    std::printf("%-3s %-10s %-3s %-3s %-10s %-13s %-10s %-10s %s\n", "id", "label", "n", "m",
                "lambda_F", "lambda_tilde", "type", "max_resid", "certificate");
    for (const auto& rec : records) {
        const sf::ResidualReport rep = sf::verify_solution(rec.desc, grid);
        const sf::CylinderCertificate cert =
            sf::certify_cylinder(rec.desc.params.n, rec.desc.k2.value, 1e-4, seed);
        const bool pass = rep.pass && cert.pass;
        all_pass = all_pass && pass;

        std::printf("%-3d %-10s %-3d %-3d %-10s %-13s %-10s %-10.2e %s\n", rec.id,
                    rec.label.c_str(), rec.desc.params.n, rec.desc.params.m,
                    exact_column(rec.desc.params.lambdaF, rec.desc.params.lambdaF_exact).c_str(),
                    exact_column(rec.desc.params.lambdaTilde, rec.desc.params.lambdaTilde_exact)
                        .c_str(),
                    sf::to_string(rec.desc.type()).c_str(), rep.max_abs(),
                    cert.pass ? "ok" : "FAILED");

        Json row = sf::to_json(rec.desc);
        row["id"] = rec.id;
        row["label"] = rec.label;
        row["residuals"] = sf::to_json(rep);
        row["certificate"] = sf::to_json(cert);
        row["pass"] = pass;
        rows.push_back(std::move(row));
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (as_json) {
        Json report;
        report["schema_version"] = sf::kReportSchemaVersion;
        report["tool"] = "soliton-forge";
        report["command"] = "examples";
        report["steady_n"] = steady_n;
        report["seed"] = seed;
        report["examples"] = std::move(rows);
        report["elapsed_seconds"] = elapsed;
        report["pass"] = all_pass;
        std::cout << report.dump(2) << "\n";
    }
    return finish(all_pass);
}

int cmd_verify(const std::string& config_path, bool with_oracle, int oracle_points,
               const std::string& out_path, const std::optional<std::uint64_t>& seed,
               const GridOption& grid, const std::optional<double>& tol_closed,
               const std::optional<double>& tol_oracle) {
    const Json raw = load_config_with_overrides(config_path, seed, grid, tol_closed, tol_oracle);
    const sf::VerifyConfig cfg = sf::VerifyConfig::from_json(raw);
    const sf::VerifyRun run = sf::run_verify(cfg);
    std::optional<sf::OracleComparison> cmp;
    if (with_oracle) cmp = sf::run_oracle_compare(cfg, oracle_points);
    const Json report = sf::verify_report_json(cfg, run, cmp);
    emit(report, out_path);
    return finish(report.at("pass").get<bool>());
}

int cmd_oracle_compare(const std::string& config_path, int points, const std::string& out_path,
                       const std::optional<std::uint64_t>& seed, const GridOption& grid,
                       const std::optional<double>& tol_oracle) {
    const Json raw = load_config_with_overrides(config_path, seed, grid, std::nullopt, tol_oracle);
    const sf::VerifyConfig cfg = sf::VerifyConfig::from_json(raw);
    const sf::OracleComparison cmp = sf::run_oracle_compare(cfg, points);
    Json report;
    report["schema_version"] = sf::kReportSchemaVersion;
    report["tool"] = "soliton-forge";
    report["command"] = "oracle-compare";
    report["config"] = raw;
    report["oracle"] = sf::to_json(cmp);
    report["pass"] = cmp.pass;
    emit(report, out_path);
    return finish(cmp.pass);
}

int cmd_integrate(double r0, double psi0, double dpsi0, double r1, std::optional<int> samples,
                  const std::string& csv_path, bool do_recover, double c_init, int recover_n,
                  bool as_json) {
    const sf::PowerLawTrajectory tr = sf::integrate_power_law_ode(r0, psi0, dpsi0, r1, samples);
    std::printf("s_star = %.12g\n", tr.s_star);
    std::printf("k_star = %.12g\n", tr.k_star);
    std::printf("closure_error = %.3e\n", tr.closure_error);
    std::printf("s_drift = %.3e\n", tr.s_drift);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw sf::ConfigError("cannot write CSV to '" + csv_path + "'");
        out << sf::trajectory_csv(tr);
        std::printf("trajectory written to %s\n", csv_path.c_str());
    }

    Json report;
    report["command"] = "integrate";
    report["s_star"] = tr.s_star;
    report["k_star"] = tr.k_star;
    report["closure_error"] = tr.closure_error;
    report["s_drift"] = tr.s_drift;
    report["samples"] = tr.samples.size();

    if (do_recover) {
        // Recover the potential along the inferred power law.
        const sf::RadialProfile psi = sf::make_power_profile(tr.k_star, tr.s_star);
        const auto rec = sf::recover_h(psi, recover_n, c_init, r0, r1);
        const double lo = rec.nodes.front()[0], hi = rec.nodes.back()[0];
        double max_r18 = 0.0;
        for (double r : sf::log_spaced(lo * 1.02, hi * 0.98, 64)) {
            const double r18 = (recover_n - 2) * psi.psi2(r) + psi.psi(r) * rec.profile.h2(r) +
                               2.0 * psi.psi1(r) * rec.profile.h1(r);
            max_r18 = std::max(max_r18, std::abs(r18));
        }
        const double dh = rec.nodes.back()[1] - rec.nodes.front()[1];
        std::printf("recovered potential: h(r1) - h(r0) = %.12g, max |R18| = %.3e\n", dh, max_r18);
        report["recovered_h"] = {{"c_init", c_init}, {"n", recover_n}, {"delta_h", dh},
                                 {"max_R18", max_r18}};
    }
    if (as_json) std::cout << report.dump(2) << "\n";
    return finish(true);
}

int cmd_classify(int n, int m, const std::string& k2_text, const std::string& lambdaF_text,
                 double k1, double c, double c1, bool as_json) {
    const auto parse_exact = [](const std::string& text, const char* what) {
        if (const auto q = sf::parse_rational(text)) return sf::ExactScalar(*q);
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
            return sf::ExactScalar(v);
        } catch (const std::exception&) {
            throw sf::ParameterError(std::string(what) + ": expected a number or p/q rational");
        }
    };
    const sf::ExactScalar k2 = parse_exact(k2_text, "--k2");
    std::optional<sf::ExactScalar> lambdaF;
    if (!lambdaF_text.empty()) lambdaF = parse_exact(lambdaF_text, "--lambdaF");

    const sf::ClassificationResult result = sf::classify_schouten(n, m, lambdaF, k2, k1, c, c1);
    Json rows = Json::array();
    for (const auto& d : result.solutions) {
        Json row = sf::to_json(d);
        if (d.params.lambdaF_exact && d.params.lambdaTilde_exact && d.k2.exact) {
            row["exponents"] = sf::to_json(sf::exponent_constraint_exact(
                n, m, *d.params.lambdaF_exact, *d.params.lambdaTilde_exact,
                (*d.k2.exact) * (*d.k2.exact)));
        } else {
            row["exponents"] = sf::to_json(
                sf::exponent_constraint(n, m, d.params.lambdaF, d.params.lambdaTilde, d.k2.value));
        }
        rows.push_back(std::move(row));
        std::printf("family %s: lambda_F = %s, lambda_tilde = %s, type = %s%s\n",
                    sf::to_string(d.family).c_str(),
                    exact_column(d.params.lambdaF, d.params.lambdaF_exact).c_str(),
                    exact_column(d.params.lambdaTilde, d.params.lambdaTilde_exact).c_str(),
                    sf::to_string(d.type()).c_str(),
                    d.constant_potential ? " [constant potential]" : "");
        std::string admitted;
        for (const auto& root : rows.back().at("exponents").at("admissible")) {
            if (!admitted.empty()) admitted += ", ";
            admitted += "s = " + std::string(root.at("s").get<double>() == 0.5 ? "1/2"
                                             : root.at("s").get<double>() == 1.0 ? "1" : "0");
            if (root.at("degenerate").get<bool>()) admitted += " (degenerate)";
        }
        std::printf("  admissible exponents: %s\n",
                    admitted.empty() ? "none" : admitted.c_str());
    }
    for (const auto& note : result.notes) std::printf("note: %s\n", note.c_str());
    if (as_json) {
        Json report;
        report["schema_version"] = sf::kReportSchemaVersion;
        report["tool"] = "soliton-forge";
        report["command"] = "classify";
        report["solutions"] = std::move(rows);
        report["notes"] = result.notes;
        std::cout << report.dump(2) << "\n";
    }
    return finish(true);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verifier and explorer for gradient Schouten solitons on conformally radial "
                 "product metrics"};
    app.require_subcommand(1);

    // examples
    auto* examples = app.add_subcommand("examples", "run the built-in example catalog");
    int steady_n = 4;
    bool examples_json = false;
    std::uint64_t examples_seed = 0;
    examples->add_option("--n-for-example2", steady_n, "base dimension for the steady example")
        ->check(CLI::Range(3, 32));
    examples->add_flag("--json", examples_json, "emit a JSON report");
    examples->add_option("--seed", examples_seed, "certificate sampling seed");

    // verify
    auto* verify = app.add_subcommand("verify", "verify a configuration file");
    std::string verify_config, verify_out;
    bool verify_oracle = false;
    int verify_points = 50;
    std::optional<std::uint64_t> verify_seed;
    std::optional<double> verify_tol_closed, verify_tol_oracle;
    GridOption verify_grid;
    verify->add_option("config", verify_config, "JSON config path")->required();
    verify->add_flag("--oracle", verify_oracle, "also compare against the numerical engine");
    verify->add_option("--points", verify_points, "sample points for the comparison")
        ->check(CLI::PositiveNumber);
    verify->add_option("--out", verify_out, "write the JSON report to this file");
    verify->add_option("--seed", verify_seed, "override the config seed");
    verify->add_option("--tol-closed", verify_tol_closed, "closed-form residual tolerance");
    verify->add_option("--tol-oracle", verify_tol_oracle, "oracle comparison tolerance");
    add_grid_option(verify, verify_grid);

    // oracle-compare
    auto* ocmp =
        app.add_subcommand("oracle-compare", "closed-form curvature against the numerical engine");
    std::string ocmp_config, ocmp_out;
    int ocmp_points = 50;
    std::optional<std::uint64_t> ocmp_seed;
    std::optional<double> ocmp_tol;
    GridOption ocmp_grid;
    ocmp->add_option("config", ocmp_config, "JSON config path")->required();
    ocmp->add_option("--points", ocmp_points, "sample points")->check(CLI::PositiveNumber);
    ocmp->add_option("--out", ocmp_out, "write the JSON report to this file");
    ocmp->add_option("--seed", ocmp_seed, "override the config seed");
    ocmp->add_option("--tol-oracle", ocmp_tol, "comparison tolerance");
    add_grid_option(ocmp, ocmp_grid);

    // integrate
    auto* integrate = app.add_subcommand("integrate", "integrate the radial factor ODE");
    double r0 = 1.0, psi0 = 1.0, dpsi0 = 0.0, r1 = 10.0, c_init = 0.0;
    std::optional<int> samples;
    std::string csv_path;
    bool do_recover = false, integrate_json = false;
    int recover_n = 3;
    integrate->add_option("--r0", r0, "initial radius")->required();
    integrate->add_option("--psi0", psi0, "initial psi")->required();
    integrate->add_option("--dpsi0", dpsi0, "initial psi'")->required();
    integrate->add_option("--r1", r1, "final radius")->required();
    integrate->add_option("--samples", samples, "number of trajectory samples");
    integrate->add_option("--csv", csv_path, "write the trajectory CSV here");
    integrate->add_flag("--recover-h", do_recover, "also recover the potential by quadrature");
    integrate->add_option("--c-init", c_init, "h'(r0) seed for the recovery");
    integrate->add_option("--n", recover_n, "base dimension for the recovery")
        ->check(CLI::Range(3, 32));
    integrate->add_flag("--json", integrate_json, "emit a JSON summary");

    // classify
    auto* classify = app.add_subcommand("classify", "list the Schouten solutions for (n, m, k2)");
    int cls_n = 3, cls_m = 2;
    std::string cls_k2 = "1", cls_lambdaF;
    double cls_k1 = 0.0, cls_c = 0.0, cls_c1 = 0.0;
    bool cls_json = false;
    classify->add_option("--n", cls_n, "base dimension")->required()->check(CLI::Range(3, 32));
    classify->add_option("--m", cls_m, "fiber dimension")->required()->check(CLI::Range(2, 32));
    classify->add_option("--k2", cls_k2, "amplitude (number or p/q)");
    classify->add_option("--lambdaF", cls_lambdaF, "fiber Einstein constant (number or p/q)");
    classify->add_option("--k1", cls_k1, "family A offset");
    classify->add_option("--c", cls_c, "family B linear log coefficient");
    classify->add_option("--c1", cls_c1, "family B offset");
    classify->add_flag("--json", cls_json, "emit a JSON report");

    // Command-line misuse folds into the exit-code contract: help exits 0,
    // anything malformed exits 2, both with a verdict line.
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return finish(true);
    } catch (const CLI::CallForAllHelp& e) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return finish(true);
    } catch (const CLI::ParseError& e) {
        return finish_error(2, std::string("command line: ") + e.what());
    }

    return run_guarded([&]() -> int {
        if (app.got_subcommand(examples))
            return cmd_examples(steady_n, examples_json, examples_seed);
        if (app.got_subcommand(verify))
            return cmd_verify(verify_config, verify_oracle, verify_points, verify_out, verify_seed,
                              verify_grid, verify_tol_closed, verify_tol_oracle);
        if (app.got_subcommand(ocmp))
            return cmd_oracle_compare(ocmp_config, ocmp_points, ocmp_out, ocmp_seed, ocmp_grid,
                                      ocmp_tol);
        if (app.got_subcommand(integrate))
            return cmd_integrate(r0, psi0, dpsi0, r1, samples, csv_path, do_recover, c_init,
                                 recover_n, integrate_json);
        if (app.got_subcommand(classify))
            return cmd_classify(cls_n, cls_m, cls_k2, cls_lambdaF, cls_k1, cls_c, cls_c1, cls_json);
        return finish_error(2, "no subcommand");
    });
}
