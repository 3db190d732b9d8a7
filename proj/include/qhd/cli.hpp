#pragma once

// Command-line front end: classify | travel | standing | figure | sweep.
//
// Exit codes: 0 success, 2 invalid input, 3 proven non-existence,
// 4 numerical failure. A JSON config file (--config) supplies flat keys
// named like the long flags; flags given on the command line win.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhd/io.hpp"
#include "qhd/orbits.hpp"
#include "qhd/rankine_hugoniot.hpp"
#include "qhd/structure.hpp"
#include "qhd/sweep.hpp"

namespace qhd::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 2, kNoSolution = 3, kNumericalFailure = 4 };

/// Maps an exception escaping a command to its exit code.
inline int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const NoSuchOrbit*>(&e))
        return kNoSolution;
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DegenerateInput*>(&e) ||
        dynamic_cast<const InconsistentInput*>(&e) || dynamic_cast<const ZeroMassFlux*>(&e) ||
        dynamic_cast<const NoAdmissibleBranch*>(&e))
        return kInvalidInput;
    return kNumericalFailure;
}

struct RunConfig {
    // shock / state
    double p_plus = std::nan(""), p_minus = std::nan(""), s = std::nan("");
    double rho_plus = std::nan(""), u_plus = std::nan("");
    double gamma = 1.5, mu = 1.0, k = 1.0;
    std::string viscosity = "nonlinear";
    // numerics
    double span = 0.0, y_max = 1e4, rtol = 1e-10, atol = 1e-12, delta = 0.0;
    // output
    std::string out = ".";
    std::string format = "csv";
    std::string config;
    // figure / sweep
    int id = 0;
    std::uint64_t seed = 1;
    std::size_t standing_count = 200, travel_count = 50, zero_speed_count = 50;
};

namespace detail {

inline nlohmann::json params_json(const RunConfig& c)
{
    return {{"gamma", c.gamma}, {"mu", c.mu}, {"k", c.k}};
}

inline void write_dataset(const RunConfig& c, const std::string& stem, const Dataset& ds)
{
    const std::filesystem::path dir(c.out);
    if (c.format == "json")
        write_json_file(dir / (stem + ".json"), to_json(ds));
    else
        write_csv_file(dir / (stem + ".csv"), ds);
}

inline std::string dataset_name(const RunConfig& c, const std::string& stem)
{
    return stem + (c.format == "json" ? ".json" : ".csv");
}

// Expands a flat JSON config into long flags, placed before the user's own.
inline std::vector<std::string> config_arguments(const std::string& path)
{
    const nlohmann::json j = nlohmann::json::parse(read_text(path));
    if (!j.is_object())
        throw DomainError("config file must contain a JSON object");
    std::vector<std::string> args;
    for (const auto& [key, value] : j.items()) {
        args.push_back("--" + key);
        if (value.is_string()) {
            args.push_back(value.get<std::string>());
        } else if (value.is_number_float()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
            args.push_back(buf);
        } else if (value.is_number() || value.is_boolean()) {
            args.push_back(value.dump());
        } else {
            throw DomainError("config key '" + key + "' must be a scalar");
        }
    }
    return args;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const ModelParams params(c.gamma, c.mu, c.k);
    if (!std::isfinite(c.s))
        throw DomainError("classify: --s must be finite");
    const MomentumBranches mb = momentum_branches(c.p_plus, c.p_minus, c.s, c.gamma);
    nlohmann::json j;
    j["inputs"] = {{"p_plus", c.p_plus}, {"p_minus", c.p_minus}, {"s", c.s}, {"gamma", c.gamma}};
    j["d"] = mb.d;
    for (int i : {1, 2}) {
        const ShockData sh = mb.branch(i, c.p_plus, c.p_minus, c.s);
        const ShockClassification cl = lax_classify(sh, c.gamma);
        const auto [r1, r2] = rh_residual(sh, c.gamma);
        j["branches"][std::to_string(i)] = {{"j_plus", sh.j_plus},
                                            {"j_minus", sh.j_minus},
                                            {"lax_type", to_string(cl.lax_type)},
                                            {"sonic_plus", to_string(cl.sonic_plus)},
                                            {"sonic_minus", to_string(cl.sonic_minus)},
                                            {"rh_residual", {r1, r2}}};
    }
    try {
        const BranchChoice ch = choose_admissible_branch(c.p_plus, c.p_minus, c.s, c.gamma);
        const ShockClassification cl = lax_classify(ch.shock, c.gamma);
        j["admissible"] = {{"branch", ch.branch},
                           {"lax_type", to_string(ch.lax_type)},
                           {"sonic_plus", to_string(cl.sonic_plus)},
                           {"sonic_minus", to_string(cl.sonic_minus)}};
    } catch (const NoAdmissibleBranch& e) {
        j["admissible"] = nullptr;
        j["admissible_note"] = e.what();
    }
    if (c.s == 0.0) {
        const ZeroSpeedReport r =
            heteroclinic_nonexistence_s0(c.p_plus, c.p_minus, params, Viscosity::Linear);
        j["non_existence"] = {{"flagged_end", to_string(r.flagged_end)},
                              {"flagged_derivative", r.flagged_derivative},
                              {"note", "zero speed: no heteroclinic connection; " + r.note}};
    }
    out << j.dump(2) << "\n";
    if (c.out != ".")
        write_json_file(std::filesystem::path(c.out) / "classify.json", j);
    return kOk;
}

inline int cmd_travel(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const ModelParams params(c.gamma, c.mu, c.k);
    if (!std::isfinite(c.s))
        throw DomainError("travel: --s must be finite");
    if (c.p_plus == c.p_minus)
        throw DegenerateInput("degenerate: equal end states");
    if (c.s == 0.0) {
        err << "no travelling wave: s = 0 with distinct end states; the smaller end state is a strict local "
               "maximum of the conserved energy, so no orbit can reach or leave it\n";
        return kNoSolution;
    }
    const BranchChoice ch = choose_admissible_branch(c.p_plus, c.p_minus, c.s, c.gamma);
    const LinearWaveSystem sys = build_linear_system(ch.shock, params);
    HeteroclinicOptions opt;
    opt.delta = c.delta;
    opt.rtol = c.rtol;
    opt.atol = c.atol;
    opt.y_max = c.y_max;
    const ProfileSolution sol = heteroclinic_profile(ch.shock, params, opt);
    const LaSalleReport audit = lasalle_audit(sol, sys);
    const OscillationCriterion oc = oscillation_test(sys);

    nlohmann::json meta;
    meta["command"] = "travel";
    meta["config"] = {{"p_plus", c.p_plus}, {"p_minus", c.p_minus}, {"s", c.s},         {"params", detail::params_json(c)},
                      {"delta", c.delta},   {"rtol", c.rtol},       {"atol", c.atol},   {"y_max", c.y_max},
                      {"format", c.format}};
    meta["shock"] = {{"branch", ch.branch},
                     {"lax_type", to_string(ch.lax_type)},
                     {"j_plus", ch.shock.j_plus},
                     {"j_minus", ch.shock.j_minus},
                     {"A", sys.A},
                     {"B", sys.B}};
    meta["oscillation_criterion"] = {{"lhs", oc.lhs}, {"rhs", oc.rhs}, {"holds", oc.holds}};
    meta["diagnostics"] = to_json(sol.diagnostics);
    meta["integrator"] = to_json(sol.trajectory.meta);
    meta["lasalle"] = to_json(audit);
    meta["terminal_j"] = sol.secondary_profile.back().second;

    detail::write_dataset(c, "profile", linear_profile_dataset(sol));
    write_json_file(std::filesystem::path(c.out) / "profile.meta.json", meta);

    if (sol.diagnostics.verdict != Verdict::Converged) {
        err << "not converged within y_max = " << c.y_max << ": terminal residual "
            << format_double(sol.diagnostics.terminal_residual) << "\n";
        return kNumericalFailure;
    }
    out << "Converged: " << sol.trajectory.samples.size() << " samples, oscillations "
        << sol.diagnostics.oscillation_count << ", terminal residual "
        << format_double(sol.diagnostics.terminal_residual) << "\n";
    return kOk;
}

inline int cmd_standing(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    const ModelParams params(c.gamma, c.mu, c.k);
    qhd::detail::require_positive(c.rho_plus, "standing");
    if (!std::isfinite(c.u_plus))
        throw DomainError("standing: --u-plus is required");
    if (c.viscosity != "linear" && c.viscosity != "nonlinear")
        throw DomainError("standing: --viscosity must be linear or nonlinear");
    const bool linear = c.viscosity == "linear";
    const StandingVerdict v = standing_existence_verdict(c.rho_plus, c.u_plus, params,
                                                         linear ? Viscosity::Linear : Viscosity::Nonlinear);
    const std::filesystem::path dir(c.out);

    nlohmann::json meta;
    meta["command"] = "standing";
    meta["config"] = {{"viscosity", c.viscosity}, {"rho_plus", c.rho_plus}, {"u_plus", c.u_plus},
                      {"params", detail::params_json(c)}, {"span", c.span}, {"rtol", c.rtol},
                      {"atol", c.atol}, {"format", c.format}};
    meta["verdict"] = to_string(v);

    if (v != StandingVerdict::Exists) {
        if (v == StandingVerdict::NoneSonic) {
            auto emit = [&](const auto& sys) {
                const double x_max = 3.0 * sys.saddle_state();
                const auto [up, down] = unbounded_level_branches(sys, x_max);
                Dataset ds{{"x", "w_upper", "w_lower"}, {}};
                for (std::size_t i = 0; i < up.size(); ++i)
                    ds.rows.push_back({up[i].x, up[i].w, down[i].w});
                write_csv_file(dir / "level_set.csv", ds);
            };
            if (linear)
                emit(build_linear_standing_system(c.rho_plus, c.u_plus, params));
            else
                emit(build_standing_system(c.rho_plus, c.u_plus, params));
            meta["level_set"] = "level_set.csv";
        }
        write_json_file(dir / "profile.meta.json", meta);
        err << to_string(v) << ": no standing wave for |u+| = " << std::abs(c.u_plus)
            << ", c_s = " << sound_speed(c.rho_plus, c.gamma) << "\n";
        return kNoSolution;
    }

    StandingOptions opt;
    opt.y_half_span = c.span;
    opt.rtol = c.rtol;
    opt.atol = c.atol;
    ProfileSolution sol;
    if (linear) {
        const LinearWaveSystem sys = build_linear_standing_system(c.rho_plus, c.u_plus, params);
        sol = standing_profile(sys, opt);
        detail::write_dataset(c, "profile", linear_profile_dataset(sol));
        meta["turning_point"] = *structural_points(sys).turning_point;
    } else {
        const StandingSystem sys = build_standing_system(c.rho_plus, c.u_plus, params);
        sol = standing_profile(sys, opt);
        detail::write_dataset(c, "profile", standing_profile_dataset(sol));
        meta["turning_point"] = *structural_points(sys).turning_point;
        meta["C1"] = sys.C1;
        meta["C2"] = sys.C2;
    }
    meta["diagnostics"] = to_json(sol.diagnostics);
    meta["integrator"] = to_json(sol.trajectory.meta);
    write_json_file(dir / "profile.meta.json", meta);
    if (sol.diagnostics.verdict != Verdict::Converged) {
        err << "standing profile not converged: terminal residual "
            << format_double(sol.diagnostics.terminal_residual) << "\n";
        return kNumericalFailure;
    }
    out << "Exists: " << sol.trajectory.samples.size() << " samples, center state "
        << format_double(sol.diagnostics.min_state) << "\n";
    return kOk;
}

inline int cmd_figure(const RunConfig& c, std::ostream& out, std::ostream&)
{
    const std::filesystem::path dir(c.out);
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const Dataset& ds) {
        write_csv_file(dir / name, ds);
        written.push_back(name);
    };
    const double sqrt2 = std::sqrt(2.0);
    switch (c.id) {
    case 1: {
        const ModelParams p(1.5, 1.0, sqrt2);
        const StandingSystem sys = build_standing_system(5.5 * 5.5, 0.0, p);
        const auto [lower, upper] = separatrix_branches(sys, 11.0);
        put("fig1_S2.csv", curve_dataset(lower, "V", "W"));
        put("fig1_S2tilde.csv", curve_dataset(upper, "V", "W"));
        break;
    }
    case 2: {
        const ModelParams p(1.5, 1.0, sqrt2);
        const StandingSystem sys = build_standing_system(2.0, 0.8, p);
        put("fig2_loop.csv", curve_dataset(homoclinic_loop(sys).points, "V", "W"));
        put("fig2_profile.csv", standing_profile_dataset(standing_profile(sys)));
        break;
    }
    case 3: {
        const ModelParams p(1.5, 1.0, 1.0);
        const StandingSystem sys = build_standing_system(1.0, std::sqrt(1.5), p);
        const auto [up, down] = unbounded_level_branches(sys, 3.0);
        put("fig3_upper.csv", curve_dataset(up, "V", "W"));
        put("fig3_lower.csv", curve_dataset(down, "V", "W"));
        break;
    }
    case 4: {
        const ModelParams p(1.5, 0.3, sqrt2);
        const BranchChoice ch = choose_admissible_branch(1.2, 2.0, 1.0, 1.5);
        const LinearWaveSystem sys = build_linear_system(ch.shock, p);
        const PhaseCurve loop = homoclinic_loop(sys);
        const ProfileSolution het = heteroclinic_profile(ch.shock, p);
        put("fig4_loop.csv", curve_dataset(loop.points, "P", "Q"));
        put("fig4_heteroclinic.csv", linear_profile_dataset(het));
        const bool inside = het.diagnostics.min_energy >= -1e-9 &&
                            het.diagnostics.min_state >= loop.turning_point &&
                            het.diagnostics.max_state <= sys.p_minus * (1.0 + 1e-9);
        nlohmann::json meta{{"min_energy", het.diagnostics.min_energy},
                            {"min_state", het.diagnostics.min_state},
                            {"max_state", het.diagnostics.max_state},
                            {"turning_point", loop.turning_point},
                            {"inside_loop", inside},
                            {"diagnostics", to_json(het.diagnostics)}};
        write_json_file(dir / "fig4.meta.json", meta);
        written.push_back("fig4.meta.json");
        break;
    }
    default: throw DomainError("figure: --id must be 1, 2, 3 or 4");
    }
    for (const auto& w : written)
        out << (dir / w).string() << "\n";
    return kOk;
}

inline int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    SweepConfig sc;
    sc.seed = c.seed;
    sc.standing_count = c.standing_count;
    sc.travel_count = c.travel_count;
    sc.zero_speed_count = c.zero_speed_count;
    sc.rtol = c.rtol;
    sc.atol = c.atol;
    const SweepResult res = run_sweep(sc);
    write_json_file(std::filesystem::path(c.out) / "sweep_report.json", res.report);
    out << "cases " << res.case_count << ", pass " << res.pass_count << ", fail " << res.fail_count
        << ", numerical failures " << res.numerical_failures << "\n";
    if (res.numerical_failures > 0) {
        err << "sweep: " << res.numerical_failures << " cases failed numerically\n";
        return kNumericalFailure;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// Entry point

inline int run(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    RunConfig c;
    CLI::App app{"Profiles of dispersive shocks and standing waves in quantum hydrodynamics", "qhd_dsw"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--gamma", c.gamma, "adiabatic exponent (>= 1)");
        sub->add_option("--mu", c.mu, "viscosity coefficient (> 0)");
        sub->add_option("--k", c.k, "dispersion coefficient (> 0)");
        sub->add_option("--rtol", c.rtol, "integrator relative tolerance");
        sub->add_option("--atol", c.atol, "integrator absolute tolerance");
        sub->add_option("--out", c.out, "output directory");
        sub->add_option("--format", c.format, "dataset format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--config", c.config, "JSON file with flat keys named like the flags");
    };
    auto shock = [&](CLI::App* sub) {
        sub->add_option("--p-plus", c.p_plus, "right density")->required();
        sub->add_option("--p-minus", c.p_minus, "left density")->required();
        sub->add_option("--s", c.s, "shock speed")->required();
    };

    CLI::App* classify = app.add_subcommand("classify", "momentum branches and Lax type of a shock");
    shock(classify);
    common(classify);

    CLI::App* travel = app.add_subcommand("travel", "travelling-wave (heteroclinic) profile");
    shock(travel);
    common(travel);
    travel->add_option("--y-max", c.y_max, "integration limit");
    travel->add_option("--delta", c.delta, "launch offset from the saddle (0: automatic)");

    CLI::App* standing = app.add_subcommand("standing", "standing-wave (homoclinic) profile");
    common(standing);
    standing->add_option("--viscosity", c.viscosity, "linear or nonlinear")
        ->check(CLI::IsMember({"linear", "nonlinear"}));
    standing->add_option("--rho-plus", c.rho_plus, "far-field density")->required();
    standing->add_option("--u-plus", c.u_plus, "far-field velocity")->required();
    standing->add_option("--span", c.span, "half width of the y window (0: automatic)");

    CLI::App* figure = app.add_subcommand("figure", "curves for the reference figures");
    common(figure);
    figure->add_option("id,--id", c.id, "figure number 1..4")->required();

    CLI::App* sweep = app.add_subcommand("sweep", "seeded predicate-versus-construction sweep");
    common(sweep);
    sweep->add_option("--seed", c.seed, "random seed");
    sweep->add_option("--standing-count", c.standing_count, "standing cases per viscosity model");
    sweep->add_option("--travel-count", c.travel_count, "travelling-wave cases");
    sweep->add_option("--zero-speed-count", c.zero_speed_count, "zero-speed cases");

    try {
        // Config values go right after the subcommand so command-line flags override them.
        for (std::size_t i = 1; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size())
                path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0)
                path = args[i].substr(9);
            if (!path.empty() && args.size() > 1) {
                const auto extra = detail::config_arguments(path);
                args.insert(args.begin() + 2, extra.begin(), extra.end());
                break;
            }
        }
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "qhd_dsw\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (*classify)
            return cmd_classify(c, out, err);
        if (*travel)
            return cmd_travel(c, out, err);
        if (*standing)
            return cmd_standing(c, out, err);
        if (*figure)
            return cmd_figure(c, out, err);
        return cmd_sweep(c, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace qhd::cli
