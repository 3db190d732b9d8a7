#pragma once

// Seeded parameter sweeps that check the existence predicates against the
// orbit constructions. Cases are drawn serially from the seed, evaluated on
// a thread pool and merged in input order, so reports depend only on the
// configuration.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qhd/io.hpp"
#include "qhd/orbits.hpp"
#include "qhd/structure.hpp"

namespace qhd {

struct SweepConfig {
    std::uint64_t seed = 1;
    std::size_t standing_count = 200;     ///< per viscosity model
    std::size_t travel_count = 50;
    std::size_t zero_speed_count = 50;
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// Pool width: hardware concurrency, capped by QHD_DSW_THREADS when set.
inline unsigned sweep_threads()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("QHD_DSW_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1)
            n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

/// Runs job(i) for i in [0, n) on the pool; results are stored by index.
template <class Job>
auto parallel_map(std::size_t n, Job&& job) -> std::vector<decltype(job(std::size_t{}))>
{
    std::vector<decltype(job(std::size_t{}))> out(n);
    std::atomic<std::size_t> next{0};
    const unsigned width = static_cast<unsigned>(std::min<std::size_t>(sweep_threads(), std::max<std::size_t>(n, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < width; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
                out[i] = job(i);
        });
    for (auto& th : pool)
        th.join();
    return out;
}

struct CaseRecord {
    nlohmann::json json;
    bool pass = false;
    bool numerical_failure = false;
};

// ---------------------------------------------------------------------------
// Case generation

struct StandingCase {
    std::string category;  ///< zero_velocity | subsonic | sonic | supersonic
    double rho_plus, u_plus, gamma, k;
};

struct TravelCase {
    double p_plus, p_minus, s, gamma, mu, k;
    double criterion_ratio;  ///< (s mu / k) / sqrt(-2 f'(P+))
};

struct ZeroSpeedCase {
    double p_plus, p_minus, gamma, k;
    Viscosity viscosity;
};

namespace detail {

inline double uniform(std::mt19937_64& rng, double a, double b)
{
    return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}
inline double log_uniform(std::mt19937_64& rng, double a, double b)
{
    return std::exp(uniform(rng, std::log(a), std::log(b)));
}
inline double draw_gamma(std::mt19937_64& rng)
{
    return uniform(rng, 0.0, 1.0) < 0.25 ? 1.0 : uniform(rng, 1.0, 3.0);
}

}  // namespace detail

inline std::vector<StandingCase> standing_cases(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    static const char* cats[] = {"zero_velocity", "subsonic", "sonic", "supersonic"};
    std::vector<StandingCase> out;
    for (std::size_t i = 0; i < n; ++i) {
        StandingCase c;
        c.category = cats[i % 4];
        c.rho_plus = detail::log_uniform(rng, 0.2, 5.0);
        c.gamma = detail::draw_gamma(rng);
        c.k = detail::uniform(rng, 0.5, 3.0);
        const double cs = sound_speed(c.rho_plus, c.gamma);
        const double sign = detail::uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
        double ratio = 0.0;
        if (c.category == std::string("subsonic"))
            ratio = detail::uniform(rng, 0.05, 0.95);
        else if (c.category == std::string("sonic"))
            ratio = 1.0 + detail::uniform(rng, -1e-10, 1e-10);
        else if (c.category == std::string("supersonic"))
            ratio = detail::uniform(rng, 1.05, 3.0);
        c.u_plus = sign * ratio * cs;
        out.push_back(c);
    }
    return out;
}

/// Admissible shocks with s > 0, P+ < P-, and mu placed at least 10% away
/// from the oscillation threshold on either side.
inline std::vector<TravelCase> travel_cases(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<TravelCase> out;
    for (std::size_t i = 0; i < n; ++i) {
        TravelCase c;
        c.gamma = detail::draw_gamma(rng);
        c.p_plus = detail::log_uniform(rng, 0.5, 3.0);
        c.p_minus = c.p_plus * detail::uniform(rng, 1.1, 4.0);
        c.s = detail::uniform(rng, 0.2, 2.0);
        c.k = detail::uniform(rng, 0.5, 2.0);
        const double ratio = i % 2 == 0 ? detail::uniform(rng, 0.2, 0.9) : detail::uniform(rng, 1.1, 3.0);
        const ShockData sh = choose_admissible_branch(c.p_plus, c.p_minus, c.s, c.gamma).shock;
        const LinearWaveSystem sys = build_linear_system(sh, ModelParams(c.gamma, 1.0, c.k));
        const double rhs = oscillation_test(sys).rhs;
        c.mu = ratio * rhs * c.k / c.s;
        c.criterion_ratio = ratio;
        out.push_back(c);
    }
    return out;
}

inline std::vector<ZeroSpeedCase> zero_speed_cases(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
    std::vector<ZeroSpeedCase> out;
    for (std::size_t i = 0; i < n; ++i) {
        ZeroSpeedCase c;
        c.gamma = detail::draw_gamma(rng);
        c.k = detail::uniform(rng, 0.5, 3.0);
        c.p_plus = detail::log_uniform(rng, 0.2, 5.0);
        do
            c.p_minus = detail::log_uniform(rng, 0.2, 5.0);
        while (std::abs(c.p_minus - c.p_plus) < 1e-3 * c.p_plus);
        c.viscosity = i % 2 == 0 ? Viscosity::Linear : Viscosity::Nonlinear;
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Case evaluation

inline CaseRecord run_standing_case(const StandingCase& c, Viscosity visc, const SweepConfig& cfg)
{
    CaseRecord rec;
    rec.json["inputs"] = {{"category", c.category}, {"rho_plus", c.rho_plus}, {"u_plus", c.u_plus},
                          {"gamma", c.gamma},       {"k", c.k}};
    const ModelParams params(c.gamma, 1.0, c.k);
    const StandingVerdict v = standing_existence_verdict(c.rho_plus, c.u_plus, params, visc);
    StandingOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    const StandingConstruction con =
        visc == Viscosity::Nonlinear
            ? construct_standing_orbit(build_standing_system(c.rho_plus, c.u_plus, params), opt)
            : construct_standing_orbit(build_linear_standing_system(c.rho_plus, c.u_plus, params), opt);
    rec.pass = (v == StandingVerdict::Exists) == con.reached_saddle;
    rec.json["verdict"] = to_string(v);
    rec.json["construction"] = {{"reached_saddle", con.reached_saddle}, {"reason", con.reason}};
    rec.json["pass"] = rec.pass;
    return rec;
}

inline CaseRecord run_travel_case(const TravelCase& c, const SweepConfig& cfg)
{
    CaseRecord rec;
    rec.json["inputs"] = {{"p_plus", c.p_plus}, {"p_minus", c.p_minus}, {"s", c.s},   {"gamma", c.gamma},
                          {"mu", c.mu},         {"k", c.k},             {"criterion_ratio", c.criterion_ratio}};
    const ModelParams params(c.gamma, c.mu, c.k);
    const BranchChoice ch = choose_admissible_branch(c.p_plus, c.p_minus, c.s, c.gamma);
    const LinearWaveSystem sys = build_linear_system(ch.shock, params);
    const bool criterion = oscillation_criterion(sys);
    HeteroclinicOptions opt;
    opt.rtol = cfg.rtol;
    opt.atol = cfg.atol;
    const ProfileSolution sol = heteroclinic_profile(ch.shock, params, opt);
    const LaSalleReport audit = lasalle_audit(sol, sys);
    const bool oscillates = sol.diagnostics.oscillation_count >= 2;
    const bool converged = sol.diagnostics.verdict == Verdict::Converged;
    rec.pass = converged && audit.passed && oscillates == criterion;
    rec.json["branch"] = ch.branch;
    rec.json["lax_type"] = to_string(ch.lax_type);
    rec.json["oscillation_criterion"] = criterion;
    rec.json["diagnostics"] = to_json(sol.diagnostics);
    rec.json["lasalle"] = to_json(audit);
    rec.json["pass"] = rec.pass;
    return rec;
}

inline CaseRecord run_zero_speed_case(const ZeroSpeedCase& c)
{
    CaseRecord rec;
    rec.json["inputs"] = {{"p_plus", c.p_plus}, {"p_minus", c.p_minus}, {"gamma", c.gamma},
                          {"k", c.k},           {"viscosity", to_string(c.viscosity)}};
    const ZeroSpeedReport r = heteroclinic_nonexistence_s0(c.p_plus, c.p_minus, ModelParams(c.gamma, 1.0, c.k),
                                                           c.viscosity);
    const bool smaller_flagged = r.flagged_state == std::min(c.p_plus, c.p_minus);
    rec.pass = r.in_scope && r.sign_pattern_ok && smaller_flagged;
    rec.json["flagged_end"] = to_string(r.flagged_end);
    rec.json["flagged_derivative"] = r.flagged_derivative;
    rec.json["other_derivative"] = r.other_derivative;
    rec.json["hessian_diag"] = r.hessian_diag;
    rec.json["pass"] = rec.pass;
    return rec;
}

/// Runs fn and turns numerical exceptions into a failed record.
template <class Fn>
CaseRecord guarded(Fn&& fn)
{
    try {
        return fn();
    } catch (const IntegrationError& e) {
        CaseRecord r;
        r.numerical_failure = true;
        r.json["numerical_failure"] = e.what();
        r.json["pass"] = false;
        return r;
    } catch (const BracketError& e) {
        CaseRecord r;
        r.numerical_failure = true;
        r.json["numerical_failure"] = e.what();
        r.json["pass"] = false;
        return r;
    }
}

struct SweepResult {
    nlohmann::json report;
    std::size_t case_count = 0;
    std::size_t pass_count = 0;
    std::size_t fail_count = 0;
    std::size_t numerical_failures = 0;
};

namespace detail {

inline nlohmann::json summarize(std::vector<CaseRecord>& recs, SweepResult& total)
{
    nlohmann::json suite;
    suite["cases"] = nlohmann::json::array();
    std::vector<std::size_t> failures;
    std::size_t pass = 0, numerical = 0;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        recs[i].json["index"] = i;
        suite["cases"].push_back(std::move(recs[i].json));
        if (recs[i].pass)
            ++pass;
        else
            failures.push_back(i);
        if (recs[i].numerical_failure)
            ++numerical;
    }
    suite["case_count"] = recs.size();
    suite["pass_count"] = pass;
    suite["fail_count"] = recs.size() - pass;
    suite["failures"] = failures;
    suite["numerical_failures"] = numerical;
    total.case_count += recs.size();
    total.pass_count += pass;
    total.fail_count += recs.size() - pass;
    total.numerical_failures += numerical;
    return suite;
}

}  // namespace detail

inline SweepResult run_sweep(const SweepConfig& cfg)
{
    SweepResult res;
    const auto sc = standing_cases(cfg.seed, cfg.standing_count);
    const auto tc = travel_cases(cfg.seed, cfg.travel_count);
    const auto zc = zero_speed_cases(cfg.seed, cfg.zero_speed_count);

    auto nonlinear = parallel_map(sc.size(), [&](std::size_t i) {
        return guarded([&] { return run_standing_case(sc[i], Viscosity::Nonlinear, cfg); });
    });
    auto linear = parallel_map(sc.size(), [&](std::size_t i) {
        return guarded([&] { return run_standing_case(sc[i], Viscosity::Linear, cfg); });
    });
    auto travel = parallel_map(tc.size(), [&](std::size_t i) {
        return guarded([&] { return run_travel_case(tc[i], cfg); });
    });
    auto zero = parallel_map(zc.size(), [&](std::size_t i) {
        return guarded([&] { return run_zero_speed_case(zc[i]); });
    });

    nlohmann::json& r = res.report;
    r["config"] = {{"seed", cfg.seed},
                   {"standing_count", cfg.standing_count},
                   {"travel_count", cfg.travel_count},
                   {"zero_speed_count", cfg.zero_speed_count},
                   {"rtol", cfg.rtol},
                   {"atol", cfg.atol}};
    r["suites"]["standing_nonlinear"] = detail::summarize(nonlinear, res);
    r["suites"]["standing_linear"] = detail::summarize(linear, res);
    r["suites"]["travel"] = detail::summarize(travel, res);
    r["suites"]["zero_speed"] = detail::summarize(zero, res);
    r["case_count"] = res.case_count;
    r["pass_count"] = res.pass_count;
    r["fail_count"] = res.fail_count;
    r["numerical_failures"] = res.numerical_failures;
    return res;
}

}  // namespace qhd
