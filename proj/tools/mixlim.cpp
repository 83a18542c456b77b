// mixlim: classification, moments, simulation, verification and phase grids
// for the exponential / truncated-Pareto mixture.

#include "mixlim/diagnostics.hpp"
#include "mixlim/errors.hpp"
#include "mixlim/model.hpp"
#include "mixlim/regimes.hpp"
#include "mixlim/samplers.hpp"
#include "mixlim/stable_limit.hpp"
#include "mixlim/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef MIXLIM_VERSION
#define MIXLIM_VERSION "0.0.0-unknown"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace mixlim;

enum ExitCode : int { kOk = 0, kUsage = 1, kBoundary = 2, kStatFail = 3, kIo = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string shortest(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

unsigned threads_from_env() {
    const char* raw = std::getenv("MIXLIM_THREADS");
    if (raw == nullptr || *raw == '\0') return 0;
    unsigned v = 0;
    const std::string s(raw);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw UsageError("MIXLIM_THREADS must be a nonnegative integer, got '" + s + "'");
    return v;
}

struct ModelFlags {
    double alpha = 0.0;
    double lambda = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;

    ModelParams params() const { return ModelParams(alpha, lambda, gamma1, gamma2); }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool with_gammas = true) {
    cmd->add_option("--alpha", f.alpha, "heavy-tail index in (0, 2)")->required();
    cmd->add_option("--lambda", f.lambda, "exponential rate")->capture_default_str();
    if (with_gammas) {
        cmd->add_option("--gamma1", f.gamma1, "truncation exponent, M_n = n^gamma1")->required();
        cmd->add_option("--gamma2", f.gamma2, "mixing exponent, eps_n = n^-gamma2")->required();
    }
}

// ---------------------------------------------------------------- json pieces

json regime_json(const RegimeReport& r) {
    json j;
    j["fluctuation"] = std::string(to_string(r.fluctuation.tag));
    j["branch"] = r.fluctuation.branch ? json(std::string(to_string(*r.fluctuation.branch)))
                                       : json(nullptr);
    j["lln"] = std::string(to_string(r.lln));
    j["zone"] = r.zone ? json(*r.zone) : json(nullptr);
    return j;
}

json plan_json(const NormalizationPlan& plan) {
    json j;
    j["center"] = plan.center;
    j["scale"] = plan.scale;
    if (const auto* s = std::get_if<StableRef>(&plan.limit)) {
        j["limit"] = {{"law", "stable"},
                      {"alpha", s->spec.alpha},
                      {"tail_const", s->spec.tail_const},
                      {"shift", s->spec.shift},
                      {"compensated", s->compensated}};
    } else {
        j["limit"] = {{"law", "normal"}};
    }
    return j;
}

json model_json(const ModelFlags& f) {
    return {{"alpha", f.alpha}, {"lambda", f.lambda}, {"gamma1", f.gamma1}, {"gamma2", f.gamma2}};
}

json test_json(const TestResult& t) {
    return {{"statistic", t.statistic},   {"critical_value", t.critical_value},
            {"level", t.level},           {"pass", t.pass},
            {"size_a", t.size_a},         {"size_b", t.size_b},
            {"conclusive", t.conclusive}};
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.close();
    if (!out) throw IoError("write to '" + path + "' failed");
}

// ------------------------------------------------------------------ classify

struct ClassifyArgs {
    ModelFlags model;
    std::string format = "text";
};

int run_classify(const ClassifyArgs& a) {
    a.model.params();
    const RegimeReport r = classify(a.model.alpha, a.model.gamma1, a.model.gamma2);

    if (a.format == "json") {
        json j;
        j["schema"] = 1;
        j["alpha"] = a.model.alpha;
        j["gamma1"] = a.model.gamma1;
        j["gamma2"] = a.model.gamma2;
        j.update(regime_json(r));
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "fluctuation: " << to_string(r.fluctuation.tag) << '\n';
        if (r.fluctuation.branch) std::cout << "branch: " << to_string(*r.fluctuation.branch) << '\n';
        std::cout << "lln: " << to_string(r.lln) << '\n';
        std::cout << "zone: " << (r.zone ? std::to_string(*r.zone) : std::string("-")) << '\n';
    }
    const bool interior = r.has_fluctuation_theorem() && r.lln != LlnRegime::Boundary;
    return interior ? kOk : kBoundary;
}

// ------------------------------------------------------------------- moments

struct MomentsArgs {
    ModelFlags model;
    std::int64_t n = 0;
    double delta = 1.0;
    std::string format = "text";
};

int run_moments(const MomentsArgs& a) {
    const ModelParams p = a.model.params();
    const InstanceParams inst = derive_instance(p, a.n);
    const Asymptotic mean_asym = mean_z_asymptotic(p, a.n);
    const Asymptotic var_asym = var_z_asymptotic(p, a.n);
    const double beta = stable_scale(p, a.n);

    json j;
    j["schema"] = 1;
    j["model"] = model_json(a.model);
    j["n"] = a.n;
    j["eps"] = inst.eps();
    j["m"] = inst.m();
    j["mu1"] = mu1(1.0, p.lambda());
    j["mu2"] = mu2(1.0, p.alpha(), inst.m());
    j["mean_z"] = mean_z(p, inst);
    j["var_z"] = var_z(p, inst);
    j["mean_z_asymptotic"] = mean_asym.overflow ? json(nullptr) : json(mean_asym.value);
    j["var_z_asymptotic"] = var_asym.overflow ? json(nullptr) : json(var_asym.value);
    j["stable_scale"] = beta;
    j["lyapounov_delta"] = a.delta;
    j["lyapounov_ratio"] = lyapounov_ratio(p, inst, a.delta);
    j["centering_a_n"] = beta > 1.0 ? json(centering_a_n(p, inst, beta)) : json(nullptr);

    if (a.format == "json") {
        std::cout << j.dump() << '\n';
    } else {
        for (const auto& [k, v] : j.items()) {
            if (k == "schema" || k == "model") continue;
            std::cout << k << ": " << (v.is_number_float() ? fmt17(v.get<double>()) : v.dump())
                      << '\n';
        }
    }
    return kOk;
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
    ModelFlags model;
    std::int64_t n = 0;
    std::int64_t reps = 1000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string out;
    std::string format = "csv";
};

int run_simulate(const SimulateArgs& a) {
    const ModelParams p = a.model.params();
    if (a.reps < 1) throw UsageError("--reps must be positive");
    const InstanceParams inst = derive_instance(p, a.n);
    const RegimeReport r = classify(p.alpha(), p.gamma1(), p.gamma2());
    if (!r.has_fluctuation_theorem())
        throw NoTheoremError("no fluctuation theorem at this point (" +
                             std::string(to_string(r.fluctuation.tag)) + ")");
    const NormalizationPlan plan = normalization_plan(p, inst, r);
    const SumSample sample = monte_carlo(p, inst, a.reps, a.seed, plan, a.threads);

    std::string body;
    if (a.format == "json") {
        json j;
        j["schema"] = 1;
        j["values"] = sample.values;
        body = j.dump() + "\n";
    } else {
        std::ostringstream os;
        os << "replicate,value\n";
        for (std::size_t k = 0; k < sample.values.size(); ++k)
            os << k << ',' << fmt17(sample.values[k]) << '\n';
        body = os.str();
    }
    write_file(a.out, body);

    json meta;
    meta["schema"] = 1;
    meta["version"] = MIXLIM_VERSION;
    meta["command"] = "simulate";
    meta["config"] = {{"model", model_json(a.model)}, {"n", a.n},
                      {"replicates", a.reps},         {"seed", a.seed},
                      {"format", a.format},           {"out", a.out}};
    meta["instance"] = {{"eps", inst.eps()}, {"m", inst.m()}};
    meta["regime"] = regime_json(r);
    meta["plan"] = plan_json(plan);
    meta["heavy_count_mean"] = sample.heavy_count_mean;
    write_file(a.out + ".meta.json", meta.dump(2) + "\n");
    return kOk;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
    ModelFlags model;
    std::vector<std::int64_t> ladder;
    std::int64_t reps = 1000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
    double level = 0.01;
    double ecf_tol = 0.1;
    double delta = 0.05;
    std::string force_test = "auto";
    std::string out;
};

StableRef default_stable_ref(const ModelParams& p) {
    StableRef ref;
    ref.spec.alpha = p.alpha();
    if (p.alpha() < 1.0) {
        ref.compensated = false;
    } else {
        ref.compensated = true;
        if (p.alpha() > 1.0) ref.spec.shift = -p.alpha() / (p.alpha() - 1.0);
    }
    return ref;
}

json verify_fluctuation(const ModelParams& p, const RegimeReport& r, const VerifyArgs& a,
                        const std::string& test, bool& top_pass) {
    json rungs = json::array();
    for (const std::int64_t n : a.ladder) {
        const InstanceParams inst = derive_instance(p, n);
        NormalizationPlan plan = normalization_plan(p, inst, r);
        if (test == "stable" && !std::holds_alternative<StableRef>(plan.limit))
            plan.limit = default_stable_ref(p);
        SumSample sample = monte_carlo(p, inst, a.reps, a.seed, plan, a.threads);

        json rung;
        rung["n"] = n;
        rung["plan"] = plan_json(plan);
        bool pass = false;
        if (test == "normal") {
            std::sort(sample.values.begin(), sample.values.end());
            const TestResult t = ks_one_sample(sample.values, normal_cdf, a.level);
            rung["test"] = "ks_normal";
            rung["ks"] = test_json(t);
            pass = t.pass && t.conclusive;
        } else {
            const auto& ref = std::get<StableRef>(plan.limit);
            const auto reference =
                stable_sample(ref.spec, ref.compensated, static_cast<std::size_t>(a.reps),
                              substream_seed(a.seed, 0x7265666572656e63ULL));
            const TestResult t = ks_two_sample(sample.values, reference, a.level);
            const StableExponent psi(ref.spec, ref.compensated);
            const auto grid = linear_grid(-2.0, 2.0, 41);
            const double ecf = ecf_distance(sample.values, psi, grid);
            rung["test"] = "ks_two_sample_stable";
            rung["ks"] = test_json(t);
            rung["ecf_distance"] = ecf;
            rung["ecf_tolerance"] = a.ecf_tol;
            pass = t.pass && t.conclusive && ecf < a.ecf_tol;
        }
        rung["pass"] = pass;
        top_pass = pass;
        rungs.push_back(rung);
    }
    return rungs;
}

json verify_lln(const ModelParams& p, const VerifyArgs& a, LlnMode mode, bool& top_pass) {
    LlnCheckConfig cfg;
    cfg.ladder = a.ladder;
    cfg.replicates = a.reps;
    cfg.seed = a.seed;
    cfg.mode = mode;
    cfg.delta = a.delta;
    cfg.threads = a.threads;
    const auto rungs = lln_ratio_check(p, cfg);
    top_pass = lln_ladder_holds(rungs) && static_cast<std::size_t>(a.reps) >= kMinVerdictSize;

    json out = json::array();
    for (std::size_t k = 0; k < rungs.size(); ++k) {
        const auto& g = rungs[k];
        const bool monotone = k == 0 || g.fraction_within >= rungs[k - 1].fraction_within;
        out.push_back({{"n", g.n},
                       {"test", mode == LlnMode::FullMean ? "lln_full_ratio" : "lln_light_ratio"},
                       {"median", g.median},
                       {"q05", g.q05},
                       {"q95", g.q95},
                       {"delta", a.delta},
                       {"fraction_within", g.fraction_within},
                       {"monotone", monotone}});
    }
    return out;
}

int run_verify(VerifyArgs a, bool ladder_given) {
    const ModelParams p = a.model.params();
    if (a.reps < 1) throw UsageError("--reps must be positive");
    if (!(a.level > 0.0 && a.level < 1.0)) throw UsageError("--level must lie in (0, 1)");
    const RegimeReport r = classify(p.alpha(), p.gamma1(), p.gamma2());

    std::string test = a.force_test;
    const bool lln_test = test == "lln-full" || test == "lln-light";
    if (!ladder_given) {
        a.ladder = lln_test ? std::vector<std::int64_t>{10000, 100000, 1000000}
                            : std::vector<std::int64_t>{10000, 100000};
    }
    if (a.ladder.empty()) throw UsageError("--ladder needs at least one rung");
    if (!std::is_sorted(a.ladder.begin(), a.ladder.end()) ||
        std::adjacent_find(a.ladder.begin(), a.ladder.end()) != a.ladder.end())
        throw UsageError("--ladder must be strictly increasing");
    for (const auto n : a.ladder) derive_instance(p, n);
    if (lln_test && a.ladder.size() < 3) throw UsageError("LLN checks need a ladder of >= 3 rungs");

    if (!lln_test && !r.has_fluctuation_theorem())
        throw NoTheoremError("no fluctuation theorem at this point (" +
                             std::string(to_string(r.fluctuation.tag)) + ")");
    if (test == "auto") {
        test = std::holds_alternative<StableRef>(
                   normalization_plan(p, derive_instance(p, a.ladder.front()), r).limit)
                   ? "stable"
                   : "normal";
    }

    bool top_pass = false;
    json report;
    report["schema"] = 1;
    report["version"] = MIXLIM_VERSION;
    report["command"] = "verify";
    report["config"] = {{"model", model_json(a.model)}, {"ladder", a.ladder},
                        {"replicates", a.reps},         {"seed", a.seed},
                        {"level", a.level},             {"test", test}};
    report["regime"] = regime_json(r);
    if (lln_test) {
        report["rungs"] =
            verify_lln(p, a, test == "lln-full" ? LlnMode::FullMean : LlnMode::LightMean, top_pass);
    } else {
        report["rungs"] = verify_fluctuation(p, r, a, test, top_pass);
    }
    report["pass"] = top_pass;

    const std::string text = report.dump(2) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        write_file(a.out, text);
    return top_pass ? kOk : kStatFail;
}

// ---------------------------------------------------------------- phase-grid

constexpr double kSnapInverse = 1e12;

/// Rounds to the 1e-12 lattice so that 0.05 * 3 prints as 0.15.
double snap(double v) { return std::round(v * kSnapInverse) / kSnapInverse; }

std::vector<double> parse_range(const std::string& flag, const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size())
            throw UsageError(flag + ": cannot parse '" + item + "' in range '" + spec + "'");
        parts.push_back(v);
    }
    if (parts.size() != 3) throw UsageError(flag + " expects start:stop:step, got '" + spec + "'");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (!(step > 0.0) || !(hi >= lo)) throw UsageError(flag + ": empty range '" + spec + "'");
    if (step > hi - lo) throw UsageError(flag + ": step larger than the range '" + spec + "'");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) values[i] = snap(lo + step * static_cast<double>(i));
    return values;
}

struct PhaseGridArgs {
    ModelFlags model;
    std::string gamma1_range;
    std::string gamma2_range;
    std::string out;
};

int run_phase_grid(const PhaseGridArgs& a) {
    if (!(a.model.alpha > 0.0 && a.model.alpha < 2.0)) throw UsageError("--alpha must lie in (0, 2)");
    const auto g1 = parse_range("--gamma1", a.gamma1_range);
    const auto g2 = parse_range("--gamma2", a.gamma2_range);

    std::ostringstream os;
    os << "gamma1,gamma2,zone,fluctuation,lln\n";
    for (const double x : g1) {
        for (const double y : g2) {
            const RegimeReport r = classify(a.model.alpha, x, y);
            os << shortest(x) << ',' << shortest(y) << ',' << r.zone.value_or(0) << ','
               << to_string(r.fluctuation.tag) << ',' << to_string(r.lln) << '\n';
        }
    }
    if (a.out.empty())
        std::cout << os.str();
    else
        write_file(a.out, os.str());
    return kOk;
}

std::vector<std::int64_t> parse_ladder(const std::string& spec) {
    std::vector<std::int64_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc{} || res.ptr != item.data() + item.size() ||
            v != std::floor(v) || v < 2.0 || v > 9.0e18)
            throw UsageError("--ladder: '" + item + "' is not an integer >= 2");
        out.push_back(static_cast<std::int64_t>(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limit theorems for light-tail / truncated heavy-tail mixtures", "mixlim"};
    app.set_version_flag("--version", std::string(MIXLIM_VERSION));
    app.require_subcommand(1);

    unsigned env_threads = 0;
    try {
        env_threads = threads_from_env();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }

    ClassifyArgs classify_args;
    auto* classify_cmd = app.add_subcommand("classify", "report the limit regime of (alpha, gamma1, gamma2)");
    add_model_flags(classify_cmd, classify_args.model);
    classify_cmd->add_option("--format", classify_args.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    MomentsArgs moments_args;
    auto* moments_cmd = app.add_subcommand("moments", "exact and asymptotic moments for one row");
    add_model_flags(moments_cmd, moments_args.model);
    moments_cmd->add_option("--n", moments_args.n, "row length")->required();
    moments_cmd->add_option("--delta", moments_args.delta, "Lyapounov exponent delta")
        ->capture_default_str();
    moments_cmd->add_option("--format", moments_args.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();

    SimulateArgs sim_args;
    sim_args.threads = env_threads;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo sample of the normalized sum");
    add_model_flags(sim_cmd, sim_args.model);
    sim_cmd->add_option("--n", sim_args.n, "row length")->required();
    sim_cmd->add_option("--reps", sim_args.reps, "replicates")->capture_default_str();
    sim_cmd->add_option("--seed", sim_args.seed, "master seed")->capture_default_str();
    sim_cmd->add_option("--threads", sim_args.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    sim_cmd->add_option("--out", sim_args.out, "output file")->required();
    sim_cmd->add_option("--format", sim_args.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    VerifyArgs verify_args;
    verify_args.threads = env_threads;
    std::string ladder_text;
    auto* verify_cmd = app.add_subcommand("verify", "test the sample against the predicted limit law");
    add_model_flags(verify_cmd, verify_args.model);
    auto* n_opt = verify_cmd->add_option("--n", ladder_text, "single row length");
    auto* ladder_opt =
        verify_cmd->add_option("--ladder", ladder_text, "comma-separated increasing row lengths");
    n_opt->excludes(ladder_opt);
    verify_cmd->add_option("--reps", verify_args.reps, "replicates per rung")->capture_default_str();
    verify_cmd->add_option("--seed", verify_args.seed, "master seed")->capture_default_str();
    verify_cmd->add_option("--threads", verify_args.threads, "worker threads (0 = all cores)")
        ->capture_default_str();
    verify_cmd->add_option("--level", verify_args.level, "test level")->capture_default_str();
    verify_cmd->add_option("--ecf-tol", verify_args.ecf_tol, "ECF distance tolerance (stable)")
        ->capture_default_str();
    verify_cmd->add_option("--delta", verify_args.delta, "LLN ratio window")->capture_default_str();
    verify_cmd->add_option("--force-test", verify_args.force_test, "override the regime test")
        ->check(CLI::IsMember({"auto", "normal", "stable", "lln-full", "lln-light"}))
        ->capture_default_str();
    verify_cmd->add_option("--out", verify_args.out, "report file (default stdout)");

    PhaseGridArgs grid_args;
    auto* grid_cmd = app.add_subcommand("phase-grid", "classify a (gamma1, gamma2) grid");
    add_model_flags(grid_cmd, grid_args.model, false);
    grid_cmd->add_option("--gamma1", grid_args.gamma1_range, "start:stop:step")->required();
    grid_cmd->add_option("--gamma2", grid_args.gamma2_range, "start:stop:step")->required();
    grid_cmd->add_option("--out", grid_args.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: " << e.what() << "\n\n";
        const auto parsed = app.get_subcommands();
        std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
        return kUsage;
    }

    try {
        if (classify_cmd->parsed()) return run_classify(classify_args);
        if (moments_cmd->parsed()) return run_moments(moments_args);
        if (sim_cmd->parsed()) return run_simulate(sim_args);
        if (verify_cmd->parsed()) {
            const bool given = !ladder_text.empty();
            if (given) verify_args.ladder = parse_ladder(ladder_text);
            return run_verify(verify_args, given);
        }
        if (grid_cmd->parsed()) return run_phase_grid(grid_args);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const NoTheoremError& e) {
        std::cerr << "boundary: " << e.what() << '\n';
        return kBoundary;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
