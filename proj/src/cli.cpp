#include "switchwalk/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "switchwalk/dynamics.hpp"
#include "switchwalk/exact_engine.hpp"
#include "switchwalk/experiments.hpp"
#include "switchwalk/report.hpp"

namespace switchwalk::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void validate(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

struct CliConfig {
    std::string command;
    std::int64_t n = 0;
    std::string eps_text;
    std::string eps_preset;
    double gamma = 0.0;
    double alpha = 0.0;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    std::string format = "csv";
    std::string out_path;
    std::string what = "stay";
    std::string mode = "exact";
    std::string kind = "switch";
    bool timing = false;
};

// Outcome of one command: the report text and whether every registered check passed.
struct Outcome {
    std::string text;
    bool checks_passed = true;
};

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string render(ExperimentReport report, const CliConfig& cfg) {
    report.master_seed = cfg.seed;
    if (cfg.timing) report.timestamp = utc_timestamp();
    std::ostringstream os;
    if (cfg.format == "json") {
        os << to_json(report, cfg.timing).dump(2) << '\n';
    } else {
        write_csv(report, os, cfg.timing);
    }
    return os.str();
}

std::vector<double> parse_eps_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw UsageError("--eps: cannot parse '" + item + "'");
        }
        validate(used == item.size(), "--eps: cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

EstimateRow check_row(const std::string& name, std::int64_t n, std::uint64_t cases, bool ok) {
    EstimateRow r;
    r.experiment = "identities";
    r.quantity = name;
    r.n = n;
    r.trials = cases;
    r.estimate = ok ? 1.0 : 0.0;
    return r;
}

Outcome run_identities(const CliConfig& cfg) {
    namespace ex = exact;
    ExperimentReport report;
    bool all = true;
    auto record = [&](const std::string& name, std::uint64_t cases, bool ok) {
        report.rows.push_back(check_row(name, cfg.n, cases, ok));
        all = all && ok;
    };

    const std::int64_t refl_max = std::min<std::int64_t>(cfg.n, 30);
    std::uint64_t cases = 0;
    bool ok = true;
    for (std::int64_t z = 1; z <= refl_max; ++z) {
        for (std::int64_t j = 1; j <= refl_max; ++j, ++cases) {
            const auto [a, b] = ex::reflection_pair(z, j);
            ok = ok && a == b;
        }
    }
    record("reflection_pair", cases, ok);

    cases = 0;
    ok = true;
    for (std::int64_t j = 1; j <= std::min<std::int64_t>(cfg.n, 16); ++j) {
        for (std::int64_t z = 1; z <= j; ++z, ++cases) ok = ok && ex::ballot_prob(j, z) == ex::positive_endpoint_prob_dp(j, z);
    }
    record("ballot_vs_dp", cases, ok);

    cases = 0;
    ok = true;
    for (std::int64_t z = 1; z <= 8; ++z) {
        for (std::int64_t steps = 0; steps <= std::min<std::int64_t>(cfg.n, 64); ++steps, ++cases) {
            ok = ok && ex::strip_stay_prob(z, steps) == ex::strip_stay_prob_dp(z, 2 * z, steps);
        }
    }
    record("strip_series_vs_dp", cases, ok);

    cases = 0;
    ok = true;
    for (std::int64_t n = 1; n <= cfg.n; ++n, ++cases) {
        ok = ok && ex::influence_exact(n, 1) == ex::stay_positive_prob(n).scaled_pow2(1);
    }
    record("first_bit_influence", cases, ok);

    return {render(std::move(report), cfg), all};
}

Outcome run_exact(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    if (cfg.what == "identities") return run_identities(cfg);

    if (cfg.what == "influence") {
        const InfluenceMode mode = parse_influence_mode(cfg.mode);
        if (mode == InfluenceMode::oracle) {
            validate(cfg.n <= exact::oracle_max_n, "--mode oracle needs --n <= " + std::to_string(exact::oracle_max_n));
        }
        if (mode == InfluenceMode::exact) validate(cfg.n <= 4096, "--mode exact needs --n <= 4096 (use --mode float)");
        if (mode == InfluenceMode::mc) validate(cfg.trials >= 1, "--trials must be >= 1");
        return {render(influence_profile(cfg.n, mode, cfg.trials, RunOptions{cfg.seed, cfg.workers}), cfg), true};
    }

    validate(cfg.what == "stay" || cfg.what == "barrier",
             "--what must be one of stay, barrier, influence, identities");
    validate(cfg.alpha >= 0.0, "--alpha must be >= 0");
    validate(cfg.n <= 8192, "--n must be <= 8192 for exact tables");
    ExperimentReport report;
    for (std::int64_t k = 1; k <= cfg.n; ++k) {
        const DyadicProb p =
            cfg.what == "stay" ? exact::stay_positive_prob(k) : exact::barrier_positive_prob(k, cfg.alpha);
        EstimateRow r;
        r.experiment = "exact";
        r.quantity = cfg.what == "stay" ? "stay_positive" : "barrier_positive";
        r.n = k;
        r.alpha = cfg.what == "stay" ? 0.0 : cfg.alpha;
        r.estimate = p.to_double();
        r.exact = p.to_string();
        report.rows.push_back(std::move(r));
    }
    return {render(std::move(report), cfg), true};
}

Outcome run_oracle(const CliConfig& cfg) {
    validate(cfg.n >= 1 && cfg.n <= exact::oracle_max_n,
             "--n must be in [1, " + std::to_string(exact::oracle_max_n) + "] for the enumeration oracle");
    ExperimentReport report;
    bool all = true;
    for (std::int64_t n = 1; n <= cfg.n; ++n) {
        const auto oracle = exact::influence_oracle_profile(n);
        for (std::int64_t m = 1; m <= n; ++m) {
            const auto formula = exact::influence_exact(n, m);
            const bool ok = formula == oracle[static_cast<std::size_t>(m - 1)];
            all = all && ok;
            EstimateRow r;
            r.experiment = "oracle";
            r.quantity = ok ? "influence_match" : "influence_mismatch";
            r.n = n;
            r.m = m;
            r.estimate = formula.to_double();
            r.exact = formula.to_string();
            report.rows.push_back(std::move(r));
        }
    }
    return {render(std::move(report), cfg), all};
}

Outcome run_simulate(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.alpha >= 0.0, "--alpha must be >= 0");
    const ClockSet clocks = sample_clocks(static_cast<std::size_t>(cfg.n), 1.0, cfg.seed);
    const PositivityTimeline timeline = positivity_timeline(clocks, static_cast<std::size_t>(cfg.n), cfg.alpha);
    std::ostringstream os;
    if (cfg.format == "json") {
        nlohmann::json events = nlohmann::json::array();
        for (const auto& e : timeline.trace) {
            events.push_back({{"event_index", e.index},
                              {"time", e.time},
                              {"bit", e.bit},
                              {"new_value", e.new_value},
                              {"status_after", e.status_after ? 1 : 0}});
        }
        nlohmann::json segments = nlohmann::json::array();
        for (const auto& s : timeline.segments) segments.push_back({{"start", s.start}, {"end", s.end}, {"status", s.status ? 1 : 0}});
        nlohmann::json doc = {{"meta", {{"seed", cfg.seed}, {"version", version_string}, {"n", cfg.n}, {"alpha", cfg.alpha}}},
                              {"initial_status", timeline.segments.front().start == 0.0 && timeline.segments.front().status ? 1 : 0},
                              {"kappa", kappa_measure(timeline)},
                              {"segments", segments},
                              {"rows", events}};
        os << doc.dump(2) << '\n';
    } else {
        os << "event_index,time,bit,new_value,status_after\n";
        for (const auto& e : timeline.trace) {
            os << e.index << ',' << format_double(e.time) << ',' << e.bit << ',' << e.new_value << ','
               << (e.status_after ? 1 : 0) << '\n';
        }
    }
    return {os.str(), true};
}

Outcome run_ns(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.trials >= 1, "--trials must be >= 1");
    validate(cfg.kind == "switch" || cfg.kind == "compass", "--kind must be switch or compass");
    std::vector<double> eps;
    if (!cfg.eps_preset.empty()) {
        const auto parts = parse_eps_list(cfg.eps_preset);
        validate(parts.size() == 2 && parts[0] > 0.0, "--eps-preset expects 'scale,beta' with scale > 0");
        eps.push_back(eps_preset(cfg.n, parts[0], parts[1]));
    }
    if (!cfg.eps_text.empty()) {
        for (double e : parse_eps_list(cfg.eps_text)) eps.push_back(e);
    }
    validate(!eps.empty(), "ns needs --eps or --eps-preset");
    for (double e : eps) validate(e >= 0.0, "--eps values must be >= 0");
    const WalkKind kind = cfg.kind == "compass" ? WalkKind::compass : WalkKind::switch_walk;
    return {render(noise_sensitivity_curve(cfg.n, eps, cfg.trials, kind, RunOptions{cfg.seed, cfg.workers}), cfg), true};
}

Outcome run_uv(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.trials >= 1, "--trials must be >= 1");
    const auto eps = parse_eps_list(cfg.eps_text);
    validate(eps.size() == 1 && eps[0] > 0.0, "uv needs a single --eps > 0");
    validate(period_count(cfg.n, eps[0]) >= 2, "uv: K(n) = 2 floor(n (1 - e^-eps) / 4) must be >= 2");
    const UvResult res = u_abs_v_experiment(cfg.n, eps[0], cfg.trials, RunOptions{cfg.seed, cfg.workers});
    ExperimentReport report;
    report.rows.push_back(res.row);
    EstimateRow viol = res.row;
    viol.quantity = "identity_violations";
    viol.estimate = static_cast<double>(res.identity_violations + res.mirror_violations);
    viol.stderr_.reset();
    report.rows.push_back(viol);
    return {render(std::move(report), cfg), res.identity_violations == 0 && res.mirror_violations == 0};
}

Outcome run_kappa(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.trials >= 1, "--trials must be >= 1");
    return {render(kappa_experiment(cfg.n, cfg.trials, RunOptions{cfg.seed, cfg.workers}), cfg), true};
}

Outcome run_phi(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.trials >= 1, "--trials must be >= 1");
    validate(cfg.alpha >= 0.0, "--alpha must be >= 0");
    validate(cfg.gamma >= 0.0 && cfg.gamma < 1.0, "--gamma must be in [0, 1)");
    return {render(phi_experiment(cfg.n, cfg.alpha, cfg.gamma, cfg.trials, RunOptions{cfg.seed, cfg.workers}), cfg),
            true};
}

Outcome run_tail(const CliConfig& cfg) {
    validate(cfg.n >= 1, "--n must be >= 1");
    validate(cfg.alpha > 0.5, "--alpha must be > 1/2");
    ExperimentReport report = alpha_tail_report(cfg.n, cfg.alpha);
    const bool ok = report.rows[3].estimate >= 0.0 && report.rows[4].estimate >= 0.0;
    return {render(std::move(report), cfg), ok};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    if (const char* env = std::getenv(seed_env_var)) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            err << "error: " << seed_env_var << " is not an unsigned integer\n";
            return exit_usage;
        }
    }

    CLI::App app{"Switch random walk: exact influences, noise sensitivity and dynamical positivity"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", cfg.seed, "master seed (default from " + std::string(seed_env_var) + " or 1)");
        sub->add_option("--workers", cfg.workers, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out_path, "write the report here instead of stdout");
        sub->add_flag("--timing", cfg.timing, "record wall time and a timestamp");
    };

    std::vector<std::pair<CLI::App*, std::function<Outcome(const CliConfig&)>>> commands;
    auto add = [&](const char* name, const char* help, std::function<Outcome(const CliConfig&)> fn) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub);
        sub->add_option("--n", cfg.n, "walk length")->required();
        commands.emplace_back(sub, std::move(fn));
        return sub;
    };

    auto* exact_cmd = add("exact", "exact tables: stay, barrier, influence profile, identity checks", run_exact);
    exact_cmd->add_option("--what", cfg.what, "stay | barrier | influence | identities");
    exact_cmd->add_option("--mode", cfg.mode, "influence method: exact | float | oracle | mc");
    exact_cmd->add_option("--alpha", cfg.alpha, "barrier exponent");
    exact_cmd->add_option("--trials", cfg.trials, "trials for --mode mc");

    auto* oracle_cmd = add("oracle", "brute-force influence oracle vs the formula, every n' <= n", run_oracle);
    (void)oracle_cmd;

    auto* sim_cmd = add("simulate", "event trace of the positivity timeline on [0, 1]", run_simulate);
    sim_cmd->add_option("--alpha", cfg.alpha, "barrier exponent");

    auto* ns_cmd = add("ns", "joint positivity at times 0 and eps", run_ns);
    ns_cmd->add_option("--eps", cfg.eps_text, "comma-separated time gaps");
    ns_cmd->add_option("--eps-preset", cfg.eps_preset, "'scale,beta' for eps = scale / n^beta");
    ns_cmd->add_option("--trials", cfg.trials, "trials per eps");
    ns_cmd->add_option("--kind", cfg.kind, "switch | compass");

    auto* uv_cmd = add("uv", "P(U' > |V'|) over K(n) periods", run_uv);
    uv_cmd->add_option("--eps", cfg.eps_text, "time gap")->required();
    uv_cmd->add_option("--trials", cfg.trials, "trials");

    auto* kappa_cmd = add("kappa", "moments of the positive-time measure on [0, 1]", run_kappa);
    kappa_cmd->add_option("--trials", cfg.trials, "trials");

    auto* phi_cmd = add("phi", "two-time energy of the barrier timeline", run_phi);
    phi_cmd->add_option("--alpha", cfg.alpha, "barrier exponent");
    phi_cmd->add_option("--gamma", cfg.gamma, "energy exponent in [0, 1)");
    phi_cmd->add_option("--trials", cfg.trials, "trials");

    auto* tail_cmd = add("tail", "exact tail at ceil(n^alpha) vs the exponential bounds", run_tail);
    tail_cmd->add_option("--alpha", cfg.alpha, "exponent > 1/2")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    Outcome outcome;
    try {
        for (auto& [sub, fn] : commands) {
            if (sub->parsed()) {
                cfg.command = sub->get_name();
                outcome = fn(cfg);
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    if (cfg.out_path.empty()) {
        out << outcome.text;
    } else {
        std::ofstream file(cfg.out_path);
        if (!file) {
            err << "error: cannot open " << cfg.out_path << " for writing\n";
            return exit_usage;
        }
        file << outcome.text;
    }
    if (!outcome.checks_passed) {
        err << "error: a registered check failed in '" << cfg.command << "'\n";
        return exit_check_failed;
    }
    return exit_ok;
}

}  // namespace switchwalk::cli
