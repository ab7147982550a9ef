#include "switchwalk/experiments.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "switchwalk/dynamics.hpp"
#include "switchwalk/exact_engine.hpp"
#include "trial_runner.hpp"

namespace switchwalk {

bool EstimateRow::same_values(const EstimateRow& o) const {
    return experiment == o.experiment && quantity == o.quantity && n == o.n && m == o.m && eps == o.eps &&
           gamma == o.gamma && alpha == o.alpha && kind == o.kind && trials == o.trials &&
           estimate == o.estimate && stderr_ == o.stderr_ && exact == o.exact;
}

void ExperimentReport::append(const ExperimentReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

bool ExperimentReport::same_rows(const ExperimentReport& other) const {
    if (rows.size() != other.rows.size()) return false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].same_values(other.rows[i])) return false;
    }
    return true;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.correction_);
}

void Moments::add(double x) noexcept {
    ++count_;
    sum_.add(x);
    sum_sq_.add(x * x);
}

void Moments::merge(const Moments& other) noexcept {
    count_ += other.count_;
    sum_.merge(other.sum_);
    sum_sq_.merge(other.sum_sq_);
}

double Moments::mean() const noexcept {
    return count_ == 0 ? 0.0 : sum_.value() / static_cast<double>(count_);
}

std::optional<double> Moments::variance() const noexcept {
    if (count_ < 2) return std::nullopt;
    const double n = static_cast<double>(count_);
    const double mu = mean();
    return std::max(0.0, (sum_sq_.value() - n * mu * mu) / (n - 1.0));
}

std::optional<double> Moments::stderr_() const noexcept {
    const auto var = variance();
    if (!var) return std::nullopt;
    return std::sqrt(*var / static_cast<double>(count_));
}

double eps_preset(std::int64_t n, double scale, double beta) {
    if (n < 1 || !(scale > 0.0)) throw std::invalid_argument("eps_preset needs n >= 1 and scale > 0");
    return scale / std::pow(static_cast<double>(n), beta);
}

double gaussian_orthant(double eps) {
    return 0.25 + std::asin(std::exp(-eps)) / (2.0 * std::numbers::pi);
}

std::int64_t period_count(std::int64_t n, double eps) {
    return 2 * static_cast<std::int64_t>(std::floor(static_cast<double>(n) * -std::expm1(-eps) / 4.0));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

EstimateRow make_row(std::string experiment, std::string quantity, std::int64_t n, std::uint64_t trials,
                     double estimate, std::optional<double> se) {
    EstimateRow row;
    row.experiment = std::move(experiment);
    row.quantity = std::move(quantity);
    row.n = n;
    row.trials = trials;
    row.estimate = estimate;
    row.stderr_ = se;
    return row;
}

struct NsAcc {
    Moments joint, at0, at_t;
    Moments both;  // (1{Z_n(0)>0} + 1{Z_n(t)>0}) / 2
    CompensatedSum joint_times_both;
    void merge(const NsAcc& o) {
        joint.merge(o.joint);
        at0.merge(o.at0);
        at_t.merge(o.at_t);
        both.merge(o.both);
        joint_times_both.merge(o.joint_times_both);
    }
};

}  // namespace

ExperimentReport noise_sensitivity_curve(std::int64_t n, const std::vector<double>& eps_list,
                                         std::uint64_t trials, WalkKind kind, const RunOptions& options) {
    require(n >= 1, "noise_sensitivity_curve needs n >= 1");
    require(trials >= 1, "noise_sensitivity_curve needs trials >= 1");
    require(!eps_list.empty(), "noise_sensitivity_curve needs at least one eps");
    for (double e : eps_list) require(e >= 0.0, "noise_sensitivity_curve needs eps >= 0");

    ExperimentReport report;
    report.master_seed = options.seed;
    const std::string name = "noise_sensitivity";
    for (std::size_t idx = 0; idx < eps_list.size(); ++idx) {
        const double eps = eps_list[idx];
        const auto start = Clock::now();
        const auto acc = detail::run_trials<NsAcc>(
            trials, options, static_cast<std::uint64_t>(idx) << 40, [&](StreamRng& rng, NsAcc& a) {
                const auto [z0, zt] = two_time_endpoints(kind, static_cast<std::size_t>(n), eps, rng);
                const double j = (z0 > 0 && zt > 0) ? 1.0 : 0.0;
                const double b = ((z0 > 0 ? 1.0 : 0.0) + (zt > 0 ? 1.0 : 0.0)) / 2.0;
                a.joint.add(j);
                a.at0.add(z0 > 0 ? 1.0 : 0.0);
                a.at_t.add(zt > 0 ? 1.0 : 0.0);
                a.both.add(b);
                a.joint_times_both.add(j * b);
            });
        const double secs = seconds_since(start);

        const double p = acc.both.mean();
        const double gap = acc.joint.mean() - p * p;
        std::optional<double> gap_se;
        if (trials >= 2) {
            // delta method on joint - p^2: Var(J - 2pB) / trials
            const double t = static_cast<double>(trials);
            const double cov = (acc.joint_times_both.value() - t * acc.joint.mean() * p) / (t - 1.0);
            const double var = *acc.joint.variance() + 4.0 * p * p * *acc.both.variance() - 4.0 * p * cov;
            gap_se = std::sqrt(std::max(0.0, var) / t);
        }

        std::vector<EstimateRow> rows;
        rows.push_back(make_row(name, "joint_positive", n, trials, acc.joint.mean(), acc.joint.stderr_()));
        rows.push_back(make_row(name, "marginal_positive", n, trials, p, acc.both.stderr_()));
        rows.push_back(make_row(name, "covariance_gap", n, trials, gap, gap_se));
        if (kind == WalkKind::compass) {
            rows.push_back(make_row(name, "gaussian_orthant", n, 0, gaussian_orthant(eps), std::nullopt));
        }
        for (auto& r : rows) {
            r.eps = eps;
            r.kind = to_string(kind);
            r.seconds = secs;
            report.rows.push_back(std::move(r));
        }
    }
    return report;
}

namespace {

struct UvAcc {
    Moments wins;
    std::uint64_t identity_violations = 0;
    std::uint64_t mirror_violations = 0;
    void merge(const UvAcc& o) {
        wins.merge(o.wins);
        identity_violations += o.identity_violations;
        mirror_violations += o.mirror_violations;
    }
};

}  // namespace

UvResult u_abs_v_experiment(std::int64_t n, double eps, std::uint64_t trials, const RunOptions& options) {
    require(n >= 1, "u_abs_v_experiment needs n >= 1");
    require(eps > 0.0, "u_abs_v_experiment needs eps > 0");
    require(trials >= 1, "u_abs_v_experiment needs trials >= 1");
    const std::int64_t k = period_count(n, eps);
    if (k < 2) {
        throw std::invalid_argument("u_abs_v_experiment: K(n) = " + std::to_string(k) +
                                    " < 2; n * eps too small for two periods");
    }
    const auto kp = static_cast<std::size_t>(k);
    const auto start = Clock::now();
    const auto acc = detail::run_trials<UvAcc>(trials, options, 0, [&](StreamRng& rng, UvAcc& a) {
        const TwoTimeCoupling c = two_time_sample_covering(static_cast<std::size_t>(n), eps, kp, rng);
        const UvPair uv = uv_decomposition(c, kp);
        const WalkPath z0 = switch_walk(c.bits0);
        const WalkPath zt = switch_walk(c.bits_t);
        if (uv.u + uv.v != z0[uv.last_change] || uv.u - uv.v != zt[uv.last_change]) ++a.identity_violations;
        if (mirror_residual(c, uv.last_change) != 0) ++a.mirror_violations;
        a.wins.add(uv.u > std::abs(uv.v) ? 1.0 : 0.0);
    });
    UvResult out;
    out.row = make_row("u_abs_v", "u_gt_abs_v", n, trials, acc.wins.mean(), acc.wins.stderr_());
    out.row.eps = eps;
    out.row.m = k;
    out.row.kind = "switch";
    out.row.seconds = seconds_since(start);
    out.identity_violations = acc.identity_violations;
    out.mirror_violations = acc.mirror_violations;
    return out;
}

namespace {

struct KappaAcc {
    Moments k1, k2, k3, k4, positive;
    void merge(const KappaAcc& o) {
        k1.merge(o.k1);
        k2.merge(o.k2);
        k3.merge(o.k3);
        k4.merge(o.k4);
        positive.merge(o.positive);
    }
};

}  // namespace

ExperimentReport kappa_experiment(std::int64_t n, std::uint64_t trials, const RunOptions& options) {
    require(n >= 1, "kappa_experiment needs n >= 1");
    require(trials >= 1, "kappa_experiment needs trials >= 1");
    const auto start = Clock::now();
    const auto acc = detail::run_trials<KappaAcc>(trials, options, 0, [&](StreamRng& rng, KappaAcc& a) {
        const ClockSet clocks = sample_clocks(static_cast<std::size_t>(n), 1.0, rng);
        const double k = kappa_measure(positivity_timeline(clocks, static_cast<std::size_t>(n), 0.0));
        a.k1.add(k);
        a.k2.add(k * k);
        a.k3.add(k * k * k);
        a.k4.add(k * k * k * k);
        a.positive.add(k > 0.0 ? 1.0 : 0.0);
    });
    const double secs = seconds_since(start);

    const double m1 = acc.k1.mean();
    const double m2 = acc.k2.mean();
    std::optional<double> ratio;
    std::optional<double> ratio_se;
    if (m1 > 0.0) {
        ratio = m2 / (m1 * m1);
        if (trials >= 2) {
            // delta method for E[k^2] / E[k]^2
            const double m3 = acc.k3.mean();
            const double m4 = acc.k4.mean();
            const double var1 = m2 - m1 * m1;
            const double var2 = m4 - m2 * m2;
            const double cov = m3 - m1 * m2;
            const double g1 = -2.0 * m2 / (m1 * m1 * m1);
            const double g2 = 1.0 / (m1 * m1);
            const double var = g1 * g1 * var1 + g2 * g2 * var2 + 2.0 * g1 * g2 * cov;
            ratio_se = std::sqrt(std::max(0.0, var) / static_cast<double>(trials - 1));
        }
    }

    const DyadicProb p = exact::stay_positive_prob(n);
    ExperimentReport report;
    report.master_seed = options.seed;
    report.rows.push_back(make_row("kappa", "mean_kappa", n, trials, m1, acc.k1.stderr_()));
    report.rows.push_back(make_row("kappa", "second_moment", n, trials, m2, acc.k2.stderr_()));
    if (ratio) report.rows.push_back(make_row("kappa", "moment_ratio", n, trials, *ratio, ratio_se));
    report.rows.push_back(make_row("kappa", "prob_kappa_positive", n, trials, acc.positive.mean(),
                                   acc.positive.stderr_()));
    EstimateRow exact_row = make_row("kappa", "exact_stay_positive", n, 0, p.to_double(), std::nullopt);
    exact_row.exact = p.to_string();
    report.rows.push_back(std::move(exact_row));
    for (auto& r : report.rows) {
        r.alpha = 0.0;
        r.seconds = secs;
    }
    return report;
}

ExperimentReport phi_experiment(std::int64_t n, double alpha, double gamma, std::uint64_t trials,
                                const RunOptions& options) {
    require(n >= 1, "phi_experiment needs n >= 1");
    require(alpha >= 0.0, "phi_experiment needs alpha >= 0");
    require(gamma >= 0.0 && gamma < 1.0, "phi_experiment needs gamma in [0, 1)");
    require(trials >= 1, "phi_experiment needs trials >= 1");
    const auto start = Clock::now();
    const DyadicProb p = exact::barrier_positive_prob(n, alpha);
    const double norm = 1.0 / (p.to_double() * p.to_double());
    const auto acc = detail::run_trials<Moments>(trials, options, 0, [&](StreamRng& rng, Moments& a) {
        const ClockSet clocks = sample_clocks(static_cast<std::size_t>(n), 1.0, rng);
        const auto timeline = positivity_timeline(clocks, static_cast<std::size_t>(n), alpha);
        a.add(pair_energy(timeline, gamma) * norm);
    });
    const double secs = seconds_since(start);

    ExperimentReport report;
    report.master_seed = options.seed;
    report.rows.push_back(make_row("phi", "phi", n, trials, acc.mean(), acc.stderr_()));
    EstimateRow exact_row = make_row("phi", "exact_barrier_positive", n, 0, p.to_double(), std::nullopt);
    exact_row.exact = p.to_string();
    report.rows.push_back(std::move(exact_row));
    for (auto& r : report.rows) {
        r.alpha = alpha;
        r.gamma = gamma;
        r.seconds = secs;
    }
    return report;
}

InfluenceMode parse_influence_mode(const std::string& text) {
    if (text == "exact") return InfluenceMode::exact;
    if (text == "float") return InfluenceMode::float_mode;
    if (text == "oracle") return InfluenceMode::oracle;
    if (text == "mc") return InfluenceMode::mc;
    throw std::invalid_argument("unknown influence mode '" + text + "' (exact, float, oracle, mc)");
}

const char* to_string(InfluenceMode mode) noexcept {
    switch (mode) {
        case InfluenceMode::exact: return "exact";
        case InfluenceMode::float_mode: return "float";
        case InfluenceMode::oracle: return "oracle";
        case InfluenceMode::mc: return "mc";
    }
    return "?";
}

namespace {

struct PivotAcc {
    std::vector<std::uint64_t> pivotal;
    std::uint64_t trials = 0;
    void merge(const PivotAcc& o) {
        if (pivotal.size() < o.pivotal.size()) pivotal.resize(o.pivotal.size(), 0);
        for (std::size_t i = 0; i < o.pivotal.size(); ++i) pivotal[i] += o.pivotal[i];
        trials += o.trials;
    }
};

}  // namespace

ExperimentReport influence_profile(std::int64_t n, InfluenceMode mode, std::uint64_t trials,
                                   const RunOptions& options) {
    require(n >= 1, "influence_profile needs n >= 1");
    const auto start = Clock::now();
    ExperimentReport report;
    report.master_seed = options.seed;
    const std::string name = "influence";
    auto add_exact = [&](const std::vector<DyadicProb>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            EstimateRow r = make_row(name, "influence", n, 0, values[i].to_double(), std::nullopt);
            r.m = static_cast<std::int64_t>(i + 1);
            r.exact = values[i].to_string();
            report.rows.push_back(std::move(r));
        }
    };

    switch (mode) {
        case InfluenceMode::exact:
            add_exact(exact::influence_profile_exact(n));
            break;
        case InfluenceMode::oracle:
            add_exact(exact::influence_oracle_profile(n));
            break;
        case InfluenceMode::float_mode: {
            const auto values = exact::influence_profile_float(n);
            for (std::size_t i = 0; i < values.size(); ++i) {
                EstimateRow r = make_row(name, "influence", n, 0, values[i], std::nullopt);
                r.m = static_cast<std::int64_t>(i + 1);
                report.rows.push_back(std::move(r));
            }
            break;
        }
        case InfluenceMode::mc: {
            require(trials >= 1, "influence_profile mc mode needs trials >= 1");
            const auto len = static_cast<std::size_t>(n);
            const auto acc = detail::run_trials<PivotAcc>(trials, options, 0, [&](StreamRng& rng, PivotAcc& a) {
                if (a.pivotal.empty()) a.pivotal.assign(len, 0);
                ++a.trials;
                std::vector<int8_t> bits(len);
                for (std::size_t i = 0; i < len; i += 64) {
                    const std::uint64_t w = rng();
                    for (std::size_t b = 0; b < 64 && i + b < len; ++b) bits[i + b] = ((w >> b) & 1U) ? -1 : 1;
                }
                const WalkPath z = switch_walk(BitSequence(std::move(bits)));
                // flipping bit m reflects Z_m..Z_n about Z_{m-1}; the flipped string
                // keeps P_n iff the prefix stays positive and 2 Z_{m-1} exceeds the
                // suffix maximum
                std::vector<std::int64_t> suffix_max(len + 2, INT64_MIN);
                for (std::size_t i = len; i >= 1; --i) suffix_max[i] = std::max(suffix_max[i + 1], z[i]);
                bool prefix_ok = true;  // Z_1..Z_{m-1} > 0
                const bool holds = barrier_positive(z, 0.0);
                for (std::size_t m = 1; m <= len; ++m) {
                    const bool flipped = prefix_ok && (2 * z[m - 1] - suffix_max[m] > 0);
                    if (flipped != holds) ++a.pivotal[m - 1];
                    prefix_ok = prefix_ok && z[m] > 0;
                }
            });
            const double t = static_cast<double>(trials);
            for (std::size_t i = 0; i < len; ++i) {
                const double count = acc.pivotal.empty() ? 0.0 : static_cast<double>(acc.pivotal[i]);
                const double p = count / t;
                std::optional<double> se;
                if (trials >= 2) se = std::sqrt(p * (1.0 - p) / (t - 1.0));
                EstimateRow r = make_row(name, "influence", n, trials, p, se);
                r.m = static_cast<std::int64_t>(i + 1);
                report.rows.push_back(std::move(r));
            }
            break;
        }
    }
    const double secs = seconds_since(start);
    for (auto& r : report.rows) {
        r.kind = to_string(mode);
        r.seconds = secs;
    }
    return report;
}

std::int64_t parity_adjusted_threshold(std::int64_t n, double alpha) {
    std::int64_t x = barrier_floor(static_cast<std::size_t>(n), alpha);
    if ((x - n) % 2 != 0) ++x;
    return x;
}

ExperimentReport alpha_tail_report(std::int64_t n, double alpha) {
    require(n >= 1, "alpha_tail_report needs n >= 1");
    require(alpha > 0.5, "alpha_tail_report needs alpha > 1/2");
    const auto start = Clock::now();
    const std::int64_t x = parity_adjusted_threshold(n, alpha);
    const DyadicProb tail = exact::tail_prob(n, x);
    const double nd = static_cast<double>(n);
    const double xd = static_cast<double>(x);
    const double log_bound = -std::pow(nd, 2.0 * alpha - 1.0) / 4.0;
    const double log_chernoff = -xd * xd / (2.0 * nd);
    const double log_tail = tail.log2() * std::numbers::ln2;

    ExperimentReport report;
    EstimateRow t = make_row("alpha_tail", "exact_tail", n, 0, tail.to_double(), std::nullopt);
    t.exact = tail.to_string();
    t.m = x;
    report.rows.push_back(std::move(t));
    report.rows.push_back(make_row("alpha_tail", "bound_quarter_power", n, 0, std::exp(log_bound), std::nullopt));
    report.rows.push_back(make_row("alpha_tail", "chernoff_bound", n, 0, std::exp(log_chernoff), std::nullopt));
    report.rows.push_back(make_row("alpha_tail", "log_margin_quarter_power", n, 0, log_bound - log_tail, std::nullopt));
    report.rows.push_back(make_row("alpha_tail", "log_margin_chernoff", n, 0, log_chernoff - log_tail, std::nullopt));
    const double secs = seconds_since(start);
    for (auto& r : report.rows) {
        r.alpha = alpha;
        r.m = x;
        r.seconds = secs;
    }
    return report;
}

}  // namespace switchwalk
