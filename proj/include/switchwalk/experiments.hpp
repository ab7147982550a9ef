#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchwalk/core_walks.hpp"

namespace switchwalk {

inline constexpr const char* version_string = "1.0.0";

/// One estimator line. Optional fields are absent (not zero) when they do not
/// apply, e.g. stderr for a single trial or for an exact value.
struct EstimateRow {
    std::string experiment;
    std::string quantity;
    std::int64_t n = 0;
    std::optional<std::int64_t> m;
    std::optional<double> eps;
    std::optional<double> gamma;
    std::optional<double> alpha;
    std::optional<std::string> kind;
    std::uint64_t trials = 0;
    double estimate = 0.0;
    std::optional<double> stderr_;
    std::optional<std::string> exact;  // "numerator/2^e" when the value is exact
    double seconds = 0.0;

    /// Equality on everything except wall time.
    bool same_values(const EstimateRow& other) const;
};

struct ExperimentReport {
    std::vector<EstimateRow> rows;
    std::uint64_t master_seed = 0;
    std::string version = version_string;
    std::string timestamp;  // ISO-8601 UTC; empty when not recorded

    void append(const ExperimentReport& other);
    bool same_rows(const ExperimentReport& other) const;
};

struct RunOptions {
    std::uint64_t seed = 1;
    unsigned workers = 1;  // 0 = hardware concurrency
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    void merge(const CompensatedSum& other) noexcept;
    double value() const noexcept { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

/// Count, compensated sum and sum of squares of one per-trial quantity.
class Moments {
public:
    void add(double x) noexcept;
    void merge(const Moments& other) noexcept;
    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept;
    /// Sample variance (divisor count - 1); absent below two samples.
    std::optional<double> variance() const noexcept;
    /// Sample standard deviation / sqrt(count); absent below two samples.
    std::optional<double> stderr_() const noexcept;

private:
    std::uint64_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

/// eps_n = scale / n^beta. beta < 1 gives n * eps_n -> infinity; beta = 1 is the
/// boundary case where decorrelation is not expected.
double eps_preset(std::int64_t n, double scale, double beta);

/// Orthant probability P(G > 0, G' > 0) = 1/4 + arcsin(rho)/(2 pi) of a standard
/// bivariate normal pair with correlation rho = e^{-eps}.
double gaussian_orthant(double eps);

/// K(n) = 2 floor(n (1 - e^{-eps}) / 4).
std::int64_t period_count(std::int64_t n, double eps);

ExperimentReport noise_sensitivity_curve(std::int64_t n, const std::vector<double>& eps_list,
                                         std::uint64_t trials, WalkKind kind, const RunOptions& options);

struct UvResult {
    EstimateRow row;                         // P(U' > |V'|)
    std::uint64_t identity_violations = 0;   // trials where U'+-V' missed Z_{I_K}(0) / Z_{I_K}(t)
    std::uint64_t mirror_violations = 0;
};

UvResult u_abs_v_experiment(std::int64_t n, double eps, std::uint64_t trials, const RunOptions& options);

ExperimentReport kappa_experiment(std::int64_t n, std::uint64_t trials, const RunOptions& options);

ExperimentReport phi_experiment(std::int64_t n, double alpha, double gamma, std::uint64_t trials,
                                const RunOptions& options);

enum class InfluenceMode { exact, float_mode, oracle, mc };

InfluenceMode parse_influence_mode(const std::string& text);
const char* to_string(InfluenceMode mode) noexcept;

ExperimentReport influence_profile(std::int64_t n, InfluenceMode mode, std::uint64_t trials,
                                   const RunOptions& options);

/// x = ceil(n^alpha) raised to the parity of n; P(Z_n >= x) against
/// exp(-n^{2 alpha - 1} / 4) and exp(-x^2 / (2n)). Requires alpha > 1/2.
ExperimentReport alpha_tail_report(std::int64_t n, double alpha);

/// The threshold used by alpha_tail_report.
std::int64_t parity_adjusted_threshold(std::int64_t n, double alpha);

}  // namespace switchwalk
