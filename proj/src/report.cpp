#include "switchwalk/report.hpp"

#include <cmath>
#include <locale>
#include <sstream>

namespace switchwalk {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << value;
    return os.str();
}

namespace {

std::string csv_cell(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

template <class T>
std::string opt_cell(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>) {
        return format_double(*v);
    } else if constexpr (std::is_same_v<T, std::string>) {
        return csv_cell(*v);
    } else {
        return std::to_string(*v);
    }
}

template <class T>
nlohmann::json opt_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> json_opt(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& out, bool include_timing) {
    bool first = true;
    for (const char* col : report_columns) {
        out << (first ? "" : ",") << col;
        first = false;
    }
    out << '\n';
    for (const auto& r : report.rows) {
        out << csv_cell(r.experiment) << ',' << csv_cell(r.quantity) << ',' << r.n << ',' << opt_cell(r.m) << ','
            << opt_cell(r.eps) << ',' << opt_cell(r.gamma) << ',' << opt_cell(r.alpha) << ',' << opt_cell(r.kind)
            << ',' << r.trials << ',' << format_double(r.estimate) << ',' << opt_cell(r.stderr_) << ','
            << opt_cell(r.exact) << ',' << (include_timing ? format_double(r.seconds) : "") << '\n';
    }
}

nlohmann::json to_json(const ExperimentReport& report, bool include_timing) {
    nlohmann::json meta = {{"seed", report.master_seed}, {"version", report.version}};
    if (include_timing && !report.timestamp.empty()) meta["timestamp"] = report.timestamp;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"experiment", r.experiment},
                        {"quantity", r.quantity},
                        {"n", r.n},
                        {"m", opt_json(r.m)},
                        {"eps", opt_json(r.eps)},
                        {"gamma", opt_json(r.gamma)},
                        {"alpha", opt_json(r.alpha)},
                        {"kind", opt_json(r.kind)},
                        {"trials", r.trials},
                        {"estimate", r.estimate},
                        {"stderr", opt_json(r.stderr_)},
                        {"exact", opt_json(r.exact)},
                        {"seconds", include_timing ? nlohmann::json(r.seconds) : nlohmann::json(nullptr)}});
    }
    return {{"meta", meta}, {"rows", rows}};
}

ExperimentReport from_json(const nlohmann::json& doc) {
    ExperimentReport report;
    const auto& meta = doc.at("meta");
    report.master_seed = meta.at("seed").get<std::uint64_t>();
    report.version = meta.at("version").get<std::string>();
    if (meta.contains("timestamp")) report.timestamp = meta.at("timestamp").get<std::string>();
    for (const auto& j : doc.at("rows")) {
        EstimateRow r;
        r.experiment = j.at("experiment").get<std::string>();
        r.quantity = j.at("quantity").get<std::string>();
        r.n = j.at("n").get<std::int64_t>();
        r.m = json_opt<std::int64_t>(j, "m");
        r.eps = json_opt<double>(j, "eps");
        r.gamma = json_opt<double>(j, "gamma");
        r.alpha = json_opt<double>(j, "alpha");
        r.kind = json_opt<std::string>(j, "kind");
        r.trials = j.at("trials").get<std::uint64_t>();
        r.estimate = j.at("estimate").get<double>();
        r.stderr_ = json_opt<double>(j, "stderr");
        r.exact = json_opt<std::string>(j, "exact");
        r.seconds = json_opt<double>(j, "seconds").value_or(0.0);
        report.rows.push_back(std::move(r));
    }
    return report;
}

}  // namespace switchwalk
