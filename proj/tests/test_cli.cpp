#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "switchwalk/cli.hpp"
#include "switchwalk/report.hpp"

using namespace switchwalk;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "switchwalk");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("exit codes") {
    CHECK(invoke({"oracle", "--n", "12", "--seed", "1"}).code == cli::exit_ok);
    CHECK(invoke({"ns", "--n", "0", "--eps", "0.1"}).code == cli::exit_usage);
    CHECK(invoke({"oracle", "--n", "21"}).code == cli::exit_usage);
    CHECK(invoke({"tail", "--n", "100", "--alpha", "0.5"}).code == cli::exit_usage);
    CHECK(invoke({"uv", "--n", "10", "--eps", "0.0001"}).code == cli::exit_usage);
    CHECK(invoke({"phi", "--n", "10", "--gamma", "1"}).code == cli::exit_usage);
    CHECK(invoke({"ns", "--n", "10", "--eps", "0.1,abc"}).code == cli::exit_usage);
    CHECK(invoke({"ns", "--n", "10", "--eps", "0.1", "--format", "xml"}).code == cli::exit_usage);
    CHECK(invoke({"exact", "--n", "4", "--what", "nothing"}).code == cli::exit_usage);
    CHECK(invoke({"exact", "--n", "30", "--what", "identities"}).code == cli::exit_ok);
    const auto unknown = invoke({"frobnicate"});
    CHECK(unknown.code == cli::exit_usage);
    CHECK(unknown.out.empty());
    CHECK(unknown.err.find("Usage") != std::string::npos);
    const auto help = invoke({"--help"});
    CHECK(help.code == cli::exit_ok);
    CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("exact influence table") {
    const auto r = invoke({"exact", "--n", "4", "--what", "influence", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][9] == "estimate");
    CHECK(rows[1][9] == "0.375");
    CHECK(rows[2][9] == "0.375");
    CHECK(rows[3][9] == "0.125");
    CHECK(rows[4][9] == "0.125");
    CHECK(rows[4][11] == "1/2^3");
}

TEST_CASE("csv and json carry the same values") {
    const std::vector<std::string> base{"kappa", "--n", "20", "--trials", "500", "--seed", "8"};
    auto csv_args = base;
    auto json_args = base;
    json_args.insert(json_args.end(), {"--format", "json"});
    const auto csv = invoke(csv_args);
    const auto json = invoke(json_args);
    REQUIRE(csv.code == 0);
    REQUIRE(json.code == 0);
    const auto rows = parse_csv(csv.out);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["meta"]["seed"] == 8);
    REQUIRE(doc["rows"].size() + 1 == rows.size());
    for (std::size_t i = 0; i < doc["rows"].size(); ++i) {
        CHECK(format_double(doc["rows"][i]["estimate"].get<double>()) == rows[i + 1][9]);
        CHECK(doc["rows"][i]["quantity"].get<std::string>() == rows[i + 1][1]);
    }
}

TEST_CASE("output is deterministic for fixed flags") {
    const std::vector<std::string> args{"ns", "--n", "200", "--eps", "0.05,0.5", "--trials", "2000", "--seed", "4"};
    const auto a = invoke(args);
    auto with_workers = args;
    with_workers.insert(with_workers.end(), {"--workers", "3"});
    CHECK(a.out == invoke(args).out);
    CHECK(a.out == invoke(with_workers).out);
    CHECK(invoke({"simulate", "--n", "30", "--seed", "2"}).out == invoke({"simulate", "--n", "30", "--seed", "2"}).out);
}

TEST_CASE("seed from the environment, flag wins") {
    ::setenv(cli::seed_env_var, "77", 1);
    const auto env = invoke({"kappa", "--n", "10", "--trials", "100", "--format", "json"});
    const auto flag = invoke({"kappa", "--n", "10", "--trials", "100", "--format", "json", "--seed", "5"});
    ::setenv(cli::seed_env_var, "not-a-number", 1);
    const auto bad = invoke({"kappa", "--n", "10", "--trials", "100"});
    ::unsetenv(cli::seed_env_var);
    CHECK(nlohmann::json::parse(env.out)["meta"]["seed"] == 77);
    CHECK(nlohmann::json::parse(flag.out)["meta"]["seed"] == 5);
    CHECK(bad.code == cli::exit_usage);
}

TEST_CASE("simulate trace") {
    const auto r = invoke({"simulate", "--n", "8", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"event_index", "time", "bit", "new_value", "status_after"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i][0] == std::to_string(i));
        CHECK((rows[i][4] == "0" || rows[i][4] == "1"));
    }
}

TEST_CASE("--out writes a file only on success") {
    const auto dir = std::filesystem::temp_directory_path() / "switchwalk_cli_test";
    std::filesystem::create_directories(dir);
    const auto good = dir / "good.csv";
    const auto bad = dir / "bad.csv";
    std::filesystem::remove(good);
    std::filesystem::remove(bad);
    const auto ok = invoke({"tail", "--n", "64", "--alpha", "0.75", "--out", good.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.empty());
    std::ifstream in(good);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("experiment,", 0) == 0);
    CHECK(invoke({"tail", "--n", "64", "--alpha", "0.4", "--out", bad.string()}).code == cli::exit_usage);
    CHECK_FALSE(std::filesystem::exists(bad));
    std::filesystem::remove_all(dir);
}

#ifdef SWITCHWALK_CLI_PATH
TEST_CASE("installed binary follows the same contract") {
    const std::string exe = SWITCHWALK_CLI_PATH;
    CHECK(std::system((exe + " oracle --n 10 > /dev/null").c_str()) == 0);
    CHECK(WEXITSTATUS(std::system((exe + " ns --n 0 --eps 0.1 2> /dev/null").c_str())) == cli::exit_usage);
}
#endif
