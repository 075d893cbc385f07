#include "tvewd/cli.hpp"
#include "tvewd/series.hpp"
#include "tvewd/text.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

using namespace tvewd;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TVEWD_TEST_DATA;

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tvewd");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("tvewd_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("evaluate reproduces the golden report byte for byte") {
    const auto dir = scratch("golden");
    const auto r = invoke({"evaluate", "--config", (kData / "golden" / "config.json").string(), "--input",
                           (kData / "golden" / "series.csv").string(), "--output", dir.string()});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(read_file(dir / "report.csv") == read_file(kData / "golden" / "report.csv"));
    CHECK(read_file(dir / "report.txt") == read_file(kData / "golden" / "report.txt"));
    CHECK(r.out == read_file(kData / "golden" / "report.txt"));
    const auto jobs = scratch("golden_jobs");
    const auto r4 = invoke({"evaluate", "--config", (kData / "golden" / "config.json").string(), "--input",
                            (kData / "golden" / "series.csv").string(), "--output", jobs.string(), "--jobs", "4"});
    REQUIRE(r4.code == 0);
    CHECK(read_file(jobs / "report.csv") == read_file(dir / "report.csv"));
}

TEST_CASE("simulate then decompose white noise") {
    const auto dir = scratch("wn");
    const auto sim = invoke({"simulate", "--input", (kData / "white_noise.json").string(), "--output", dir.string(),
                             "--seed", "21"});
    REQUIRE_MESSAGE(sim.code == 0, sim.err);
    CHECK(sim.err.empty());
    const auto series = load_series(dir / "series.csv");
    CHECK(series.size() == 3000);
    const auto out = dir / "decomp";
    const auto dec = invoke({"decompose", "--input", (dir / "series.csv").string(), "--output", out.string()});
    REQUIRE_MESSAGE(dec.code == 0, dec.err);
    const auto shares = read_file(out / "shares.csv");
    std::istringstream lines(shares);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "date,j,share");
    double sum = 0.0;
    std::size_t n = 0;
    std::size_t row = 0;
    while (std::getline(lines, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        if (line.substr(first + 1, second - first - 1) != "1") continue;
        ++row;
        if (row < 600 || row > 2400) continue;
        sum += std::stod(line.substr(second + 1));
        ++n;
    }
    REQUIRE(n > 1000);
    CHECK(std::abs(sum / static_cast<double>(n) - 0.3213) < 0.02);
    CHECK(fs::exists(out / "beta.csv"));
    CHECK(fs::exists(out / "coefficients.csv"));
}

TEST_CASE("configuration resolution and printing") {
    const auto r = invoke({"evaluate", "--preset", "period-2010", "--instrument", "CL", "--horizon", "5", "--print-config"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    const auto cfg = nlohmann::json::parse(r.out);
    CHECK(cfg["plan"]["window"] == 700);
    CHECK(cfg["multiscale"]["scales"] == 7);
    CHECK(cfg["kernel"]["bandwidth"] == 0.3);
    CHECK(cfg["forecast"]["lags_by_horizon"]["5"] == 6);
    CHECK(cfg["plan"]["horizons"] == nlohmann::json::array({5}));

    cli::RunConfig a;
    cli::apply_preset(a, "period-1993", "NG");
    CHECK(a.lag_for(22) == 3);
    CHECK(a.lag_for(1) == 5);
    cli::apply_config_json(a, R"({"forecast": {"lags_by_horizon": {"22": 4}}, "plan": {"step": 3}})");
    CHECK(a.lag_for(22) == 4);
    CHECK(a.plan.step == 3);
    cli::RunConfig b;
    cli::apply_config_json(b, cli::config_json(a));
    CHECK(cli::config_json(b) == cli::config_json(a));
    CHECK_THROWS(cli::apply_preset(a, "period-2010", "XX"));
    CHECK(cli::preset_names().size() == 2);
}

TEST_CASE("errors are machine readable with distinct exit codes") {
    const auto bad = invoke({"evaluate", "--config", (kData / "bad_key.json").string()});
    CHECK(bad.code == 2);
    const auto record = nlohmann::json::parse(bad.err);
    CHECK(record["error"]["type"] == "config");
    CHECK(record["error"]["message"].get<std::string>().find("plan.windw") != std::string::npos);

    CHECK(invoke({"nonsense"}).code == 2);
    const auto missing = invoke({"evaluate", "--input", (kData / "does_not_exist.csv").string(), "--output",
                                 scratch("missing").string()});
    CHECK(missing.code == 3);
    CHECK(nlohmann::json::parse(missing.err)["error"]["type"] == "data");
}

TEST_CASE("explosive scenarios warn without failing") {
    const auto dir = scratch("explosive");
    const auto dump = invoke({"simulate", "--config", (kData / "explosive.json").string(), "--output", dir.string()});
    REQUIRE_MESSAGE(dump.code == 0, dump.err);
    const auto warning = nlohmann::json::parse(dump.err);
    CHECK(warning["warning"]["type"] == "explosive");
    CHECK(fs::exists(dir / "truth.csv"));
}
