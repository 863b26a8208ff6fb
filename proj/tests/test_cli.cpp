#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "robustq/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("ROBUSTQ_CLI");
    REQUIRE_MESSAGE(env != nullptr, "ROBUSTQ_CLI must point at the CLI binary");
    return env;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("robustq_cli_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::vector<int> policy_bets(const fs::path& path) {
    const auto file = robustq::io::read_policy(path);
    std::vector<int> bets;
    for (std::size_t a : file.policy) bets.push_back(file.actions[a][0]);
    return bets;
}

const char* kCoinP2Config =
    R"({"problem": {"type": "coin", "params": [0.5, 0.3], "alpha": 0.95},
        "training": {"iterations": 200000, "seed": 1, "epsilon": 0.1,
                     "schedule": "visit-harmonic"},
        "solve": {"tol": 1e-10}})";

}  // namespace

TEST_CASE("solve reproduces the published P2 action row") {
    TempDir dir;
    write_text(dir.path / "config.json", kCoinP2Config);
    REQUIRE(run_cli("solve " + (dir.path / "config.json").string() + " --out-dir " +
                    (dir.path / "out").string()) == 0);
    CHECK(policy_bets(dir.path / "out" / "policy.csv") ==
          std::vector<int>{1, 1, 1, 0, 0, 0, -1, -1, -1, -1, -1});
    CHECK(fs::exists(dir.path / "out" / "qstar.csv"));
}

TEST_CASE("zero-reward custom problem solves to an all-zero Q table") {
    TempDir dir;
    write_text(dir.path / "kernels.csv", "x,a,k,xp,p\n0,0,0,1,1\n1,0,0,0,1\n");
    write_text(dir.path / "config.json",
               R"({"problem": {"type": "custom", "kernels": "kernels.csv",
                   "num_states": 2, "num_actions": 1, "num_kernels": 1,
                   "alpha": 0.9}})");
    REQUIRE(run_cli("solve " + (dir.path / "config.json").string() + " --out-dir " +
                    (dir.path / "out").string()) == 0);
    const auto q = robustq::io::read_qtable(dir.path / "out" / "qstar.csv");
    for (double v : q.q.values()) CHECK(v == 0.0);
}

TEST_CASE("train with zero iterations writes the initial table") {
    TempDir dir;
    write_text(dir.path / "config.json", kCoinP2Config);
    REQUIRE(run_cli("train " + (dir.path / "config.json").string() +
                    " --iterations 0 --out-dir " + (dir.path / "out").string()) == 0);
    const auto q = robustq::io::read_qtable(dir.path / "out" / "q_final.csv");
    for (double v : q.q.values()) CHECK(v == 0.0);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    TempDir dir;
    write_text(dir.path / "config.json", kCoinP2Config);
    const std::string config = (dir.path / "config.json").string();
    REQUIRE(run_cli("train " + config + " --iterations 20000 --seed 7 --out-dir " +
                    (dir.path / "a").string()) == 0);
    REQUIRE(run_cli("train " + config + " --iterations 20000 --seed 7 --out-dir " +
                    (dir.path / "b").string()) == 0);
    CHECK(read_file(dir.path / "a" / "q_final.csv") ==
          read_file(dir.path / "b" / "q_final.csv"));
    CHECK(read_file(dir.path / "a" / "policy.csv") ==
          read_file(dir.path / "b" / "policy.csv"));
    CHECK(read_file(dir.path / "a" / "q_final.csv").size() > 0);
}

TEST_CASE("invalid configs exit with code 2 and missing files with code 3") {
    TempDir dir;
    write_text(dir.path / "bad.json",
               R"({"problem": {"type": "coin", "params": [0.5], "alpha": 2.0}})");
    CHECK(run_cli("solve " + (dir.path / "bad.json").string()) == 2);
    CHECK(run_cli("solve " + (dir.path / "missing.json").string()) == 3);
    CHECK(run_cli("eval --policy " + (dir.path / "nope.csv").string() + " --exact") == 2);
    CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("exact eval of the never-play policy is zero everywhere") {
    TempDir dir;
    robustq::io::PolicyFile file;
    for (int i = 0; i <= 10; ++i) file.states.push_back({i});
    file.actions = {{-1}, {0}, {1}};
    file.policy.assign(11, 1);  // action 0 = never play
    robustq::io::write_policy(dir.path / "none.csv", file);
    const auto out = (dir.path / "report.csv").string();
    REQUIRE(run_cli("eval --policy " + (dir.path / "none.csv").string() +
                    " --exact --out " + out) == 0);
    std::ifstream report(out);
    std::string line;
    std::getline(report, line);  // header
    int rows = 0;
    while (std::getline(report, line)) {
        CHECK(line.substr(line.rfind(',') + 1) == "0");
        ++rows;
    }
    CHECK(rows == 9);  // default p-true sweep
}

TEST_CASE("ingest, zero-return convention and backtest round-trip") {
    TempDir dir;
    write_text(dir.path / "prices.csv",
               "date,close\n"
               "2020-01-01,100\n"
               "2020-01-02,101\n"
               "2020-01-03,99\n"
               "2020-01-04,99\n"
               "2020-01-05,105\n"
               "2020-01-06,104\n"
               "2020-01-07,110\n");
    const auto series_path = (dir.path / "series.csv").string();
    REQUIRE(run_cli("ingest " + (dir.path / "prices.csv").string() + " --out " +
                    series_path) == 0);
    const auto series = robustq::io::read_return_series(series_path);
    CHECK(series.signs == std::vector<int>{1, -1, 1, 1, -1, 1});  // zero return -> +1

    const auto out = (dir.path / "bt.csv").string();
    REQUIRE(run_cli("backtest --series " + series_path +
                    " --h 2 --trend-following --buy-and-hold --out " + out) == 0);
    std::ifstream report(out);
    std::string header, row;
    std::getline(report, header);
    REQUIRE(std::getline(report, row));
    // trades = rows - 1 - h
    CHECK(row.find(",4,") != std::string::npos);

    CHECK(run_cli("backtest --series " + series_path + " --h 6 --buy-and-hold") == 2);
}

TEST_CASE("malformed price rows exit with code 2") {
    TempDir dir;
    write_text(dir.path / "prices.csv", "date,close\n2020-01-01,100\nbroken\n");
    CHECK(run_cli("ingest " + (dir.path / "prices.csv").string() + " --out " +
                  (dir.path / "s.csv").string()) == 2);
}
