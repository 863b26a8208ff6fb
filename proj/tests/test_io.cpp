#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "robustq/io.hpp"
#include "support/test_helpers.hpp"

using namespace robustq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("robustq_test_" + std::to_string(std::random_device{}()));
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

}  // namespace

TEST_CASE("qtable files round-trip value-identically") {
    TempDir dir;
    std::mt19937_64 rng(5);
    io::QTableFile file;
    file.states = {{0}, {1}, {2}};
    file.actions = {{-1}, {0}, {1}};
    file.q = testing::random_qtable(rng, 3, 3, -1e6, 1e6);

    const auto path = dir.path / "q.csv";
    io::write_qtable(path, file);
    const auto back = io::read_qtable(path);
    CHECK(back.schema_version == io::kSchemaVersion);
    CHECK(back.states == file.states);
    CHECK(back.actions == file.actions);
    CHECK(back.q == file.q);
}

TEST_CASE("qtable read rejects an unknown schema version") {
    TempDir dir;
    io::QTableFile file;
    file.states = {{0}};
    file.actions = {{0}};
    file.q = QTable(1, 1, 2.0);
    const auto path = dir.path / "q.csv";
    io::write_qtable(path, file);
    write_text(dir.path / "q.csv.meta.json",
               R"({"schema_version": 99, "states": [[0]], "actions": [[0]]})");
    CHECK_THROWS_AS(io::read_qtable(path), std::invalid_argument);
}

TEST_CASE("missing files raise IoError") {
    CHECK_THROWS_AS(io::read_qtable("/nonexistent/q.csv"), io::IoError);
    CHECK_THROWS_AS(io::read_return_series("/nonexistent/s.csv"), io::IoError);
}

TEST_CASE("policy files round-trip") {
    TempDir dir;
    io::PolicyFile file;
    file.states = {{0}, {1}, {2}};
    file.actions = {{-1}, {0}, {1}};
    file.policy = {2, 1, 0};
    const auto path = dir.path / "policy.csv";
    io::write_policy(path, file);
    const auto back = io::read_policy(path);
    CHECK(back.policy == file.policy);
    CHECK(back.actions == file.actions);
}

TEST_CASE("return series round-trip keeps metadata") {
    TempDir dir;
    ReturnSeries series{{1, -1, 1, 1}, "TEST", "2020..2021"};
    const auto path = dir.path / "series.csv";
    io::write_return_series(path, series);
    const auto back = io::read_return_series(path);
    CHECK(back.signs == series.signs);
    CHECK(back.instrument == "TEST");
    CHECK(back.date_range == "2020..2021");
}

TEST_CASE("prices CSV parsing and row diagnostics") {
    TempDir dir;
    const auto path = dir.path / "prices.csv";
    write_text(path, "date,close\n2020-01-01,100\n2020-01-02,101\n");
    const auto rows = io::read_prices_csv(path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].close == 100.0);

    write_text(path, "date,close\n2020-01-01,100\n2020-01-02,oops\n");
    CHECK_THROWS_WITH_AS(io::read_prices_csv(path),
                         doctest::Contains("row 3"), std::invalid_argument);
}

TEST_CASE("custom kernel CSV with omitted zeros") {
    TempDir dir;
    const auto path = dir.path / "kernels.csv";
    write_text(path,
               "x,a,k,xp,p\n"
               "0,0,0,1,1.0\n"
               "1,0,0,0,0.25\n"
               "1,0,0,1,0.75\n");
    const auto amb = io::read_custom_kernels(path, 2, 1, 1);
    CHECK(amb.kernel(0, 0, 0)[1] == 1.0);
    CHECK(amb.kernel(1, 0, 0)[0] == 0.25);

    // non-normalized rows are rejected at assembly
    write_text(path, "x,a,k,xp,p\n0,0,0,1,0.9\n1,0,0,0,1.0\n");
    CHECK_THROWS_AS(io::read_custom_kernels(path, 2, 1, 1), std::invalid_argument);
}

TEST_CASE("run config validation happens before any computation") {
    TempDir dir;
    const auto path = dir.path / "config.json";

    write_text(path, R"({"problem": {"type": "coin", "params": [0.5], "alpha": 1.5}})");
    CHECK_THROWS_WITH_AS(io::read_run_config(path), doctest::Contains("alpha"),
                         std::invalid_argument);

    write_text(path, R"({"problem": {"type": "coin", "params": [0.5]},
                         "training": {"epsilon": 1.5}})");
    CHECK_THROWS_WITH_AS(io::read_run_config(path), doctest::Contains("epsilon"),
                         std::invalid_argument);

    write_text(path, R"({"problem": {"type": "coin", "params": []}})");
    CHECK_THROWS_AS(io::read_run_config(path), std::invalid_argument);

    write_text(path, R"({"problem": {"type": "custom", "kernels": "missing.csv",
                         "num_states": 2, "num_actions": 1, "num_kernels": 0}})");
    CHECK_THROWS_AS(io::read_run_config(path), std::invalid_argument);

    write_text(path, R"({"problem": {"type": "coin", "params": [1.2]}})");
    CHECK_THROWS_AS(io::read_run_config(path), std::invalid_argument);

    write_text(path, "{not json");
    CHECK_THROWS_AS(io::read_run_config(path), std::invalid_argument);
}

TEST_CASE("run config builds the problem it describes") {
    TempDir dir;
    const auto path = dir.path / "config.json";
    write_text(path, R"({"problem": {"type": "coin-wasserstein", "center": 0.5,
                         "radius": 1.0, "grid_step": 0.05, "alpha": 0.95},
                         "training": {"iterations": 10, "seed": 1}})");
    const auto config = io::read_run_config(path);
    const auto problem = io::build_problem(config);
    CHECK(problem.num_kernels() == 5);
    CHECK(problem.num_states() == 11);
}
