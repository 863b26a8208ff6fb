#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "robustq/environments.hpp"
#include "robustq/evaluation.hpp"
#include "robustq/qlearn.hpp"
#include "robustq/types.hpp"

namespace robustq::io {

/// Filesystem-level failures (exit code 3 in the CLI), as opposed to
/// validation failures which throw std::invalid_argument (exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

/// Q tables persist as a CSV (one row per state, one column per action) plus
/// a `<path>.meta.json` sidecar carrying the schema version and the state and
/// action labels. Doubles round-trip exactly via max_digits10 formatting.
struct QTableFile {
    int schema_version = kSchemaVersion;
    std::vector<StateLabel> states;
    std::vector<ActionLabel> actions;
    QTable q{1, 1};
};

void write_qtable(const std::filesystem::path& path, const QTableFile& file);
QTableFile read_qtable(const std::filesystem::path& path);

struct PolicyFile {
    std::vector<StateLabel> states;
    std::vector<ActionLabel> actions;
    std::vector<std::size_t> policy;
};

void write_policy(const std::filesystem::path& path, const PolicyFile& file);
PolicyFile read_policy(const std::filesystem::path& path);

void write_return_series(const std::filesystem::path& path, const ReturnSeries& series);
ReturnSeries read_return_series(const std::filesystem::path& path);

/// Two-column prices CSV (date, adjusted close) with a header row. Malformed
/// rows raise std::invalid_argument naming the 1-based row number.
struct PriceRow {
    std::string date;
    double close;
};
std::vector<PriceRow> read_prices_csv(const std::filesystem::path& path);

/// Sparse custom kernel CSV with columns (x, a, k, xp, probability); omitted
/// entries are zero. Normalization is validated on assembly.
AmbiguitySet read_custom_kernels(const std::filesystem::path& path,
                                 std::size_t num_states, std::size_t num_actions,
                                 std::size_t num_kernels);

/// Sparse reward CSV with columns (x, a, xp, value); omitted entries are zero.
RewardTable read_custom_rewards(const std::filesystem::path& path,
                                std::size_t num_states, std::size_t num_actions);

struct RunConfig {
    // problem
    std::string problem_type;  // "coin" | "coin-wasserstein" | "market" | "custom"
    double alpha = 0.95;
    std::vector<double> coin_params;
    double ball_center = 0.5;
    double ball_radius = 1.0;
    double ball_grid_step = 0.05;
    std::vector<std::string> series_files;
    std::size_t h = 5;
    double gamma_smooth = 1e-6;
    std::string kernel_file;
    std::string reward_file;
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::size_t num_kernels = 0;

    TrainConfig train;
    double solve_tol = 1e-10;
    std::size_t solve_max_iter = 100000;
    std::string output_dir = ".";

    std::filesystem::path base_dir;  // directory the config file lives in
};

/// Parses and validates a JSON run configuration. Numeric ranges and the
/// existence of referenced files are checked here, before any computation.
RunConfig read_run_config(const std::filesystem::path& path);

/// Materializes the problem a config describes (reads any referenced files).
DiscountedProblem build_problem(const RunConfig& config);

void write_profit_report_csv(const std::filesystem::path& path,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& p_true,
                             const std::vector<std::vector<ProfitReport>>& reports);

void write_exact_report_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& labels,
                            const std::vector<double>& p_true,
                            const std::vector<std::vector<double>>& values);

void write_backtest_report_csv(const std::filesystem::path& path,
                               const std::vector<std::string>& labels,
                               const std::vector<BacktestReport>& reports);

void write_checkpoint_log(const std::filesystem::path& path, const TrainResult& result,
                          const FiniteActionSpace& actions);

/// Formats a double so it round-trips exactly.
std::string format_double(double value);

}  // namespace robustq::io
