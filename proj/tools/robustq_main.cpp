// robustq command-line driver: train, solve, eval, backtest, ingest.
//
// Exit codes: 0 on success, 2 on user/config errors, 3 on I/O failures.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "robustq/environments.hpp"
#include "robustq/evaluation.hpp"
#include "robustq/io.hpp"
#include "robustq/operators.hpp"
#include "robustq/qlearn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUserError = 2;
constexpr int kExitIoError = 3;

fs::path resolve_out_dir(const std::string& flag_value, const std::string& config_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("ROBUSTQ_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return config_value.empty() ? "." : config_value;
}

robustq::io::QTableFile make_qtable_file(const robustq::DiscountedProblem& problem,
                                         const robustq::QTable& q) {
    return robustq::io::QTableFile{robustq::io::kSchemaVersion, problem.states().labels(),
                                   problem.actions().labels(), q};
}

robustq::io::PolicyFile make_policy_file(const robustq::DiscountedProblem& problem,
                                         const std::vector<std::size_t>& policy) {
    return robustq::io::PolicyFile{problem.states().labels(), problem.actions().labels(),
                                   policy};
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw robustq::io::IoError("cannot open for writing: " + path.string());
    out << doc.dump(2) << '\n';
}

int run_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              std::optional<std::uint64_t> iterations, bool with_oracle,
              const std::string& out_dir_flag) {
    robustq::io::RunConfig config = robustq::io::read_run_config(config_path);
    if (seed) config.train.seed = *seed;
    if (iterations) config.train.iterations = *iterations;
    const fs::path out_dir = resolve_out_dir(out_dir_flag, config.output_dir);
    fs::create_directories(out_dir);

    const robustq::DiscountedProblem problem = robustq::io::build_problem(config);
    config.train.validate(problem);

    std::optional<robustq::QTable> oracle;
    if (with_oracle) {
        auto vi = robustq::robust_value_iteration(problem, config.solve_tol,
                                                  config.solve_max_iter);
        if (!vi.converged)
            std::cerr << "warning: oracle value iteration stopped at residual "
                      << vi.residual << " without converging\n";
        oracle = std::move(vi.q);
    }

    const robustq::TrainResult result =
        robustq::train(config.train, problem, oracle ? &*oracle : nullptr);

    robustq::io::write_qtable(out_dir / "q_final.csv",
                              make_qtable_file(problem, result.final_q));
    robustq::io::write_policy(out_dir / "policy.csv",
                              make_policy_file(problem, robustq::greedy_policy(result.final_q)));
    robustq::io::write_checkpoint_log(out_dir / "checkpoints.csv", result,
                                      problem.actions());

    const auto diagnostics = robustq::robbins_monro_diagnostics(
        config.train.schedule, result.visit_trace, problem.num_states(),
        problem.num_actions());
    write_json(out_dir / "run_meta.json",
               json{{"iterations", config.train.iterations},
                    {"seed", config.train.seed},
                    {"policy_stable", result.policy_stable},
                    {"wall_seconds", result.wall_seconds},
                    {"starved_pairs", diagnostics.flagged_count},
                    {"oracle", with_oracle}});
    std::cout << "trained " << config.train.iterations << " iterations; policy "
              << (result.policy_stable ? "stable" : "not stable") << "; outputs in "
              << out_dir.string() << '\n';
    return kExitOk;
}

int run_solve(const std::string& config_path, std::optional<double> tol,
              const std::string& out_dir_flag) {
    robustq::io::RunConfig config = robustq::io::read_run_config(config_path);
    if (tol) config.solve_tol = *tol;
    if (!(config.solve_tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const fs::path out_dir = resolve_out_dir(out_dir_flag, config.output_dir);
    fs::create_directories(out_dir);

    const robustq::DiscountedProblem problem = robustq::io::build_problem(config);
    const auto result =
        robustq::robust_value_iteration(problem, config.solve_tol, config.solve_max_iter);
    if (!result.converged)
        std::cerr << "warning: stopped at residual " << result.residual
                  << " after " << result.iterations << " iterations\n";

    robustq::io::write_qtable(out_dir / "qstar.csv", make_qtable_file(problem, result.q));
    robustq::io::write_policy(out_dir / "policy.csv",
                              make_policy_file(problem, robustq::greedy_policy(result.q)));
    write_json(out_dir / "solve_meta.json",
               json{{"iterations", result.iterations},
                    {"residual", result.residual},
                    {"converged", result.converged},
                    {"tol", config.solve_tol}});
    std::cout << "solved in " << result.iterations << " iterations, residual "
              << result.residual << "; outputs in " << out_dir.string() << '\n';
    return kExitOk;
}

robustq::PolicyTable load_bet_policy(const fs::path& path) {
    const auto file = robustq::io::read_policy(path);
    robustq::PolicyTable policy;
    policy.actions = file.policy;
    return policy;
}

int run_eval(const std::vector<std::string>& policy_paths, std::vector<double> p_true,
             std::uint64_t rounds, std::uint64_t seed, bool exact,
             const std::string& out_path) {
    if (p_true.empty()) p_true = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    for (double p : p_true) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("--p-true must lie in [0,1]");
    }
    std::vector<std::string> labels;
    std::vector<robustq::PolicyTable> policies;
    for (const auto& path : policy_paths) {
        if (!fs::exists(path))
            throw std::invalid_argument("policy file does not exist: " + path);
        labels.push_back(fs::path(path).stem().string());
        policies.push_back(load_bet_policy(path));
    }

    if (exact) {
        std::vector<std::vector<double>> values;
        for (const auto& policy : policies) {
            std::vector<double> row;
            for (double p : p_true)
                row.push_back(robustq::expected_profit_coin(policy, p));
            values.push_back(std::move(row));
        }
        robustq::io::write_exact_report_csv(out_path, labels, p_true, values);
    } else {
        std::vector<std::vector<robustq::ProfitReport>> reports;
        for (const auto& policy : policies) {
            std::vector<robustq::ProfitReport> row;
            for (double p : p_true)
                row.push_back(robustq::rollout_coin(policy, p, rounds, seed));
            reports.push_back(std::move(row));
        }
        robustq::io::write_profit_report_csv(out_path, labels, p_true, reports);
    }
    std::cout << "wrote " << labels.size() << " x " << p_true.size()
              << " evaluation cells to " << out_path << '\n';
    return kExitOk;
}

int run_backtest(const std::vector<std::string>& policy_paths, const std::string& series_path,
                 std::size_t h, bool trend, bool hold, const std::string& out_path) {
    const robustq::ReturnSeries series = robustq::io::read_return_series(series_path);
    if (series.signs.size() <= h)
        throw std::invalid_argument("series shorter than window length h + 1");

    std::vector<std::string> labels;
    std::vector<robustq::BacktestReport> reports;
    for (const auto& path : policy_paths) {
        if (!fs::exists(path))
            throw std::invalid_argument("policy file does not exist: " + path);
        labels.push_back(fs::path(path).stem().string());
        reports.push_back(robustq::backtest(load_bet_policy(path), series, h));
    }
    if (trend) {
        labels.push_back("trend-following");
        reports.push_back(robustq::backtest(robustq::trend_following_policy(h), series, h));
    }
    if (hold) {
        labels.push_back("buy-and-hold");
        reports.push_back(
            robustq::backtest(robustq::buy_and_hold_policy(std::size_t{1} << h), series, h));
    }
    if (labels.empty())
        throw std::invalid_argument("nothing to backtest: give --policy, --trend-following "
                                    "or --buy-and-hold");
    robustq::io::write_backtest_report_csv(out_path, labels, reports);
    std::cout << "wrote " << labels.size() << " backtest rows to " << out_path << '\n';
    return kExitOk;
}

int run_ingest(const std::string& prices_path, const std::string& out_path,
               const std::string& instrument, const std::string& date_range) {
    const auto rows = robustq::io::read_prices_csv(prices_path);
    std::vector<double> prices;
    prices.reserve(rows.size());
    for (const auto& row : rows) prices.push_back(row.close);

    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].close == rows[i - 1].close)
            std::cerr << "warning: zero return at row " << (i + 1)
                      << " mapped to +1\n";
    }

    robustq::ReturnSeries series = robustq::signs_from_prices(prices);
    series.instrument = instrument;
    series.date_range = date_range.empty()
                            ? rows.front().date + ".." + rows.back().date
                            : date_range;
    robustq::io::write_return_series(out_path, series);
    std::cout << "wrote " << series.signs.size() << " signs to " << out_path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributionally robust Q-learning for finite ambiguity sets"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Run the robust Q-learning loop");
    std::string train_config, train_out;
    std::optional<std::uint64_t> train_seed, train_iters;
    bool train_oracle = false;
    train->add_option("config", train_config, "JSON run configuration")->required();
    train->add_option("--seed", train_seed, "Override the config seed");
    train->add_option("--iterations", train_iters, "Override the iteration count");
    train->add_flag("--oracle", train_oracle,
                    "Solve for Q* first and log the sup-norm gap per checkpoint");
    train->add_option("--out-dir", train_out, "Output directory");

    // solve
    auto* solve = app.add_subcommand("solve", "Exact robust value iteration for Q*");
    std::string solve_config, solve_out;
    std::optional<double> solve_tol;
    solve->add_option("config", solve_config, "JSON run configuration")->required();
    solve->add_option("--tol", solve_tol, "Sup-norm residual tolerance");
    solve->add_option("--out-dir", solve_out, "Output directory");

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate coin-toss policies");
    std::vector<std::string> eval_policies;
    std::vector<double> eval_ptrue;
    std::uint64_t eval_rounds = 100000, eval_seed = 0;
    bool eval_exact = false;
    std::string eval_out = "eval_report.csv";
    eval->add_option("--policy", eval_policies, "Policy file (repeatable)")->required();
    eval->add_option("--p-true", eval_ptrue,
                     "True binomial parameter (repeatable; default 0.1..0.9)");
    eval->add_option("--rounds", eval_rounds, "Simulated rounds per cell");
    eval->add_option("--seed", eval_seed, "Simulation seed");
    eval->add_flag("--exact", eval_exact, "Exact expectation instead of simulation");
    eval->add_option("--out", eval_out, "Report CSV path");

    // backtest
    auto* backtest = app.add_subcommand("backtest", "Replay policies over a sign series");
    std::vector<std::string> bt_policies;
    std::string bt_series, bt_out = "backtest_report.csv";
    std::size_t bt_h = 5;
    bool bt_trend = false, bt_hold = false;
    backtest->set_help_flag("--help", "Print help");
    backtest->add_option("--policy", bt_policies, "Policy file (repeatable)");
    backtest->add_option("--series", bt_series, "Sign-series file")->required();
    backtest->add_option("--h", bt_h, "Window length");
    backtest->add_flag("--trend-following", bt_trend, "Add the trend-following comparator");
    backtest->add_flag("--buy-and-hold", bt_hold, "Add the buy-and-hold comparator");
    backtest->add_option("--out", bt_out, "Report CSV path");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Convert a prices CSV to a sign series");
    std::string in_prices, in_out = "series.csv", in_instrument, in_dates;
    ingest->add_option("prices", in_prices, "CSV with (date, adjusted close)")->required();
    ingest->add_option("--out", in_out, "Sign-series output path");
    ingest->add_option("--instrument", in_instrument, "Instrument label");
    ingest->add_option("--date-range", in_dates, "Date-range label");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUserError;
    }

    try {
        if (*train)
            return run_train(train_config, train_seed, train_iters, train_oracle, train_out);
        if (*solve) return run_solve(solve_config, solve_tol, solve_out);
        if (*eval)
            return run_eval(eval_policies, eval_ptrue, eval_rounds, eval_seed, eval_exact,
                            eval_out);
        if (*backtest)
            return run_backtest(bt_policies, bt_series, bt_h, bt_trend, bt_hold, bt_out);
        if (*ingest) return run_ingest(in_prices, in_out, in_instrument, in_dates);
    } catch (const robustq::io::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUserError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUserError;
    }
    return kExitUserError;
}
