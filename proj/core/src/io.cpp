#include "robustq/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace robustq::io {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric field '" + s + "' in " + context);
    }
}

long parse_long(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer field '" + s + "' in " + context);
    }
}

std::vector<int> parse_label(const std::string& s, const std::string& context) {
    std::vector<int> label;
    std::string part;
    std::istringstream stream(s);
    while (std::getline(stream, part, ';'))
        label.push_back(static_cast<int>(parse_long(part, context)));
    if (label.empty()) throw std::invalid_argument("empty label in " + context);
    return label;
}

json labels_to_json(const std::vector<std::vector<int>>& labels) {
    json arr = json::array();
    for (const auto& l : labels) arr.push_back(l);
    return arr;
}

std::vector<std::vector<int>> labels_from_json(const json& arr) {
    std::vector<std::vector<int>> labels;
    for (const auto& l : arr) labels.push_back(l.get<std::vector<int>>());
    return labels;
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return path.string() + ".meta.json";
}

void write_sidecar(const std::filesystem::path& path, const json& meta) {
    auto out = open_out(sidecar_path(path));
    out << meta.dump(2) << '\n';
}

json read_sidecar(const std::filesystem::path& path) {
    auto in = open_in(sidecar_path(path));
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("bad metadata sidecar " + sidecar_path(path).string() +
                                    ": " + e.what());
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_qtable(const std::filesystem::path& path, const QTableFile& file) {
    if (file.q.num_states() != file.states.size() ||
        file.q.num_actions() != file.actions.size())
        throw std::invalid_argument("Q table dimensions do not match labels");
    auto out = open_out(path);
    out << "state";
    for (const auto& a : file.actions) out << ",a=" << detail::label_to_string(a);
    out << '\n';
    for (std::size_t x = 0; x < file.states.size(); ++x) {
        out << detail::label_to_string(file.states[x]);
        for (std::size_t a = 0; a < file.actions.size(); ++a)
            out << ',' << format_double(file.q(x, a));
        out << '\n';
    }
    write_sidecar(path, json{{"schema_version", file.schema_version},
                             {"kind", "qtable"},
                             {"states", labels_to_json(file.states)},
                             {"actions", labels_to_json(file.actions)}});
}

QTableFile read_qtable(const std::filesystem::path& path) {
    const json meta = read_sidecar(path);
    QTableFile file;
    file.schema_version = meta.at("schema_version").get<int>();
    if (file.schema_version != kSchemaVersion)
        throw std::invalid_argument("unrecognized Q table schema version " +
                                    std::to_string(file.schema_version));
    file.states = labels_from_json(meta.at("states"));
    file.actions = labels_from_json(meta.at("actions"));

    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty Q table file");
    std::vector<double> values;
    values.reserve(file.states.size() * file.actions.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != file.actions.size() + 1)
            throw std::invalid_argument("Q table row " + std::to_string(row + 1) +
                                        " has wrong field count");
        if (row >= file.states.size())
            throw std::invalid_argument("Q table has more rows than states");
        if (parse_label(fields[0], path.string()) != file.states[row])
            throw std::invalid_argument("Q table row order disagrees with metadata");
        for (std::size_t a = 0; a < file.actions.size(); ++a)
            values.push_back(parse_double(fields[a + 1], path.string()));
        ++row;
    }
    if (row != file.states.size())
        throw std::invalid_argument("Q table has fewer rows than states");
    file.q = QTable(file.states.size(), file.actions.size(), std::move(values));
    return file;
}

void write_policy(const std::filesystem::path& path, const PolicyFile& file) {
    if (file.policy.size() != file.states.size())
        throw std::invalid_argument("policy does not cover every state");
    auto out = open_out(path);
    out << "state,action\n";
    for (std::size_t x = 0; x < file.states.size(); ++x) {
        out << detail::label_to_string(file.states[x]) << ','
            << detail::label_to_string(file.actions.at(file.policy[x])) << '\n';
    }
    write_sidecar(path, json{{"schema_version", kSchemaVersion},
                             {"kind", "policy"},
                             {"states", labels_to_json(file.states)},
                             {"actions", labels_to_json(file.actions)}});
}

PolicyFile read_policy(const std::filesystem::path& path) {
    const json meta = read_sidecar(path);
    PolicyFile file;
    file.states = labels_from_json(meta.at("states"));
    file.actions = labels_from_json(meta.at("actions"));
    std::map<std::vector<int>, std::size_t> action_index;
    for (std::size_t a = 0; a < file.actions.size(); ++a)
        action_index[file.actions[a]] = a;

    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 2)
            throw std::invalid_argument("policy row " + std::to_string(row + 1) +
                                        " has wrong field count");
        const auto action = parse_label(fields[1], path.string());
        const auto it = action_index.find(action);
        if (it == action_index.end())
            throw std::invalid_argument("policy row " + std::to_string(row + 1) +
                                        " names an unknown action");
        file.policy.push_back(it->second);
        ++row;
    }
    if (file.policy.size() != file.states.size())
        throw std::invalid_argument("policy row count disagrees with metadata");
    return file;
}

void write_return_series(const std::filesystem::path& path, const ReturnSeries& series) {
    auto out = open_out(path);
    out << "t,sign,cumulative\n";
    long cumulative = 0;
    for (std::size_t t = 0; t < series.signs.size(); ++t) {
        cumulative += series.signs[t];
        out << t << ',' << series.signs[t] << ',' << cumulative << '\n';
    }
    write_sidecar(path, json{{"schema_version", kSchemaVersion},
                             {"kind", "return_series"},
                             {"instrument", series.instrument},
                             {"date_range", series.date_range},
                             {"length", series.signs.size()}});
}

ReturnSeries read_return_series(const std::filesystem::path& path) {
    const json meta = read_sidecar(path);
    ReturnSeries series;
    series.instrument = meta.value("instrument", "");
    series.date_range = meta.value("date_range", "");

    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 3)
            throw std::invalid_argument("series row " + std::to_string(row + 1) +
                                        " has wrong field count");
        const long sign = parse_long(fields[1], path.string());
        if (sign != -1 && sign != 1)
            throw std::invalid_argument("series row " + std::to_string(row + 1) +
                                        " has sign outside {-1,+1}");
        series.signs.push_back(static_cast<int>(sign));
        ++row;
    }
    if (series.signs.empty()) throw std::invalid_argument("empty return series");
    return series;
}

std::vector<PriceRow> read_prices_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("prices CSV is empty: " + path.string());
    std::vector<PriceRow> rows;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() < 2)
            throw std::invalid_argument("prices CSV row " + std::to_string(row_number) +
                                        ": expected (date, close)");
        const double close =
            parse_double(fields[1], "prices CSV row " + std::to_string(row_number));
        rows.push_back(PriceRow{fields[0], close});
    }
    if (rows.size() < 2)
        throw std::invalid_argument("prices CSV needs at least two data rows");
    return rows;
}

AmbiguitySet read_custom_kernels(const std::filesystem::path& path,
                                 std::size_t num_states, std::size_t num_actions,
                                 std::size_t num_kernels) {
    if (num_kernels == 0) throw std::invalid_argument("kernel count N must be at least 1");
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> probs(num_states * num_actions * num_kernels,
                                           std::vector<double>(num_states, 0.0));
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        const std::string ctx = "kernel CSV row " + std::to_string(row_number);
        if (fields.size() != 5)
            throw std::invalid_argument(ctx + ": expected (x, a, k, xp, probability)");
        const long x = parse_long(fields[0], ctx);
        const long a = parse_long(fields[1], ctx);
        const long k = parse_long(fields[2], ctx);
        const long xp = parse_long(fields[3], ctx);
        const double p = parse_double(fields[4], ctx);
        if (x < 0 || static_cast<std::size_t>(x) >= num_states ||
            a < 0 || static_cast<std::size_t>(a) >= num_actions ||
            k < 0 || static_cast<std::size_t>(k) >= num_kernels ||
            xp < 0 || static_cast<std::size_t>(xp) >= num_states)
            throw std::invalid_argument(ctx + ": index out of range");
        probs[(static_cast<std::size_t>(x) * num_actions + a) * num_kernels + k]
             [static_cast<std::size_t>(xp)] = p;
    }
    std::vector<Categorical> kernels;
    kernels.reserve(probs.size());
    for (auto& p : probs) kernels.push_back(Categorical(std::move(p)));
    return AmbiguitySet(num_states, num_actions, std::move(kernels));
}

RewardTable read_custom_rewards(const std::filesystem::path& path,
                                std::size_t num_states, std::size_t num_actions) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    RewardTable rewards(num_states, num_actions);
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        const std::string ctx = "reward CSV row " + std::to_string(row_number);
        if (fields.size() != 4)
            throw std::invalid_argument(ctx + ": expected (x, a, xp, value)");
        const long x = parse_long(fields[0], ctx);
        const long a = parse_long(fields[1], ctx);
        const long xp = parse_long(fields[2], ctx);
        if (x < 0 || static_cast<std::size_t>(x) >= num_states ||
            a < 0 || static_cast<std::size_t>(a) >= num_actions ||
            xp < 0 || static_cast<std::size_t>(xp) >= num_states)
            throw std::invalid_argument(ctx + ": index out of range");
        rewards.at(x, a, xp) = parse_double(fields[3], ctx);
    }
    return rewards;
}

RunConfig read_run_config(const std::filesystem::path& path) {
    auto in = open_in(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }

    RunConfig config;
    config.base_dir = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
    try {
        const json& problem = doc.at("problem");
        config.problem_type = problem.at("type").get<std::string>();
        config.alpha = problem.value("alpha", 0.95);
        if (config.problem_type == "coin") {
            config.coin_params = problem.at("params").get<std::vector<double>>();
        } else if (config.problem_type == "coin-wasserstein") {
            config.ball_center = problem.value("center", 0.5);
            config.ball_radius = problem.at("radius").get<double>();
            config.ball_grid_step = problem.value("grid_step", 0.05);
        } else if (config.problem_type == "market") {
            config.series_files = problem.at("series").get<std::vector<std::string>>();
            config.h = problem.value("h", std::size_t{5});
            config.gamma_smooth = problem.value("gamma_smooth", 1e-6);
        } else if (config.problem_type == "custom") {
            config.kernel_file = problem.at("kernels").get<std::string>();
            config.reward_file = problem.value("rewards", "");
            config.num_states = problem.at("num_states").get<std::size_t>();
            config.num_actions = problem.at("num_actions").get<std::size_t>();
            config.num_kernels = problem.at("num_kernels").get<std::size_t>();
        } else {
            throw std::invalid_argument("unknown problem type '" + config.problem_type +
                                        "'");
        }

        if (doc.contains("training")) {
            const json& t = doc.at("training");
            config.train.iterations = t.value("iterations", std::uint64_t{1000000});
            config.train.seed = t.value("seed", std::uint64_t{0});
            config.train.initial_state = t.value("initial_state", std::size_t{0});
            config.train.q_init = t.value("q_init", 0.0);
            config.train.stability_window = t.value("stability_window", std::size_t{10});
            config.train.checkpoint_every = t.value("checkpoint_every", std::uint64_t{0});
            config.train.policy.epsilon = t.value("epsilon", 0.1);
            const std::string schedule = t.value("schedule", "global-harmonic");
            if (schedule == "global-harmonic")
                config.train.schedule.kind = LearningRateSchedule::Kind::GlobalHarmonic;
            else if (schedule == "visit-harmonic")
                config.train.schedule.kind = LearningRateSchedule::Kind::VisitHarmonic;
            else
                throw std::invalid_argument("unknown schedule '" + schedule + "'");
            config.train.schedule.offset = t.value("schedule_offset", 1.0);
        }
        if (doc.contains("solve")) {
            const json& s = doc.at("solve");
            config.solve_tol = s.value("tol", 1e-10);
            config.solve_max_iter = s.value("max_iter", std::size_t{100000});
        }
        config.output_dir = doc.value("output_dir", std::string("."));
    } catch (const json::exception& e) {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }

    // Range checks before anything runs.
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::invalid_argument("config: alpha must lie in (0,1)");
    if (!(config.train.policy.epsilon >= 0.0 && config.train.policy.epsilon <= 1.0))
        throw std::invalid_argument("config: epsilon must lie in [0,1]");
    if (!(config.solve_tol > 0.0))
        throw std::invalid_argument("config: tol must be positive");
    for (double p : config.coin_params) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("config: coin parameter outside [0,1]");
    }
    if (config.problem_type == "coin" && config.coin_params.empty())
        throw std::invalid_argument("config: coin problem needs at least one parameter");
    if (config.problem_type == "custom" && config.num_kernels == 0)
        throw std::invalid_argument("config: N must be at least 1");

    auto require_exists = [&](const std::string& rel) {
        const auto full = config.base_dir / rel;
        if (!std::filesystem::exists(full))
            throw std::invalid_argument("config: referenced file does not exist: " +
                                        full.string());
    };
    for (const auto& f : config.series_files) require_exists(f);
    if (!config.kernel_file.empty()) require_exists(config.kernel_file);
    if (!config.reward_file.empty()) require_exists(config.reward_file);

    return config;
}

DiscountedProblem build_problem(const RunConfig& config) {
    if (config.problem_type == "coin")
        return build_coin_problem(config.coin_params, config.alpha);
    if (config.problem_type == "coin-wasserstein")
        return build_wasserstein_proxy(config.ball_center, config.ball_radius,
                                       config.ball_grid_step, config.alpha);
    if (config.problem_type == "market") {
        std::vector<std::vector<std::array<double, 2>>> tables;
        for (const auto& f : config.series_files) {
            const ReturnSeries series = read_return_series(config.base_dir / f);
            tables.push_back(smooth_probabilities(
                empirical_frequencies(series, config.h), config.gamma_smooth));
        }
        return build_market_problem(tables, config.h, config.alpha);
    }
    if (config.problem_type == "custom") {
        AmbiguitySet ambiguity =
            read_custom_kernels(config.base_dir / config.kernel_file, config.num_states,
                                config.num_actions, config.num_kernels);
        RewardTable rewards =
            config.reward_file.empty()
                ? RewardTable(config.num_states, config.num_actions)
                : read_custom_rewards(config.base_dir / config.reward_file,
                                      config.num_states, config.num_actions);
        std::vector<StateLabel> states;
        for (std::size_t i = 0; i < config.num_states; ++i)
            states.push_back({static_cast<int>(i)});
        std::vector<ActionLabel> actions;
        for (std::size_t i = 0; i < config.num_actions; ++i)
            actions.push_back({static_cast<int>(i)});
        return DiscountedProblem(FiniteStateSpace(std::move(states)),
                                 FiniteActionSpace(std::move(actions)), std::move(rewards),
                                 std::move(ambiguity), config.alpha);
    }
    throw std::invalid_argument("unknown problem type '" + config.problem_type + "'");
}

void write_profit_report_csv(const std::filesystem::path& path,
                             const std::vector<std::string>& labels,
                             const std::vector<double>& p_true,
                             const std::vector<std::vector<ProfitReport>>& reports) {
    auto out = open_out(path);
    out << "policy,p_true,rounds,cumulative_profit,per_round_mean,standard_error,seed\n";
    for (std::size_t r = 0; r < labels.size(); ++r) {
        for (std::size_t c = 0; c < p_true.size(); ++c) {
            const ProfitReport& rep = reports[r][c];
            out << labels[r] << ',' << format_double(p_true[c]) << ',' << rep.rounds << ','
                << format_double(rep.cumulative_profit) << ','
                << format_double(rep.per_round_mean) << ','
                << format_double(rep.standard_error) << ',' << rep.seed << '\n';
        }
    }
}

void write_exact_report_csv(const std::filesystem::path& path,
                            const std::vector<std::string>& labels,
                            const std::vector<double>& p_true,
                            const std::vector<std::vector<double>>& values) {
    auto out = open_out(path);
    out << "policy,p_true,expected_profit_per_round\n";
    for (std::size_t r = 0; r < labels.size(); ++r) {
        for (std::size_t c = 0; c < p_true.size(); ++c) {
            out << labels[r] << ',' << format_double(p_true[c]) << ','
                << format_double(values[r][c]) << '\n';
        }
    }
}

void write_backtest_report_csv(const std::filesystem::path& path,
                               const std::vector<std::string>& labels,
                               const std::vector<BacktestReport>& reports) {
    auto out = open_out(path);
    out << "policy,period,trades,mean_reward_per_trade,cumulative_reward\n";
    for (std::size_t r = 0; r < labels.size(); ++r) {
        const BacktestReport& rep = reports[r];
        out << labels[r] << ',' << rep.period_label << ',' << rep.trades << ','
            << format_double(rep.mean_reward_per_trade) << ','
            << format_double(rep.cumulative_reward) << '\n';
    }
}

void write_checkpoint_log(const std::filesystem::path& path, const TrainResult& result,
                          const FiniteActionSpace& actions) {
    auto out = open_out(path);
    out << "t,oracle_gap,greedy_policy\n";
    for (const auto& cp : result.checkpoints) {
        out << cp.t << ',';
        if (std::isnan(cp.oracle_gap))
            out << "";
        else
            out << format_double(cp.oracle_gap);
        out << ',';
        for (std::size_t x = 0; x < cp.greedy.size(); ++x) {
            if (x > 0) out << ' ';
            out << detail::label_to_string(actions.label(cp.greedy[x]));
        }
        out << '\n';
    }
}

}  // namespace robustq::io
