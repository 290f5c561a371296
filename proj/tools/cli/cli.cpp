#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "ucpd/error.hpp"

namespace ucpd::cli {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

}  // namespace

std::vector<double> read_series(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        const bool first_content = !seen_content;
        seen_content = true;

        std::string_view cell = body;
        const auto comma = body.find(',');
        if (comma != std::string_view::npos) {
            if (body.find(',', comma + 1) != std::string_view::npos) {
                throw InputError("line " + std::to_string(line_no) +
                                 ": expected one value or two columns (index,value)");
            }
            cell = body.substr(comma + 1);
        }
        const std::optional<double> v = parse_number(cell);
        if (!v) {
            if (first_content) continue;  // header
            throw InputError("line " + std::to_string(line_no) + ": " + quoted(trim(cell)) +
                             " is not a number");
        }
        if (!std::isfinite(*v)) {
            throw InputError("line " + std::to_string(line_no) + ": value is not finite");
        }
        values.push_back(*v);
    }
    return values;
}

std::vector<double> read_series_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    return read_series(in);
}

namespace {

TestConfig test_config_from_request(const DetectRequest& r) {
    TestConfig c;
    c.kernel = Kernel::from_string(r.kernel);
    c.gamma = r.gamma;
    c.alpha = r.alpha;
    if (r.sigma == "estimate") {
        EstimateSigma est;
        est.bandwidth = r.bandwidth;
        if (r.window == "bartlett") {
            est.window = LrvWindow::bartlett;
        } else if (r.window == "truncated") {
            est.window = LrvWindow::truncated;
        } else {
            throw ConfigError("--window must be bartlett or truncated");
        }
        c.sigma = est;
    } else {
        const std::optional<double> s = parse_number(r.sigma);
        if (!s || !(*s > 0.0) || !std::isfinite(*s)) {
            throw ConfigError("--sigma must be a positive number or 'estimate'");
        }
        c.sigma = KnownSigma{*s};
    }
    validate(c);
    return c;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write '" + path + "'");
    f << content;
    if (!f) throw InputError("failed writing '" + path + "'");
}

// Maps library failures onto the exit-code contract.
template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SizeError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace

int cmd_detect(const DetectRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const TestConfig config = test_config_from_request(request);
        if (request.format != "json" && request.format != "text") {
            throw ConfigError("--format must be json or text");
        }
        const std::vector<double> series = read_series_file(request.input);
        const TestOutcome outcome = run_test(series, config);

        const std::string rendered =
            request.format == "json" ? to_json(outcome).dump(2) + "\n" : to_text(outcome);
        if (request.output.empty()) {
            out << rendered;
        } else {
            write_text_file(request.output, rendered);
        }
        if (request.strict && outcome.sigma_floored) {
            err << "error: long-run variance estimate was floored (--strict)\n";
            return kExitNumerical;
        }
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------
// Experiment configs

namespace {

const std::set<std::string> kTopLevelKeys = {
    "description", "n",      "runs",       "seed",      "generator", "test",
    "tests",       "alpha",  "alphas",     "taus",      "change",    "statistic",
    "statistics",  "n_grid",
};

std::vector<std::size_t> read_sizes(const json& j, const std::string& path) {
    std::vector<std::size_t> out;
    auto one = [&](const json& v, const std::string& p) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ConfigError(p + ": expected a non-negative integer");
        }
        out.push_back(v.get<std::size_t>());
    };
    if (j.is_array()) {
        if (j.empty()) throw ConfigError(path + ": must not be empty");
        for (std::size_t i = 0; i < j.size(); ++i) one(j[i], path + "[" + std::to_string(i) + "]");
    } else {
        one(j, path);
    }
    return out;
}

std::vector<double> read_numbers(const json& j, const std::string& path) {
    std::vector<double> out;
    const json arr = j.is_array() ? j : json::array({j});
    if (arr.empty()) throw ConfigError(path + ": must not be empty");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) {
            throw ConfigError(path + "[" + std::to_string(i) + "]: expected a number");
        }
        out.push_back(arr[i].get<double>());
    }
    return out;
}

// "C", "WC", "W", "WW" with the known long-run variances of i.i.d. data:
// sigma_C = 1, sigma_W = 1/sqrt(12).
json expand_label(const std::string& label, const std::string& path) {
    const double sigma_w = 1.0 / std::sqrt(12.0);
    if (label == "C") return {{"kernel", "cusum"}, {"gamma", 0.0}, {"sigma", 1.0}};
    if (label == "WC") return {{"kernel", "cusum"}, {"gamma", 0.5}, {"sigma", 1.0}};
    if (label == "W") return {{"kernel", "wilcoxon"}, {"gamma", 0.0}, {"sigma", sigma_w}};
    if (label == "WW") return {{"kernel", "wilcoxon"}, {"gamma", 0.5}, {"sigma", sigma_w}};
    throw ConfigError(path + ": unknown statistic label '" + label +
                      "' (expected C, WC, W or WW, or a test object)");
}

std::vector<json> read_tests(const json& config) {
    std::vector<json> tests;
    if (config.contains("tests")) {
        const json& arr = config["tests"];
        if (!arr.is_array() || arr.empty()) throw ConfigError("tests: expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "tests[" + std::to_string(i) + "]";
            if (arr[i].is_string()) {
                tests.push_back(expand_label(arr[i].get<std::string>(), path));
            } else if (arr[i].is_object()) {
                tests.push_back(arr[i]);
            } else {
                throw ConfigError(path + ": expected a label string or a test object");
            }
        }
    } else if (config.contains("test")) {
        if (!config["test"].is_object()) throw ConfigError("test: expected an object");
        tests.push_back(config["test"]);
    } else {
        tests.push_back(json::object());
    }
    if (config.contains("alpha")) {
        for (json& t : tests) {
            if (!t.contains("alpha")) t["alpha"] = config["alpha"];
        }
    }
    return tests;
}

McConfig build_config(const json& config, std::size_t n, const json& test, std::size_t index) {
    json j = {{"n", n}, {"runs", config.at("runs")}, {"test", test}};
    if (config.contains("seed")) j["seed"] = config["seed"];
    if (config.contains("generator")) j["generator"] = config["generator"];
    if (config.contains("change")) j["change"] = config["change"];
    try {
        return mc_config_from_json(j);
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        // Point test errors at the entry they came from.
        if (msg.starts_with("test.") && config.contains("tests")) {
            msg = "tests[" + std::to_string(index) + "]" + msg.substr(4);
        }
        throw ConfigError(msg);
    }
}

void append(McReport& into, McReport&& part) {
    for (McCell& c : part.cells) into.cells.push_back(std::move(c));
    into.elapsed_seconds += part.elapsed_seconds;
}

}  // namespace

McReport run_experiment(const std::string& experiment, const json& config,
                        const McOptions& options) {
    if (!config.is_object()) throw ConfigError("config: expected a JSON object");
    for (const auto& [key, value] : config.items()) {
        if (!kTopLevelKeys.contains(key)) throw ConfigError(key + ": unknown field");
    }
    if (!config.contains("runs")) throw ConfigError("runs: missing required field");

    const std::vector<json> tests = read_tests(config);
    McReport report;
    report.experiment = experiment;
    report.config = config;

    if (experiment == "degenerate") {
        if (!config.contains("n_grid")) throw ConfigError("n_grid: missing required field");
        const std::vector<std::size_t> grid = read_sizes(config["n_grid"], "n_grid");
        for (std::size_t t = 0; t < tests.size(); ++t) {
            const McConfig mc = build_config(config, grid.front(), tests[t], t);
            append(report, degenerate_part_diagnostic(mc, grid, options));
        }
        return report;
    }

    if (!config.contains("n")) throw ConfigError("n: missing required field");
    const std::vector<std::size_t> ns = read_sizes(config["n"], "n");

    if (experiment == "critical-values") {
        for (std::size_t t = 0; t < tests.size(); ++t) {
            for (std::size_t n : ns) {
                const McConfig mc = build_config(config, n, tests[t], t);
                const std::vector<double> alphas =
                    config.contains("alphas") ? read_numbers(config["alphas"], "alphas")
                                              : std::vector<double>{mc.test.alpha};
                append(report, mc_critical_values(mc, alphas, options));
            }
        }
    } else if (experiment == "size") {
        for (std::size_t t = 0; t < tests.size(); ++t) {
            for (std::size_t n : ns) {
                McConfig mc = build_config(config, n, tests[t], t);
                const std::vector<double> alphas =
                    config.contains("alphas") ? read_numbers(config["alphas"], "alphas")
                                              : std::vector<double>{mc.test.alpha};
                for (double a : alphas) {
                    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas: must lie in (0, 1)");
                    mc.test.alpha = a;
                    append(report, mc_size(mc, options));
                }
            }
        }
    } else if (experiment == "power") {
        if (!config.contains("taus")) throw ConfigError("taus: missing required field");
        if (!config.contains("change")) throw ConfigError("change: missing required field");
        const std::vector<double> taus = read_numbers(config["taus"], "taus");
        for (std::size_t t = 0; t < tests.size(); ++t) {
            for (std::size_t n : ns) {
                append(report, mc_power_curve(build_config(config, n, tests[t], t), taus, options));
            }
        }
    } else if (experiment == "limits") {
        std::vector<std::string> names;
        auto name_of = [](const json& s, const std::string& path) {
            if (!s.is_string()) throw ConfigError(path + ": expected a string");
            return s.get<std::string>();
        };
        if (config.contains("statistics")) {
            const json& arr = config["statistics"];
            if (!arr.is_array()) throw ConfigError("statistics: expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                names.push_back(name_of(arr[i], "statistics[" + std::to_string(i) + "]"));
            }
        } else if (config.contains("statistic")) {
            names.push_back(name_of(config["statistic"], "statistic"));
        } else {
            names = {"tied_down", "darling_erdos"};
        }
        json limit_test = config.contains("test") ? config["test"] : json{{"sigma", 1.0}};
        for (const std::string& name : names) {
            LimitStatistic which;
            if (name == "tied_down") {
                which = LimitStatistic::tied_down;
            } else if (name == "darling_erdos") {
                which = LimitStatistic::darling_erdos;
            } else {
                throw ConfigError("statistic: expected tied_down or darling_erdos, got '" + name + "'");
            }
            for (std::size_t n : ns) {
                append(report, mc_limit_diagnostic(build_config(config, n, limit_test, 0), which,
                                                   options));
            }
        }
    } else {
        throw ConfigError("unknown experiment '" + experiment + "'");
    }
    return report;
}

int cmd_simulate(const SimulateRequest& request, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::ifstream in(request.config_path);
        if (!in) throw InputError("cannot open config file '" + request.config_path + "'");
        json config;
        try {
            config = json::parse(in, nullptr, true, /*ignore_comments=*/true);
        } catch (const json::parse_error& e) {
            throw InputError("config file '" + request.config_path + "': " + e.what());
        }
        if (!config.is_object()) throw ConfigError("config: expected a JSON object");
        if (request.seed) config["seed"] = *request.seed;
        if (request.runs) config["runs"] = *request.runs;
        if (!config.contains("seed")) config["seed"] = McConfig{}.seed;

        const McReport report = run_experiment(request.experiment, config, McOptions{request.threads});

        std::ostringstream csv;
        write_csv(csv, report);
        if (request.output_prefix.empty()) {
            out << to_json(report).dump(2) << '\n';
        } else {
            write_text_file(request.output_prefix + ".json", to_json(report).dump(2) + "\n");
            write_text_file(request.output_prefix + ".csv", csv.str());
            out << "experiment " << report.experiment << "  seed " << config["seed"].dump()
                << "  runs " << config["runs"].dump() << '\n'
                << "config     " << config.dump() << '\n'
                << "rng        " << report.rng << '\n'
                << csv.str()
                << "wrote " << request.output_prefix << ".json and " << request.output_prefix
                << ".csv\n";
        }
        return kExitOk;
    });
}

// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Change-point tests based on weighted two-sample U-statistics", "ucpd"};
    app.require_subcommand(1);

    DetectRequest detect;
    auto* det = app.add_subcommand("detect", "Test a series for a single change in location");
    det->add_option("input", detect.input, "CSV file: one value per line or index,value")
        ->required();
    det->add_option("--kernel", detect.kernel, "cusum | wilcoxon | sign | huber:<c>")
        ->capture_default_str();
    det->add_option("--gamma", detect.gamma, "Weight exponent in [0, 0.5]")->capture_default_str();
    det->add_option("--alpha", detect.alpha, "Test level")->capture_default_str();
    det->add_option("--sigma", detect.sigma, "Known long-run sd of h1, or 'estimate'")
        ->capture_default_str();
    det->add_option("--bandwidth", detect.bandwidth, "HAC lag truncation (default floor(n^(1/3)))");
    det->add_option("--window", detect.window, "bartlett | truncated")->capture_default_str();
    det->add_option("--format", detect.format, "json | text")->capture_default_str();
    det->add_option("-o,--output", detect.output, "Write the report here instead of stdout");
    det->add_flag("--strict", detect.strict, "Exit 3 if the variance estimate had to be floored");

    SimulateRequest sim;
    auto* simc = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a config file");
    simc->add_option("experiment", sim.experiment,
                     "critical-values | size | power | limits | degenerate")
        ->required()
        ->check(CLI::IsMember({"critical-values", "size", "power", "limits", "degenerate"}));
    simc->add_option("-c,--config", sim.config_path, "JSON experiment config")->required();
    simc->add_option("-o,--output", sim.output_prefix, "Output prefix for .json and .csv");
    simc->add_option("--seed", sim.seed, "Override the config seed");
    simc->add_option("--runs", sim.runs, "Override the number of replicates");
    simc->add_option("--threads", sim.threads, "Worker threads (results do not depend on it)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*det) return cmd_detect(detect, out, err);
    return cmd_simulate(sim, out, err);
}

}  // namespace ucpd::cli
