#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ucpd/report.hpp"

namespace ucpd::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Malformed user input; message already carries the location.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads one value per line, or `index,value` pairs. A non-numeric first
/// line is taken as a header; blank lines are ignored. Errors name the
/// 1-based line number.
std::vector<double> read_series(std::istream& in);
std::vector<double> read_series_file(const std::string& path);

struct DetectRequest {
    std::string input;
    std::string kernel = "cusum";
    double gamma = 0.5;
    double alpha = 0.05;
    std::string sigma = "estimate";  // or a positive number
    std::optional<std::size_t> bandwidth;
    std::string window = "bartlett";
    std::string format = "json";  // json | text
    std::string output;           // empty: stdout
    bool strict = false;          // sigma flooring becomes exit 3
};

int cmd_detect(const DetectRequest& request, std::ostream& out, std::ostream& err);

struct SimulateRequest {
    std::string experiment;  // critical-values | size | power | limits | degenerate
    std::string config_path;
    std::string output_prefix;  // writes <prefix>.json and <prefix>.csv
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    unsigned threads = 1;
};

/// Expands an experiment config file (n grid x statistics x ...) into
/// Monte Carlo runs and merges their cells into one report.
McReport run_experiment(const std::string& experiment, const nlohmann::json& config,
                        const McOptions& options);

int cmd_simulate(const SimulateRequest& request, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] included).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucpd::cli
