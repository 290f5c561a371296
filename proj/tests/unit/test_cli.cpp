#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli/cli.hpp"

namespace fs = std::filesystem;
using namespace ucpd::cli;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ucpd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& content) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << content;
        return p.string();
    }

    static std::string slurp(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }

    int invoke(std::vector<std::string> args) {
        args.insert(args.begin(), "ucpd");
        std::vector<const char*> argv;
        for (const std::string& a : args) argv.push_back(a.c_str());
        out_.str("");
        err_.str("");
        return run(static_cast<int>(argv.size()), argv.data(), out_, err_);
    }

    std::string step_file() {
        std::string s;
        for (int i = 0; i < 100; ++i) s += i < 50 ? "-1\n" : "1\n";
        return write("step.csv", s);
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

std::vector<double> parse(const std::string& text) {
    std::istringstream in(text);
    return read_series(in);
}

std::string parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(ReadSeries, Formats) {
    EXPECT_EQ(parse("1\n2.5\n-3e-1\n"), (std::vector<double>{1, 2.5, -0.3}));
    EXPECT_EQ(parse("value\n1\n\n2\n"), (std::vector<double>{1, 2}));
    EXPECT_EQ(parse("t,x\n0,4\n1,5\n"), (std::vector<double>{4, 5}));
    EXPECT_EQ(parse("0,4\r\n1,5\r\n"), (std::vector<double>{4, 5}));
    EXPECT_TRUE(parse("").empty());
}

TEST(ReadSeries, ErrorsNameTheLine) {
    EXPECT_NE(parse_error("1\n2\n3\n4\n5\n6\nabc\n8\n").find("line 7"), std::string::npos);
    EXPECT_NE(parse_error("1\n2\nnan\n").find("line 3"), std::string::npos);
    EXPECT_NE(parse_error("1,2,3\n").find("line 1"), std::string::npos);
}

TEST_F(CliTest, DetectStepSeries) {
    const int code = invoke({"detect", step_file(), "--kernel", "cusum", "--gamma", "0.5", "--sigma", "1",
                             "--alpha", "0.05"});
    ASSERT_EQ(code, kExitOk) << err_.str();
    const json j = json::parse(out_.str());
    EXPECT_EQ(j["reject"], true);
    EXPECT_EQ(j["k_hat"], 50);
    EXPECT_NEAR(j["normalized_stat"].get<double>(), 14.783019606, 1e-8);
    EXPECT_EQ(j["schema_version"], 1);
}

TEST_F(CliTest, DetectTextAndOutputFile) {
    const std::string out = (dir_ / "report.txt").string();
    ASSERT_EQ(invoke({"detect", step_file(), "--sigma", "1", "--format", "text", "-o", out}), kExitOk);
    EXPECT_TRUE(out_.str().empty());
    EXPECT_NE(slurp(out).find("reject          yes"), std::string::npos);
}

TEST_F(CliTest, DetectBadInputIsUsageError) {
    std::string s;
    for (int i = 1; i <= 30; ++i) s += i == 7 ? "abc\n" : "0.5\n";
    EXPECT_EQ(invoke({"detect", write("bad.csv", s)}), kExitUsage);
    EXPECT_NE(err_.str().find("line 7"), std::string::npos);

    EXPECT_EQ(invoke({"detect", write("short.csv", "1\n2\n3\n")}), kExitUsage);
    EXPECT_EQ(invoke({"detect", (dir_ / "missing.csv").string()}), kExitUsage);
    EXPECT_EQ(invoke({"detect", step_file(), "--gamma", "0.8"}), kExitUsage);
    EXPECT_EQ(invoke({"detect", step_file(), "--kernel", "median"}), kExitUsage);
    EXPECT_EQ(invoke({"detect", step_file(), "--sigma", "-2"}), kExitUsage);
    EXPECT_EQ(invoke({"detect", step_file(), "--format", "xml"}), kExitUsage);
    EXPECT_EQ(invoke({"detect"}), kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}), kExitUsage);
}

TEST_F(CliTest, StrictFlooringIsNumericalFailure) {
    std::string s;
    for (int i = 0; i < 60; ++i) s += i % 2 ? "1\n" : "-1\n";
    const std::string path = write("alt.csv", s);
    const std::vector<std::string> base{"detect", path, "--bandwidth", "1", "--window", "truncated"};
    EXPECT_EQ(invoke(base), kExitOk);
    EXPECT_EQ(json::parse(out_.str())["sigma_floored"], true);
    auto strict = base;
    strict.push_back("--strict");
    EXPECT_EQ(invoke(strict), kExitNumerical);
    EXPECT_NE(err_.str().find("floored"), std::string::npos);
}

TEST_F(CliTest, SimulateWritesReproducibleFiles) {
    const std::string cfg = write("cv.json", R"({
        // small Table-1 style run
        "n": [40, 60], "runs": 200, "seed": 7,
        "generator": {"kind": "iid_normal"},
        "tests": ["C", "WC", "W", "WW"],
        "alphas": [0.1, 0.05]
    })");
    const std::string a = (dir_ / "a").string();
    const std::string b = (dir_ / "b").string();
    ASSERT_EQ(invoke({"simulate", "critical-values", "-c", cfg, "-o", a}), kExitOk) << err_.str();
    EXPECT_NE(out_.str().find("seed 7"), std::string::npos);
    ASSERT_EQ(invoke({"simulate", "critical-values", "-c", cfg, "-o", b, "--threads", "3"}), kExitOk);

    const std::string csv = slurp(a + ".csv");
    EXPECT_EQ(csv, slurp(b + ".csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 4 * 2);

    const json report = json::parse(slurp(a + ".json"));
    EXPECT_EQ(report["schema_version"], 1);
    EXPECT_EQ(report["experiment"], "critical-values");
    EXPECT_EQ(report["config"]["seed"], 7);
    EXPECT_TRUE(report["rng"].is_string());

    ASSERT_EQ(invoke({"simulate", "critical-values", "-c", cfg, "-o", b, "--seed", "8"}), kExitOk);
    EXPECT_NE(csv, slurp(b + ".csv"));
}

TEST_F(CliTest, SimulateOtherExperiments) {
    const std::string size = write("size.json", R"({"n": 50, "runs": 50, "tests": ["WC"]})");
    ASSERT_EQ(invoke({"simulate", "size", "-c", size}), kExitOk) << err_.str();
    EXPECT_EQ(json::parse(out_.str())["cells"][0]["quantity"], "size");

    const std::string power = write("power.json", R"({"n": 50, "runs": 50, "tests": ["C"],
        "taus": [0.5], "change": {"delta": 1.0}})");
    ASSERT_EQ(invoke({"simulate", "power", "-c", power}), kExitOk) << err_.str();
    EXPECT_EQ(json::parse(out_.str())["cells"].size(), 2u);

    const std::string limits = write("limits.json", R"({"n": 100, "runs": 50, "statistic": "tied_down"})");
    ASSERT_EQ(invoke({"simulate", "limits", "-c", limits}), kExitOk) << err_.str();
    EXPECT_EQ(json::parse(out_.str())["cells"].size(), 4u);

    const std::string deg = write("deg.json", R"({"n_grid": [50, 100], "runs": 20,
        "test": {"kernel": "wilcoxon"}})");
    ASSERT_EQ(invoke({"simulate", "degenerate", "-c", deg}), kExitOk) << err_.str();
    EXPECT_EQ(json::parse(out_.str())["cells"].size(), 2u);
}

TEST_F(CliTest, SimulateConfigErrors) {
    const std::string phi = write("phi.json", R"({"n": 100, "runs": 10,
        "generator": {"kind": "ar1", "phi": 1.2}})");
    EXPECT_EQ(invoke({"simulate", "size", "-c", phi}), kExitUsage);
    EXPECT_NE(err_.str().find("generator.phi"), std::string::npos);

    const std::string unknown = write("unknown.json", R"({"n": 100, "runs": 10, "rnus": 5})");
    EXPECT_EQ(invoke({"simulate", "size", "-c", unknown}), kExitUsage);
    EXPECT_NE(err_.str().find("rnus: unknown field"), std::string::npos);

    const std::string label = write("label.json", R"({"n": 100, "runs": 10, "tests": ["XX"]})");
    EXPECT_EQ(invoke({"simulate", "size", "-c", label}), kExitUsage);
    EXPECT_NE(err_.str().find("tests[0]"), std::string::npos);

    const std::string stat = write("stat.json", R"({"n": 100, "runs": 10, "statistic": 3})");
    EXPECT_EQ(invoke({"simulate", "limits", "-c", stat}), kExitUsage);

    const std::string broken = write("broken.json", "{\"n\": ");
    EXPECT_EQ(invoke({"simulate", "size", "-c", broken}), kExitUsage);
    EXPECT_EQ(invoke({"simulate", "size", "-c", (dir_ / "nope.json").string()}), kExitUsage);
    EXPECT_EQ(invoke({"simulate", "bogus", "-c", phi}), kExitUsage);
}
