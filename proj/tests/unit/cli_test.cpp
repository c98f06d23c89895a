#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "sigmmd/errors.hpp"
#include "sigmmd/path_io.hpp"

namespace sigmmd::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("sigmmd_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) const {
        const auto p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string read(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    int run(const std::string& args) const {
        const std::string cmd = std::string(SIGMMD_CLI_PATH) + " " + args + " 2>" + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

const char* kSimConfig = R"({
  "data": {"simulate": {"x": {"model": "scaled_bm", "sigma": 0.2, "n_steps": 10},
                        "y": {"model": "scaled_bm", "sigma": 0.3, "n_steps": 10},
                        "n_paths": 8}},
  "seed": 42
})";

TEST_F(Cli, SimulateWritesBatches) {
    const auto cfg = write("sim.json", kSimConfig);
    ASSERT_EQ(run("simulate -c " + cfg.string() + " -o " + (dir_ / "a").string()), 0);
    const auto x = read_paths(dir_ / "a" / "x.json");
    ASSERT_EQ(x.size(), 8u);
    for (const auto& p : x) EXPECT_EQ(p.size(), 11u);
    EXPECT_TRUE(fs::exists(dir_ / "a" / "config.json"));

    ASSERT_EQ(run("simulate -c " + cfg.string() + " -o " + (dir_ / "b").string()), 0);
    EXPECT_EQ(read(dir_ / "a" / "x.json"), read(dir_ / "b" / "x.json"));
    EXPECT_EQ(read(dir_ / "a" / "y.json"), read(dir_ / "b" / "y.json"));
}

TEST_F(Cli, InvalidSigmaIsParameterError) {
    const auto cfg = write("bad.json", R"({"data": {"simulate": {"x": {"model": "scaled_bm", "sigma": -1},
                                                                "y": {"model": "scaled_bm", "sigma": 1}}}})");
    EXPECT_EQ(run("simulate -c " + cfg.string() + " -o " + (dir_ / "o").string()), 2);
}

TEST_F(Cli, UnknownKeyIsConfigError) {
    const auto cfg = write("bad.json", R"({"dat": {}})");
    EXPECT_EQ(run("test -c " + cfg.string()), 2);
    EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(Cli, MissingInputIsDataError) {
    const auto cfg = write("files.json", R"({"data": {"files": {"x": "/nonexistent/x.json", "y": "/nonexistent/y.json"}}})");
    EXPECT_EQ(run("test -c " + cfg.string()), 3);
}

TEST_F(Cli, IdenticalInputsAccept) {
    const auto cfg = write("sim.json", kSimConfig);
    ASSERT_EQ(run("simulate -c " + cfg.string() + " -o " + dir_.string()), 0);
    const auto tcfg = write("t.json", R"({"test": {"B": 200}, "kernel": {"backend": "truncated", "depth": 4}, "seed": 1})");
    const auto x = (dir_ / "x.json").string();
    ASSERT_EQ(run("test -c " + tcfg.string() + " --x " + x + " --y " + x + " -o " + (dir_ / "r.json").string()), 0);
    const auto r = json::parse(read(dir_ / "r.json"));
    EXPECT_FALSE(r["result"]["reject"].get<bool>());
    EXPECT_GT(r["result"]["p_value"].get<double>(), 0.9);
    EXPECT_TRUE(r.contains("config"));
}

TEST_F(Cli, ConstantLevelsReject) {
    PathBatch zeros, ones;
    for (int i = 0; i < 6; ++i) {
        zeros.push_back(Path::from_points({{0.0}, {0.0}}));
        ones.push_back(Path::from_points({{0.0}, {1.0}}));
    }
    write_paths(dir_ / "z.json", zeros);
    write_paths(dir_ / "o.json", ones);
    const auto tcfg = write("t.json", R"({"test": {"B": 200}, "kernel": {"backend": "truncated", "depth": 3}})");
    ASSERT_EQ(run("test -c " + tcfg.string() + " --x " + (dir_ / "z.json").string() + " --y " +
                  (dir_ / "o.json").string() + " -o " + (dir_ / "r.json").string()),
              0);
    EXPECT_TRUE(json::parse(read(dir_ / "r.json"))["result"]["reject"].get<bool>());
}

TEST_F(Cli, PowerSingleGridPoint) {
    const auto cfg = write("p.json", R"({
      "data": {"simulate": {"x": {"model": "scaled_bm", "sigma": 0.2, "n_steps": 8},
                            "y": {"model": "scaled_bm", "sigma": 0.3, "n_steps": 8}}},
      "kernel": {"backend": "truncated", "depth": 4},
      "preprocess": [{"step": "time_augment"}],
      "test": {"B": 50},
      "study": {"scalings": [1], "batch_sizes": [8], "reps": 2, "pool_factor": 2},
      "seed": 3
    })");
    ASSERT_EQ(run("power -c " + cfg.string() + " -f csv -o " + (dir_ / "p.csv").string()), 0);
    std::istringstream csv(read(dir_ / "p.csv"));
    std::string header, row, extra;
    std::getline(csv, header);
    EXPECT_EQ(header, "scaling,batch_size,estimator,type1,type2,std,reps,seed");
    ASSERT_TRUE(std::getline(csv, row));
    EXPECT_FALSE(std::getline(csv, extra) && !extra.empty());
    EXPECT_NE(row.find(",2,3"), std::string::npos);
    EXPECT_TRUE(fs::exists(dir_ / "p.csv.config.json"));
}

std::map<std::pair<std::string, std::pair<int, int>>, double> parse_levels(const std::string& text) {
    std::map<std::pair<std::string, std::pair<int, int>>, double> out;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string h, b, m, v;
        std::getline(ls, h, ',');
        std::getline(ls, b, ',');
        std::getline(ls, m, ',');
        std::getline(ls, v, ',');
        out[{h, {std::stoi(b), std::stoi(m)}}] = std::stod(v);
    }
    return out;
}

TEST_F(Cli, LevelsScaleAsNinePowers) {
    const std::string base = R"({
      "data": {"simulate": {"x": {"model": "scaled_bm", "sigma": 0.2, "n_steps": 8},
                            "y": {"model": "scaled_bm", "sigma": 0.3, "n_steps": 8}}},
      "test": {"B": 5}, "seed": 9, "levels": {"depth": 4, "batch_size": 6, "scaling": )";
    const auto c1 = write("l1.json", base + "1}}");
    const auto c3 = write("l3.json", base + "3}}");
    ASSERT_EQ(run("levels -c " + c1.string() + " -f csv -o " + (dir_ / "l1.csv").string()), 0);
    ASSERT_EQ(run("levels -c " + c3.string() + " -f csv -o " + (dir_ / "l3.csv").string()), 0);
    const auto a = parse_levels(read(dir_ / "l1.csv"));
    const auto b = parse_levels(read(dir_ / "l3.csv"));
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.size(), 2u * 5u * 5u);
    for (const auto& [key, v] : a) {
        const int m = key.second.second;
        if (m == 0) continue;
        EXPECT_NEAR(b.at(key) / v, std::pow(9.0, m), 1e-6 * std::pow(9.0, m));
    }
}

TEST_F(Cli, LevelsIdenticalBiasedAreZero) {
    const auto cfg = write("sim.json", kSimConfig);
    ASSERT_EQ(run("simulate -c " + cfg.string() + " -o " + dir_.string()), 0);
    const auto lcfg = write("l.json", R"({"test": {"B": 4}, "levels": {"depth": 3, "mode": "biased", "batch_size": 8}})");
    const auto x = (dir_ / "x.json").string();
    ASSERT_EQ(run("levels -c " + lcfg.string() + " --x " + x + " --y " + x + " -f csv -o " + (dir_ / "l.csv").string()),
              0);
    for (const auto& [key, v] : parse_levels(read(dir_ / "l.csv"))) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST_F(Cli, IngestPipelineRuns) {
    std::string a = "date,price\n", b = "date,price\n";
    double pa = 100.0, pb = 50.0;
    for (int i = 0; i < 301; ++i) {
        char date[16];
        std::snprintf(date, sizeof date, "2020-%02d-%02d", 1 + i / 28, 1 + i % 28);
        pa *= 1.0 + 0.01 * std::sin(i * 0.7);
        pb *= 1.0 + 0.03 * std::cos(i * 1.3);
        a += std::string(date) + "," + std::to_string(pa) + "\n";
        b += std::string(date) + "," + std::to_string(pb) + "\n";
    }
    const auto fa = write("a.csv", a);
    const auto fb = write("b.csv", b);
    const std::string cfg_text = R"({"data": {"ingest": {"x_files": [")" + fa.string() + R"("], "y_files": [")" +
                                 fb.string() + R"("]}},
      "preprocess": [{"step": "standardize"}, {"step": "lead_lag"}],
      "test": {"B": 100}, "kernel": {"backend": "truncated", "depth": 4}, "seed": 2})";
    const auto cfg = write("i.json", cfg_text);
    ASSERT_EQ(run("ingest -c " + cfg.string() + " -o " + (dir_ / "ing").string()), 0);
    EXPECT_EQ(read_paths(dir_ / "ing" / "x_calibration.json").size(), 16u);
    EXPECT_EQ(read_paths(dir_ / "ing" / "x_test.json").size(), 4u);
    ASSERT_EQ(run("test -c " + cfg.string() + " -o " + (dir_ / "r.json").string()), 0);
    const auto r = json::parse(read(dir_ / "r.json"));
    EXPECT_TRUE(r["result"].contains("reject"));
}

TEST(Config, RoundTrip) {
    ExperimentConfig c;
    SimulatedData s;
    s.x = {SimSpec{model::Mixture{{0.3, 0.5, 1.0}, {0.3, 0.5, 0.75}}, 30, 1.0, 4}};
    s.y = {SimSpec{model::Garch{1e-3, 3.8e-3, 0.04, 0.042, false}, 15, 2.0, 5}};
    s.n_paths = 64;
    c.data = s;
    c.preprocess = PreprocessPipeline({step::Standardize{}, step::LeadLag{}, step::TimeAugment{}, step::Scale{0.8, false}});
    c.kernel = PdeBackend{StaticKernel::rbf(0.5), 1, 0.64};
    c.estimator = Estimator::biased;
    c.test = {0.01, NullMethod::gamma, 300};
    c.study.scalings = {1.0, 2.5};
    c.study.batch_sizes = {16, 64};
    c.study.estimators = {Estimator::biased, Estimator::unbiased};
    c.study.scaling_mode = ScalingMode::feature;
    c.levels.mode = LambdaMode::biased;
    c.seed = 123;
    c.output = {"out.csv", Format::csv};
    EXPECT_EQ(config_from_json(to_json(c)), c);
    EXPECT_EQ(config_from_json(json::parse(to_json(c).dump())), c);

    ExperimentConfig t;
    t.kernel = TruncatedBackend{7, WeightFunction::table({1.0, 0.5, 0.25})};
    IngestData d;
    d.x_files = {"a.csv"};
    d.y_files = {"b.csv"};
    d.schema.asset_column = "ticker";
    d.split_mode = SplitMode::chronological;
    t.data = d;
    EXPECT_EQ(config_from_json(to_json(t)), t);
}

TEST(Config, ExitCodes) {
    EXPECT_EQ(exit_code_for(ParameterError("x")), config_error);
    EXPECT_EQ(exit_code_for(DataError("x")), data_error);
    EXPECT_EQ(exit_code_for(NumericalError("x")), numerical_error);
    EXPECT_EQ(exit_code_for(std::runtime_error("x")), other_error);
}

}  // namespace
}  // namespace sigmmd::app
