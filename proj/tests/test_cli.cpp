#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string& args) {
    const std::string cmd = std::string(CROFTON_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("crofton_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, SampleIsDeterministic) {
    ASSERT_EQ(run("sample --shape peanut --n 300 --seed 4 --out " + path("a.csv")).code, 0);
    ASSERT_EQ(run("sample --shape peanut --n 300 --seed 4 --out " + path("b.csv")).code, 0);
    const auto a = slurp(path("a.csv"));
    EXPECT_EQ(a, slurp(path("b.csv")));
    EXPECT_EQ(a.rfind("# crofton-points v1 d=2\n", 0), 0u);
    EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 301);
}

TEST_F(Cli, SampleTorusHasThreeColumns) {
    const auto r = run("sample --shape torus --R 2 --r 0.5 --n 5 --seed 1");
    ASSERT_EQ(r.code, 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "# crofton-points v1 d=3");
    while (std::getline(is, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
}

TEST_F(Cli, SampleRbm) {
    const auto r = run("sample --shape disk --source rbm --t-end 2 --dt 0.01 --seed 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 201);  // header + t_end / dt points
}

TEST_F(Cli, EstimateJson) {
    ASSERT_EQ(run("sample --shape disk --n 5000 --seed 1 --out " + path("d.csv")).code, 0);
    const auto r = run("estimate --in " + path("d.csv") + " --method dw --k 20 --l 50 --seed 3 --threads 2");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["value"].get<double>(), 2 * M_PI, 0.5);
    EXPECT_EQ(j["counter_kind"], "dw");
    EXPECT_TRUE(j.contains("epsilon"));
    EXPECT_EQ(j["plan"]["k"], 20);
    EXPECT_EQ(j["input"]["d"], 2);
    EXPECT_EQ(j["input"]["provenance"], "file");

    const auto a = run("estimate --in " + path("d.csv") + " --method alpha --alpha 0.5 --k 20 --l 50 --seed 3");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(nlohmann::json::parse(a.out)["alpha"], 0.5);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("estimate").code, 2);
    EXPECT_EQ(run("sample --shape blob --n 3").code, 2);
    EXPECT_EQ(run("estimate --in /nonexistent.csv").code, 3);
    std::ofstream(path("bad.csv")) << "# crofton-points v1 d=2\n1,2\n3,oops\n";
    EXPECT_EQ(run("estimate --in " + path("bad.csv")).code, 3);
    ASSERT_EQ(run("sample --shape ball --n 100 --seed 1 --out " + path("b3.csv")).code, 0);
    EXPECT_EQ(run("estimate --in " + path("b3.csv") + " --method alpha --alpha 0.5").code, 2);
    ASSERT_EQ(run("sample --shape disk --n 100 --seed 1 --out " + path("d.csv")).code, 0);
    EXPECT_EQ(run("estimate --in " + path("d.csv") + " --method dw-capped --cap 1").code, 2);
    EXPECT_EQ(run("estimate --in " + path("d.csv") + " --epsilon -1").code, 2);
}

TEST_F(Cli, BenchCsv) {
    const auto r = run("bench --shape annulus --sweep 200,400 --reps 2 --method dw,alpha --alpha 0.4 --k 5 --l 10");
    ASSERT_EQ(r.code, 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line.rfind("command,shape,shape_params,method,n,rep,seed", 0), 0u);
    int rows = 0;
    while (std::getline(is, line)) {
        ++rows;
        EXPECT_EQ(line.rfind("bench,annulus,r1=1;r2=2,", 0), 0u) << line;
    }
    EXPECT_EQ(rows, 8);
}

TEST_F(Cli, BenchEmptySweepIsHeaderOnly) {
    const auto r = run("bench --shape disk --sweep \"\"");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}
