#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cli(const std::string& args) {
    const std::string cmd = std::string(SPATIAL_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("spatial_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& body) const {
        std::ofstream(path(name)) << body;
        return path(name);
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("bogus").code, 2);
    EXPECT_EQ(cli("compile --medium hex:8x8").code, 2);
    EXPECT_EQ(cli("compile --medium hex:8x8 --expr 'and(x,'").code, 2);
    EXPECT_EQ(cli("medium gen --medium hex:2x2").code, 2);
}

TEST_F(Cli, CompileReport) {
    const Result r = cli("compile --medium hex:8x8 --circuit voronoi --report");
    ASSERT_EQ(r.code, 0);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["gates_per_tile"], 56.0);
    EXPECT_EQ(j["radius"], 4);
    EXPECT_EQ(j["max_tile_gates"], 56);
    const Result e = cli("compile --medium hex:8x8 --expr 'existsV(y)' --layer y:boolE --report --netlist " + path("n.json"));
    ASSERT_EQ(e.code, 0);
    EXPECT_EQ(json::parse(e.out)["radius"], 1);
    EXPECT_TRUE(json::parse(slurp(path("n.json"))).is_object());
}

TEST_F(Cli, MediumGenAndValidate) {
    ASSERT_EQ(cli("medium gen --medium iso:80:3 -o " + path("m.json")).code, 0);
    EXPECT_EQ(cli("medium validate --medium " + path("m.json")).code, 0);
    json j = json::parse(slurp(path("m.json")));
    j["faces"].erase(0);
    write("bad.json", j.dump());
    EXPECT_NE(cli("medium validate --medium " + path("bad.json")).code, 0);
}

TEST_F(Cli, VoronoiAgainstTheOracle) {
    const std::string good = write("good.json", R"({"seeds": [[126], [22]]})");
    const Result ok = cli("--json voronoi --medium hex:13x14 --compare-oracle --seeds " + good);
    EXPECT_EQ(ok.code, 0);
    const json j = json::parse(ok.out);
    EXPECT_EQ(j["converged"], true);
    EXPECT_EQ(j["oracle"]["mismatches"], 0);
    // Tie wedge on a 22x18 torus: seeds (4,11) and (7,11).
    const std::string tie = write("tie.json", R"({"seeds": [[246], [249]]})");
    EXPECT_EQ(cli("voronoi --medium hex:22x18 --compare-oracle --seeds " + tie).code, 1);
    EXPECT_EQ(cli("voronoi --medium hex:8x8 --seeds " + write("adj.json", R"({"seeds": [[0], [1]]})")).code, 2);
}

TEST_F(Cli, VoronoiTraceWritesFrames) {
    const std::string s = write("s.json", R"({"seeds": [[126], [22]]})");
    ASSERT_EQ(cli("voronoi --medium hex:13x14 --seeds " + s + " --trace " + path("tr")).code, 0);
    std::size_t frames = 0;
    for (const auto& e : fs::directory_iterator(path("tr"))) frames += e.path().extension() == ".svg";
    EXPECT_EQ(frames, 6u);  // t = 0..5
}

TEST_F(Cli, RunWritesDumpsAndManifest) {
    const std::string s = write("s.json", R"({"seeds": [[0]]})");
    const Result r = cli("run --medium hex:64x8 --circuit growth --engine bitpar --seeds " + s + " -o " + path("out"));
    ASSERT_EQ(r.code, 0);
    const json m = json::parse(slurp(path("out/manifest.json")));
    EXPECT_EQ(m["converged"], true);
    EXPECT_TRUE(fs::exists(path("out/x.spfd")));
    // The final growth field renders, twice to the same bytes.
    const std::string args = "render --medium hex:64x8 --field " + path("out/x.spfd") + "@#ff0000";
    const Result a = cli(args), b = cli(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("<svg"), std::string::npos);
    EXPECT_EQ(cli("render --medium hex:8x8 --field " + path("out/x.spfd")).code, 2);  // other medium
}

TEST_F(Cli, RunReportsNonConvergence) {
    const std::string s = write("s.json", R"({"seeds": [[0]]})");
    EXPECT_EQ(cli("run --medium hex:16x16 --circuit growth --max-steps 2 --seeds " + s).code, 1);
}

TEST_F(Cli, RunTraceDumpsEveryStep) {
    const std::string s = write("s.json", R"({"seeds": [[0]]})");
    ASSERT_EQ(cli("run --medium hex:8x8 --circuit growth --seeds " + s + " --trace " + path("tr")).code, 0);
    for (int t = 0; t <= 5; ++t) {  // eccentricity 5
        char name[32];
        std::snprintf(name, sizeof name, "tr/x_%04d.spfd", t);
        EXPECT_TRUE(fs::exists(path(name))) << name;
    }
    EXPECT_FALSE(fs::exists(path("tr/x_0006.spfd")));
}
