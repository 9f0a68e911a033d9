#include "json.hpp"
#include "lipgeo/snk_io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch() {
    auto d = fs::temp_directory_path() / "lipgeo_cli_test";
    fs::create_directories(d);
    return d;
}

Run cli(const std::string& args) {
    const fs::path err = scratch() / "stderr.txt";
    std::string cmd = std::string(LIPGEO_CLI) + " " + args + " 2>" + err.string();
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string sample(const std::string& name) { return std::string(LIPGEO_SAMPLES) + "/" + name; }
std::string golden(const std::string& name) { return slurp(fs::path(LIPGEO_SAMPLES).parent_path() / "tests/golden" / name); }

fs::path write_temp(const std::string& name, const std::string& text) {
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST(CliGolden, AnalyzeCs2) {
    auto r = cli("analyze " + sample("cs2.snk"));
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, golden("analyze_cs2.txt"));
}

TEST(CliGolden, AnalyzeCs2Json) {
    auto r = cli("analyze " + sample("cs2.snk") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, golden("analyze_cs2.json"));
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["class"], "CIRCULAR_SNAKE");
    EXPECT_EQ(j["segments"].size(), 4u);
    EXPECT_EQ(j["nodal_zones"].size(), 4u);
    EXPECT_EQ(j["nodes"].size(), 2u);
}

TEST(CliGolden, RenderCs2) {
    auto r = cli("render " + sample("cs2.snk"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, golden("render_cs2.dot"));
}

TEST(CliGolden, RenderBubbleIsOpenPath) {
    auto r = cli("render " + sample("bubble.snk"));
    EXPECT_EQ(r.out, golden("render_bubble.dot"));
    EXPECT_EQ(r.out.find("\"g2\" -- \"g1\""), std::string::npos);
}

TEST(CliGolden, PizzaCs2) {
    auto r = cli("pizza " + sample("cs2.snk") + " --pancake X1 --target X3");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, golden("pizza_cs2_X1_X3.txt"));
    EXPECT_NE(r.out.find("2 slices"), std::string::npos);
}

TEST(CliGolden, SurgeryCut) {
    auto r = cli("surgery " + sample("cs2.snk") + " --cut-nodal 1 --alpha 2");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, golden("surgery_cs2_cut1.txt"));
}

TEST(Cli, AnalyzeClasses) {
    EXPECT_NE(cli("analyze " + sample("horn.snk")).out.find("class NE_HORN"), std::string::npos);
    EXPECT_NE(cli("analyze " + sample("bubble.snk")).out.find("class SNAKE"), std::string::npos);
}

TEST(Cli, RenderHornHasNoClusters) {
    auto r = cli("render " + sample("horn.snk"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("subgraph"), std::string::npos);
}

TEST(Cli, SurgeryRemoveVerdict) {
    auto r = cli("surgery " + sample("cs2.snk") + " --remove-segment 1");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("criterion=true recognized=SNAKE\n"), std::string::npos);
}

TEST(Cli, OracleBubble) {
    auto r = cli("oracle " + sample("bubble.germ") + " --pair g1,g2");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("slope=1.5000"), std::string::npos) << r.out;
}

TEST(Cli, IngestWritesModel) {
    auto out = scratch() / "bubble_out.snk";
    fs::remove(out);
    auto r = cli("ingest " + sample("bubble.germ") + " -o " + out.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(lipgeo::load_snk(out.string()), lipgeo::load_snk(sample("bubble.snk")));
}

TEST(Cli, ValidateReportsViolations) {
    EXPECT_EQ(cli("validate " + sample("horn.snk")).out, "ok\n");
    auto bad = write_temp("bad_beta.snk", "beta 2\ntopology circular\npancake X1 a b\npancake X2 b a\n"
                                          "internal X1 a b 1\ninternal X2 b a 2\n");
    auto r = cli("validate " + bad.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.out.empty());
}

TEST(CliExit, ParseErrorHasLineAndNoFile) {
    auto bad = write_temp("bad.snk", "beta 1\ntopology circular\nfoo bar\n");
    auto out = scratch() / "never.txt";
    fs::remove(out);
    auto r = cli("analyze " + bad.string() + " --out " + out.string());
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(out));
}

TEST(CliExit, InvalidModelIsTwo) {
    auto bad = write_temp("low_contact.snk", "beta 1\ntopology circular\npancake X1 a b\npancake X2 b c\npancake X3 c a\n"
                                             "contact a b 1\n");
    EXPECT_EQ(cli("analyze " + bad.string()).code, 2);
}

TEST(CliExit, IndeterminateIsThreeAndNoFile) {
    auto germ = write_temp("ind.germ", "arc a = (t, t^2 + O(t^3))\narc b = (t, t^2)\ntriangle T = ruled(a, b)\nglue chain T\n");
    auto out = scratch() / "ind.snk";
    fs::remove(out);
    auto r = cli("ingest " + germ.string() + " -o " + out.string());
    EXPECT_EQ(r.code, 3);
    EXPECT_FALSE(fs::exists(out));
    EXPECT_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST(CliExit, UsageErrors) {
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("surgery " + sample("cs2.snk")).code, 1);
    EXPECT_EQ(cli("pizza " + sample("cs2.snk") + " --pancake X1 --format dot").code, 1);
}

TEST(Cli, Deterministic) {
    for (auto args : {"analyze --format json ", "render ", "analyze "}) {
        auto a = cli(args + sample("cs2.snk")), b = cli(args + sample("cs2.snk"));
        EXPECT_EQ(a.out, b.out);
    }
}
