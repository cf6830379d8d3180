#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "memcost/cli.hpp"

using namespace memcost;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "memcost_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string value_of(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        if (l.rfind(key + "=", 0) == 0) return l.substr(key.size() + 1);
    return {};
}

} // namespace

TEST(Cli, RetentionExact) {
    const Outcome r = run({"retention", "--topology", "uncoupled3", "--h", "0", "--beta", "1"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(value_of(r.out, "tau"), "6");
    EXPECT_EQ(value_of(r.out, "method"), "exact");
}

TEST(Cli, RetentionMcIsDeterministic) {
    const std::vector<std::string> args{"retention", "mc", "--topology", "line3", "--sf", "0.5",
                                        "--h", "0.5", "--trials", "5000", "--seed", "3"};
    const Outcome a = run(args);
    const Outcome b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(value_of(a.out, "method"), "monte-carlo");
}

TEST(Cli, NegativeFieldIsValidationExit) {
    const Outcome r = run({"threshold", "single", "--h", "-1"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("memcost: "), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, DegenerateThresholdExit) {
    EXPECT_EQ(run({"threshold", "three", "--h", "0"}).code, 3);
    EXPECT_EQ(run({"threshold", "line-vs-triangle", "--h", "0.5", "--sf", "0"}).code, 3);
}

TEST(Cli, ParseErrorsAreValidationExit) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"retention", "--bogus", "1"}).code, 2);
    EXPECT_EQ(run({"threshold", "nonsense"}).code, 2);
    EXPECT_EQ(run({"retention", "--beta", "abc"}).code, 2);
    EXPECT_EQ(run({"retention", "--topology", "custom", "--dipoles", "13"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ThresholdValues) {
    const Outcome single = run({"threshold", "single", "--h", "1"});
    EXPECT_EQ(single.code, 0);
    EXPECT_EQ(value_of(single.out, "c_r0"), "0.761594156");
    EXPECT_EQ(value_of(single.out, "c_r0_exact"), "1.31303529");
    EXPECT_EQ(value_of(run({"threshold", "three", "--h", "1"}).out, "c_r0"), "1.13053057");
    EXPECT_EQ(value_of(run({"threshold", "line-vs-triangle", "--h", "0.5", "--sf", "0.5"}).out, "c_r0"),
              "15.0033503");
    const Outcome generic = run({"threshold", "generic", "S3", "S4", "--h", "1"});
    EXPECT_EQ(value_of(generic.out, "c_r0"), "1.13053057");
    EXPECT_EQ(value_of(generic.out, "regime_above"), "S4 cheaper");
}

TEST(Cli, CostAndCompare) {
    const Outcome s2 = run({"cost", "--scenario", "S2", "--h", "1"});
    EXPECT_EQ(value_of(s2.out, "total"), "1.61920292");
    const Outcome low = run({"compare", "S3", "S4", "--h", "1", "--cr", "1"});
    EXPECT_EQ(value_of(low.out, "cheaper"), "S3");
    const Outcome high = run({"compare", "S3", "S4", "--h", "1", "--cr", "1.2"});
    EXPECT_EQ(value_of(high.out, "cheaper"), "S4");
    const Outcome topo = run({"cost", "topology", "--topology", "triangle3", "--sf", "0.5", "--h", "0.5"});
    EXPECT_EQ(topo.code, 0);
    EXPECT_EQ(value_of(topo.out, "total"),
              value_of(run({"cost", "--scenario", "S6", "--sf", "0.5", "--h", "0.5"}).out, "total"));
}

TEST(Cli, JsonRecord) {
    const Outcome r = run({"retention", "--format", "json"});
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j.at("tau").get<std::string>(), "2");
}

TEST(Cli, LedgerZeroCost) {
    const Outcome r = run({"ledger", "--cr", "0", "--horizon", "10000"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(value_of(r.out, "rate"), "0");
}

TEST(Cli, FiguresMatchLibrary) {
    const auto path = scratch("fig1.dat");
    const Outcome r = run({"figures", "1", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path), emit(run_sweep(figure_recipe(1)), Format::Dat));

    const Outcome csv = run({"figures", "2", "--format", "csv"});
    EXPECT_EQ(csv.out, emit_csv(run_sweep(figure_recipe(2))));
}

TEST(Cli, FigureThreeWritesOneFilePerCurve) {
    const auto path = scratch("fig3.dat");
    ASSERT_EQ(run({"figures", "3", "--out", path.string()}).code, 0);
    const auto files = emit_dat(run_sweep(figure_recipe(3)));
    for (const auto& f : files) {
        const auto p = path.parent_path() / ("fig3" + f.suffix + ".dat");
        EXPECT_EQ(slurp(p), f.content) << p;
    }
    EXPECT_EQ(run({"figures", "3", "--format", "dat"}).code, 2);
}

TEST(Cli, SweepConfigAndFlagOverride) {
    const auto cfg = scratch("field.cfg");
    std::ofstream(cfg) << "target = field_cost\nvariable = H\nstart = 0\nstop = 1\npoints = 2\nmu = 1\n";
    const Outcome r = run({"sweep", cfg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("H,field_cost\n0,0\n1,0.5\n"), std::string::npos);
    const Outcome over = run({"sweep", cfg.string(), "--mu", "2"});
    EXPECT_NE(over.out.find("1,0.25\n"), std::string::npos);
    const Outcome json = run({"sweep", cfg.string(), "--format", "json"});
    EXPECT_EQ(parse_json_table(json.out).rows.size(), 2U);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const auto cfg = scratch("point.cfg");
    std::ofstream(cfg) << "topology = uncoupled3\nh = 1\n";
    EXPECT_EQ(value_of(run({"retention", "--config", cfg.string()}).out, "tau"), "51.9662433");
    EXPECT_EQ(value_of(run({"retention", "--config", cfg.string(), "--h", "0"}).out, "tau"), "6");
}
