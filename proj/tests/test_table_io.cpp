#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "memcost/table_io.hpp"

using namespace memcost;

namespace {

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    for (auto& l : lines(csv))
        if (!l.empty() && l[0] != '#') out.push_back(l);
    return out;
}

SweepTable figure_with_drops() {
    SweepSpec s = figure_recipe(2);
    s.start = 0.0;
    s.stop = 2.0;
    s.points = 9;
    return run_sweep(s);
}

} // namespace

TEST(TableIo, CsvLayout) {
    const SweepTable t = run_sweep(figure_recipe(1));
    const auto data = data_lines(emit_csv(t));
    ASSERT_EQ(data.size(), 101U);
    EXPECT_EQ(data[0], "H,c_r0");
    EXPECT_EQ(data[1].substr(0, 5), "0.05,");
    for (const auto& l : lines(emit_csv(t)))
        if (l[0] == '#') {
            EXPECT_EQ(l.substr(0, 2), "# ");
        }
}

TEST(TableIo, CsvListsDroppedPoints) {
    const std::string csv = emit_csv(figure_with_drops());
    EXPECT_NE(csv.find("# dropped: H=0 ("), std::string::npos);
    EXPECT_EQ(data_lines(csv).size(), 9U);
}

TEST(TableIo, JsonRoundTrip) {
    for (const SweepTable& t : {run_sweep(figure_recipe(1)), run_sweep(figure_recipe(3)), figure_with_drops()}) {
        const SweepTable back = parse_json_table(emit_json(t));
        EXPECT_EQ(back, quantized(t));
        EXPECT_EQ(emit_json(back), emit_json(t));
    }
    EXPECT_THROW(parse_json_table("{\"columns\": 3}"), ValidationError);
    EXPECT_THROW(parse_json_table("not json"), ValidationError);
}

// csv, json and dat carry the same numbers.
TEST(TableIo, FormatsAgree) {
    const SweepTable t = run_sweep(figure_recipe(1));
    const auto csv = data_lines(emit_csv(t));
    const auto dat = lines(emit(t, Format::Dat));
    const SweepTable js = parse_json_table(emit_json(t));
    ASSERT_EQ(dat.size(), t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::string c = csv[i + 1];
        std::replace(c.begin(), c.end(), ',', ' ');
        EXPECT_EQ(dat[i], c);
        std::istringstream in(dat[i]);
        double x = 0, y = 0;
        in >> x >> y;
        EXPECT_EQ(x, js.rows[i][0]);
        EXPECT_EQ(y, js.rows[i][1]);
    }
}

TEST(TableIo, MultiCurveDat) {
    const SweepTable t = run_sweep(figure_recipe(3));
    const auto files = emit_dat(t);
    ASSERT_EQ(files.size(), 6U);
    EXPECT_EQ(files[0].suffix, "_sf0.001");
    EXPECT_EQ(files[3].suffix, "_sf1");
    for (const auto& f : files) EXPECT_EQ(lines(f.content).size(), 60U);
    EXPECT_THROW(emit(t, Format::Dat), ValidationError);
}

TEST(TableIo, NumbersUseNineSignificantDigits) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333");
    EXPECT_EQ(format_number(51.96624331336407), "51.9662433");
    EXPECT_EQ(quantize(1.0 / 3.0), 0.333333333);
    EXPECT_THROW(quantize(INFINITY), NumericError);
    EXPECT_EQ(parse_format("json"), Format::Json);
    EXPECT_THROW(parse_format("xml"), ValidationError);
}
