#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/io.hpp"

using namespace ouhjb;

TEST(FormatDouble, RoundTripsExactly) {
    for (double v : {0.1, 1.0 / 3.0, 1.1966, -5.0, 6.02e23, 5e-324, 1e-300, 0.0081}) {
        const std::string s = io::format_double(v);
        EXPECT_EQ(io::parse_double(s), v) << s;
    }
}

TEST(FormatDouble, ShortForm) {
    EXPECT_EQ(io::format_double(0.5), "0.5");
    EXPECT_EQ(io::format_double(-2.0), "-2");
    EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(io::format_double(std::nan("")), "nan");
}

TEST(ParseDouble, StrictAndNamed) {
    EXPECT_DOUBLE_EQ(io::parse_double(" 2.5 "), 2.5);
    EXPECT_THROW(io::parse_double("2,5"), ValidationError);
    EXPECT_THROW(io::parse_double(""), ValidationError);
    EXPECT_THROW(io::parse_double("1.0x"), ValidationError);
    try {
        io::parse_double("abc", "gamma");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("gamma"), std::string::npos);
    }
}

TEST(ParseInt, RejectsFractions) {
    EXPECT_EQ(io::parse_int("-12"), -12);
    EXPECT_THROW(io::parse_int("1.5"), ValidationError);
    EXPECT_EQ(io::parse_u64("18446744073709551615"), 18446744073709551615ull);
    EXPECT_THROW(io::parse_u64("-1"), ValidationError);
}

TEST(Split, KeepsEmptyFields) {
    auto parts = io::split("a,,b", ',');
    ASSERT_EQ(parts.size(), 3u);
    EXPECT_EQ(parts[1], "");
    EXPECT_EQ(io::trim("  x \t"), "x");
}

TEST(Csv, WriteThenRead) {
    auto dir = oracle::temp_dir("csv");
    {
        io::CsvWriter w(dir / "t.csv", {"a", "b"});
        w.row({"1", io::format_double(0.1)});
        w.row({"2", "x"});
        EXPECT_THROW(w.row({"3"}), ValidationError);
        w.close();
    }
    auto table = io::read_csv(dir / "t.csv");
    ASSERT_EQ(table.header.size(), 2u);
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_EQ(table.column("b"), 1u);
    EXPECT_EQ(io::parse_double(table.rows[0][1]), 0.1);
    EXPECT_THROW(table.column("zz"), ValidationError);
    std::filesystem::remove_all(dir);
}

TEST(ContentHash, MatchesFnv1aReference) {
    EXPECT_EQ(io::content_hash(""), "cbf29ce484222325");
    EXPECT_EQ(io::content_hash("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(io::content_hash("foobar"), "85944171f73967e8");
}

TEST(Text, RoundTrip) {
    auto dir = oracle::temp_dir("text");
    io::write_text(dir / "f.txt", "hello\nworld");
    EXPECT_EQ(io::read_text(dir / "f.txt"), "hello\nworld");
    EXPECT_THROW(io::read_text(dir / "missing.txt"), std::exception);
    std::filesystem::remove_all(dir);
}
