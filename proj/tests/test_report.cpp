#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "covertsim/model.hpp"
#include "covertsim/report.hpp"

using namespace covertsim;

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
    for (double x : {1.0 / 3.0, 6.02214076e23, -2.5e-310, 0.987654321012345})
        EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
}

TEST(Csv, HeaderAndRows)
{
    CsvTable t({"a", "b"});
    t.row({"1", "2"}).row({"3", "4"});
    EXPECT_EQ(t.str(), "a,b\n1,2\n3,4\n");
    EXPECT_EQ(t.rows(), 2u);
    EXPECT_ANY_THROW(t.row({"only one"}));
}

TEST(Hash, GitBlobId)
{
    // `printf 'hello\n' | git hash-object --stdin`
    EXPECT_EQ(git_blob_hash("hello\n"), "ce013625030ba8dba906f756967f9e9ca394464a");
    EXPECT_EQ(git_blob_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST(Files, WriteText)
{
    const auto p = std::filesystem::temp_directory_path() / "covertsim_report_test.txt";
    write_text(p, "x,y\n");
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "x,y\n");
    std::filesystem::remove(p);
}
