#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "qhd/io.hpp"

using namespace qhd;
namespace fs = std::filesystem;
namespace fx = fixtures;

namespace {

Dataset random_dataset(std::uint64_t seed, std::size_t rows)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    Dataset ds{{"a", "b", "c"}, {}};
    for (std::size_t i = 0; i < rows; ++i)
        ds.rows.push_back({std::ldexp(mant(rng), expo(rng)), mant(rng), std::ldexp(mant(rng), -1070)});
    ds.rows.push_back({0.0, -0.0, std::numeric_limits<double>::max()});
    ds.rows.push_back({std::numeric_limits<double>::min(), std::numeric_limits<double>::denorm_min(), 1.0 / 3.0});
    return ds;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

fs::path temp_dir(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("qhd_io_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST(FormatDouble, SeventeenSignificantDigits)
{
    EXPECT_EQ(format_double(1.0), "1.0000000000000000e+00");
    EXPECT_EQ(format_double(-0.1), "-1.0000000000000001e-01");
    EXPECT_EQ(std::strtod(format_double(1.0 / 3.0).c_str(), nullptr), 1.0 / 3.0);
}

TEST(Csv, RoundTripIsExact)
{
    const Dataset ds = random_dataset(1, 500);
    std::stringstream ss;
    write_csv(ss, ds);
    const Dataset back = read_csv(ss);
    ASSERT_EQ(back.columns, ds.columns);
    ASSERT_EQ(back.rows.size(), ds.rows.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        for (std::size_t j = 0; j < ds.columns.size(); ++j)
            ASSERT_TRUE(same_bits(back.rows[i][j], ds.rows[i][j])) << i << "," << j;
}

TEST(Csv, HeaderAndLayout)
{
    std::stringstream ss;
    write_csv(ss, Dataset{{"y", "P"}, {{0.5, 2.0}}});
    EXPECT_EQ(ss.str(), "y,P\n5.0000000000000000e-01,2.0000000000000000e+00\n");
}

TEST(Csv, RejectsMalformedInput)
{
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), IoError);
    std::istringstream bad("a,b\n1.0,zz\n");
    EXPECT_THROW(read_csv(bad), IoError);
    std::istringstream ragged("a,b\n1.0\n");
    EXPECT_THROW(read_csv(ragged), IoError);
}

TEST(Json, RoundTripIsBitExact)
{
    const Dataset ds = random_dataset(2, 500);
    const std::string text = to_json(ds).dump();
    const Dataset back = dataset_from_json(nlohmann::json::parse(text));
    ASSERT_EQ(back.columns, ds.columns);
    ASSERT_EQ(back.rows.size(), ds.rows.size());
    for (std::size_t i = 0; i < ds.rows.size(); ++i)
        for (std::size_t j = 0; j < ds.columns.size(); ++j)
            ASSERT_TRUE(same_bits(back.rows[i][j], ds.rows[i][j])) << i << "," << j;
}

TEST(Files, CsvAndJsonOnDisk)
{
    const fs::path dir = temp_dir("files");
    const Dataset ds = random_dataset(3, 50);
    write_csv_file(dir / "nested" / "d.csv", ds);
    const Dataset back = read_csv_file(dir / "nested" / "d.csv");
    ASSERT_EQ(back.rows.size(), ds.rows.size());
    EXPECT_TRUE(same_bits(back.rows[7][1], ds.rows[7][1]));
    write_json_file(dir / "d.json", to_json(ds));
    const Dataset jb = dataset_from_json(nlohmann::json::parse(read_text(dir / "d.json")));
    EXPECT_TRUE(same_bits(jb.rows[9][0], ds.rows[9][0]));
    EXPECT_THROW(read_text(dir / "missing.csv"), IoError);
    fs::remove_all(dir);
}

TEST(Builders, ProfileDatasets)
{
    const ProfileSolution het = heteroclinic_profile(fx::shock_data(), fx::shock_params());
    const Dataset lin = linear_profile_dataset(het);
    EXPECT_EQ(lin.columns, (std::vector<std::string>{"y", "P", "Q", "J"}));
    ASSERT_EQ(lin.rows.size(), het.trajectory.samples.size());
    EXPECT_EQ(lin.rows.back()[1], het.trajectory.back().state.x);
    EXPECT_EQ(lin.rows.back()[3], het.secondary_profile.back().second);

    const ProfileSolution st = standing_profile(fx::standing_system());
    const Dataset sd = standing_profile_dataset(st);
    EXPECT_EQ(sd.columns, (std::vector<std::string>{"y", "V", "W", "U", "rho"}));
    const auto& r = sd.rows.front();
    EXPECT_NEAR(r[4], r[1] * r[1], 1e-15 * r[4]);
    EXPECT_NEAR(r[3], 1.6 / (r[1] * r[1]), 1e-15 * r[3]);
}

TEST(Builders, DiagnosticsJson)
{
    const ProfileSolution het = heteroclinic_profile(fx::shock_data(), fx::shock_params());
    const nlohmann::json d = to_json(het.diagnostics);
    EXPECT_EQ(d.at("verdict"), "Converged");
    EXPECT_EQ(d.at("oscillation_count").get<long>(), het.diagnostics.oscillation_count);
    const nlohmann::json a = to_json(lasalle_audit(het, fx::shock_system()));
    EXPECT_TRUE(a.at("passed").get<bool>());
    EXPECT_TRUE(a.at("failures").empty());
    const nlohmann::json m = to_json(het.trajectory.meta);
    EXPECT_GT(m.at("steps").get<long>(), 0);
}
