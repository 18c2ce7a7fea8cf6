#include "xxz/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "xxz");
    std::ostringstream out, err;
    const int code = xxz::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Cli, Solve)
{
    const Result r = run({"solve", "--zeta", "0.1065pi", "--q", "0.2", "--J", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["D"].get<double>(), 0.4187, 5e-4);
    for (const char* k : {"q", "h", "p_F", "v_F", "v_inf", "Z_q"}) EXPECT_TRUE(j.contains(k)) << k;
}

TEST(Cli, StringsCsv)
{
    const Result r = run({"strings", "--zeta", "0.45pi", "--rmax", "8", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    EXPECT_NE(header.find("exists"), std::string::npos);
    EXPECT_NE(header.find("sigma"), std::string::npos);
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 8);
}

TEST(Cli, ValidationErrors)
{
    EXPECT_EQ(run({"solve", "--zeta", "0.3pi", "--q", "0.2", "--h", "1"}).code, 2);
    EXPECT_EQ(run({"solve", "--zeta", "0.3pi", "--bogus"}).code, 2);
    const Result r = run({"solve", "--zeta", "0.3pi"});
    EXPECT_EQ(r.code, 2);
    const auto e = nlohmann::json::parse(r.err);
    EXPECT_EQ(e["error"], "invalid-argument");
}

TEST(Cli, NearCriticalVelocity)
{
    const Result s = run({"solve", "--zeta", "0.5365pi", "--q", "0.2"});
    const double vF = nlohmann::json::parse(s.out)["v_F"].get<double>();
    std::ostringstream v;
    v.precision(17);
    v << vF;
    const Result r = run({"saddles", "--zeta", "0.5365pi", "--q", "0.2", "--v", v.str()});
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"], "near-critical");
}

TEST(Cli, ConformalExponents)
{
    const Result r = run({"exponents", "--zeta", "0.5pi", "--h", "2", "--bound", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_TRUE(j.contains("conformal"));
    EXPECT_FALSE(j["conformal"].empty());
}

TEST(Cli, ConfigFileAndOverride)
{
    const auto path = std::filesystem::temp_directory_path() / "xxz_cli_test.toml";
    {
        std::ofstream f(path);
        f << "zeta = \"0.1065pi\"\nq = 0.2\norder = 64\n";
    }
    const Result r = run({"solve", "--config", path.string(), "--order", "128"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["order"], 128);
    std::filesystem::remove(path);
}

TEST(Cli, Help)
{
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("verify"), std::string::npos);
}
