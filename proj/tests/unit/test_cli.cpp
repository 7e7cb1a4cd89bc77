#include <fockcis_cli/run.hpp>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using namespace fockcis::cli;
using nlohmann::json;

namespace
{

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        std::random_device rd;
        dir_ = fs::temp_directory_path() / ("fockcis_cli_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text)
    {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    static std::string read(const fs::path& p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::string spec_text(double delta, const std::string& side = "one")
    {
        return R"({"alpha":1,"p":2,"side":")" + side + R"(","delta":{"kind":"constant","value":)" +
               std::to_string(delta) + R"(},"theta":{"kind":"constant","value":0}})";
    }

    int exec(const std::string& args)
    {
        const std::string cmd = std::string(FOCKCIS_EXE) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    RunConfig config(Command c, const fs::path& spec, const fs::path& out)
    {
        RunConfig cfg;
        cfg.command = c;
        cfg.spec_path = spec;
        cfg.output_dir = out;
        return cfg;
    }

    fs::path dir_;
};

} // namespace

TEST_F(CliTest, AnalyzeReportsYesForTheBaseSequence)
{
    const auto spec = write("g.json", spec_text(0.0));
    EXPECT_EQ(exec("analyze --spec " + spec.string() + " --out " + (dir_ / "a").string()), 0);
    const json v = json::parse(read(dir_ / "a" / "verdict.json"));
    EXPECT_EQ(v.at("verdict").at("decision"), "yes");
    EXPECT_TRUE(v.contains("spec_hash"));
    EXPECT_TRUE(v.contains("version"));
    EXPECT_EQ(v.at("tolerances").at("rel_tol"), 1e-12);
}

TEST_F(CliTest, NoVerdictIsASuccessfulAnalysis)
{
    const auto spec = write("h.json", spec_text(0.5, "two"));
    EXPECT_EQ(exec("analyze --spec " + spec.string() + " --out " + (dir_ / "a").string()), 0);
    const json v = json::parse(read(dir_ / "a" / "verdict.json"));
    EXPECT_EQ(v.at("verdict").at("decision"), "no");
    EXPECT_EQ(v.at("verdict").at("failures"), json::array({"WINDOW"}));
}

TEST_F(CliTest, MissingAlphaExitsTwoWithPointer)
{
    const auto spec =
        write("bad.json", R"({"p":2,"side":"one","delta":{"kind":"constant","value":0},"theta":{"kind":"constant","value":0}})");
    EXPECT_EQ(exec("analyze --spec " + spec.string() + " --out " + (dir_ / "a").string()), 2);
    const json e = json::parse(read(dir_ / "stderr.txt"));
    EXPECT_EQ(e.at("error").at("pointer"), "/alpha");
    EXPECT_EQ(e.at("exit_code"), 2);
    EXPECT_FALSE(fs::exists(dir_ / "a" / "verdict.json"));
}

TEST_F(CliTest, UsageErrorsExitOne)
{
    EXPECT_EQ(exec("frobnicate"), 1);
    EXPECT_EQ(exec("analyze"), 1);
    EXPECT_EQ(exec("analyze --spec " + (dir_ / "missing.json").string()), 1);
    EXPECT_EQ(exec("--version"), 0);
    EXPECT_NE(read(dir_ / "stdout.txt").find(version()), std::string::npos);
}

TEST_F(CliTest, TruncationFailureExitsThree)
{
    const auto spec = write("g.json", spec_text(0.0));
    EXPECT_EQ(exec("product --spec " + spec.string() + " --out " + (dir_ / "p").string() +
                   " --hard-cap 2 --logmod-max 20"),
              3);
    const json e = json::parse(read(dir_ / "stderr.txt"));
    EXPECT_EQ(e.at("error").at("kind"), "truncation");
    const json& bound = e.at("error").at("achieved_bound");
    EXPECT_TRUE(bound == "inf" || bound.get<double>() > 1e-12) << bound;
}

TEST_F(CliTest, ReportsAreNotOverwrittenWithoutForce)
{
    const auto spec = write("g.json", spec_text(0.0));
    const std::string base = "analyze --spec " + spec.string() + " --out " + (dir_ / "a").string();
    EXPECT_EQ(exec(base), 0);
    std::ofstream(dir_ / "a" / "verdict.json") << "sentinel";
    EXPECT_EQ(exec(base), 1);
    EXPECT_EQ(read(dir_ / "a" / "verdict.json"), "sentinel");
    EXPECT_EQ(exec(base + " --force"), 0);
    EXPECT_NE(read(dir_ / "a" / "verdict.json"), "sentinel");
}

TEST_F(CliTest, EveryCommandIsByteIdenticalAcrossRunsAndThreadCounts)
{
    const auto spec = write("s.json", spec_text(0.25));
    const auto interp = write(
        "i.json", R"({"spec":)" + spec_text(0.25) + R"(,"data":[{"k":0,"re":1,"im":0},{"k":3,"re":-0.5,"im":0.25}]})");
    struct Case
    {
        Command command;
        fs::path spec;
    };
    const Case cases[] = {{Command::Analyze, spec},
                          {Command::Product, spec},
                          {Command::TMatrix, spec},
                          {Command::NormCheck, spec},
                          {Command::Interpolate, interp}};
    for (const auto& c : cases)
    {
        std::ostringstream out, err;
        auto a = config(c.command, c.spec, dir_ / "r1");
        a.threads = 1;
        a.samples = 40;
        a.size = 24;
        a.grid = 8;
        a.residual_margin = 5;
        auto b = a;
        b.output_dir = dir_ / "r2";
        b.threads = 3;
        ASSERT_EQ(run(a, out, err), 0) << err.str();
        ASSERT_EQ(run(b, out, err), 0) << err.str();
        for (const auto& f : report_files(c.command))
            EXPECT_EQ(read(dir_ / "r1" / f), read(dir_ / "r2" / f)) << f;
        fs::remove_all(dir_ / "r1");
        fs::remove_all(dir_ / "r2");
    }
}

TEST_F(CliTest, ProductCsvHasTheDocumentedColumns)
{
    const auto spec = write("s.json", spec_text(0.0));
    std::ostringstream out, err;
    auto cfg = config(Command::Product, spec, dir_ / "p");
    cfg.samples = 10;
    ASSERT_EQ(run(cfg, out, err), 0) << err.str();
    std::istringstream csv(read(dir_ / "p" / "product.csv"));
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "logmod_z,phase_z,log_abs_G,phase_G,coarse_ratio,fine_ratio,nearest_index");
    int rows = 0;
    for (std::string line; std::getline(csv, line);)
        rows += !line.empty();
    EXPECT_EQ(rows, 10);
}

TEST_F(CliTest, InterpolateReportsResiduals)
{
    const auto interp = write(
        "i.json", R"({"spec":)" + spec_text(0.0) + R"(,"data":[{"k":1,"re":1,"im":0},{"k":4,"re":0,"im":-2}]})");
    std::ostringstream out, err;
    auto cfg = config(Command::Interpolate, interp, dir_ / "i");
    cfg.grid = 8;
    ASSERT_EQ(run(cfg, out, err), 0) << err.str();
    const json r = json::parse(read(dir_ / "i" / "interpolate.json"));
    ASSERT_FALSE(r.at("residuals").empty());
    for (const auto& e : r.at("residuals"))
        EXPECT_LE(e.at("abs").get<double>(), 1e-8);
    EXPECT_GT(r.at("norm_fp").get<double>(), 0.0);
    EXPECT_EQ(r.at("samples"), "interpolate_samples.csv");
}

TEST_F(CliTest, InterpolateValidationPointsIntoTheSpec)
{
    const auto interp = write("i.json", R"({"spec":{"alpha":1,"p":2,"side":"one","delta":{"kind":"constant"},"theta":{"kind":"constant","value":0}},"data":[]})");
    std::ostringstream out, err;
    EXPECT_EQ(run(config(Command::Interpolate, interp, dir_ / "i"), out, err), 2);
    EXPECT_EQ(json::parse(err.str()).at("error").at("pointer"), "/spec/delta/value");
}

TEST_F(CliTest, ParseArgs)
{
    std::ostringstream out, err;
    const char* argv[] = {"fockcis", "tmatrix", "--spec", "x.json", "--out", "o", "--rel-tol", "1e-10",
                          "--seed",  "7",       "--size", "16",     "--force"};
    const auto p = parse_args(13, argv, out, err);
    ASSERT_TRUE(p.config.has_value());
    EXPECT_EQ(p.config->command, Command::TMatrix);
    EXPECT_EQ(p.config->pol.rel_tol, 1e-10);
    EXPECT_EQ(p.config->seed, 7u);
    EXPECT_EQ(p.config->size, 16);
    EXPECT_TRUE(p.config->force);

    const char* bad[] = {"fockcis", "analyze", "--spec", "x.json", "--rel-tol", "0.5"};
    const auto q = parse_args(6, bad, out, err);
    EXPECT_FALSE(q.config.has_value());
    EXPECT_EQ(q.exit_code, kUsage);
}
