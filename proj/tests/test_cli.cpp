#include "memwave/experiments.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace memwave;

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("memwave-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(MEMWAVE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text)
{
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
}

} // namespace

TEST(Config, ParsesSections)
{
    const auto c = parse_config_string(R"(
[experiment]
name = absorb
seed = 7
radii = 1, 2.5, 10
horizon = 12

[process]
modes = 16
dt = 0.002
kernel = exponential
kernel_eps = 0.5

[covering]
toy = sine
depth = 4
)");
    EXPECT_EQ(c.name, "absorb");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.radii, (std::vector<double>{1.0, 2.5, 10.0}));
    EXPECT_EQ(c.horizon, 12.0);
    EXPECT_EQ(c.process.modes, 16u);
    EXPECT_EQ(c.process.kernel, "exponential");
    EXPECT_EQ(c.covering.toy, "sine");
    EXPECT_EQ(c.covering.depth, 4);
    EXPECT_EQ(c.process.to_process_config().kernel.name, "exponential");
}

TEST(Config, DefaultsFollowExperiment)
{
    const auto c = parse_config_string("", "attractor-radii");
    EXPECT_EQ(c.members, 8u);
    EXPECT_EQ(c.horizon, 30.0);
    EXPECT_EQ(parse_config_string("", "quasistability").members, 20u);
}

TEST(Config, UnknownKeysAndSectionsAreUsageErrors)
{
    EXPECT_THROW(parse_config_string("[experiment]\ncolour = red\n"), UsageError);
    EXPECT_THROW(parse_config_string("[plotting]\nx = 1\n"), UsageError);
    EXPECT_THROW(parse_config_string("[experiment]\nseed = many\n"), UsageError);
    EXPECT_THROW(parse_config_string("[experiment]\nradii = 1, x\n"), UsageError);
    EXPECT_THROW(parse_config_string("[experiment\n"), UsageError);
}

TEST(Config, ValidationRejectsBadValues)
{
    auto c = default_config("absorb");
    EXPECT_NO_THROW(c.validate());
    c.horizon = 0.0;
    EXPECT_THROW(c.validate(), UsageError);
    c = default_config("absorb");
    c.horizon = 40.0;
    EXPECT_THROW(c.validate(), UsageError);
    c = default_config("nonsense");
    EXPECT_THROW(c.validate(), UsageError);
    c = default_config("absorb");
    c.process.kernel = "gaussian";
    EXPECT_THROW(c.process.to_process_config(), UsageError);
}

TEST(Config, ShippedConfigsLoad)
{
    for (const auto& name : experiment_names()) {
        const auto c = load_config(fs::path(MEMWAVE_CONFIG_DIR) / (name + ".ini"), name);
        EXPECT_EQ(c.name, name);
        EXPECT_NO_THROW(c.validate()) << name;
    }
    EXPECT_THROW(load_config("/nonexistent/config.ini"), UsageError);
}

TEST(Harness, ParallelMapKeepsOrderAndPropagates)
{
    setenv("MEMWAVE_THREADS", "3", 1);
    EXPECT_EQ(thread_count(), 3u);
    const auto v = parallel_map(20, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < v.size(); ++i)
        EXPECT_EQ(v[i], static_cast<int>(i * i));
    EXPECT_THROW(parallel_map(8,
                              [](std::size_t i) {
                                  if (i == 5)
                                      throw NumericalFault("boom");
                                  return 0;
                              }),
                 NumericalFault);
    unsetenv("MEMWAVE_THREADS");
}

TEST(Harness, NoGrowthDetector)
{
    std::vector<double> flat(40, 1.0), decaying(40), growing(40);
    for (std::size_t i = 0; i < 40; ++i) {
        decaying[i] = std::exp(-0.1 * i);
        growing[i] = 1.0 + 0.1 * i;
    }
    EXPECT_TRUE(no_growth(flat));
    EXPECT_TRUE(no_growth(decaying));
    EXPECT_FALSE(no_growth(growing));
}

TEST(Run, FreeOscillationPasses)
{
    auto c = default_config("free-oscillation");
    c.output.clear();
    const auto r = run(c);
    EXPECT_TRUE(r.pass) << r.summary_line();
    EXPECT_EQ(r.summary_line().rfind("experiment=free-oscillation pass=1 seed=1", 0), 0u);
}

TEST(Run, DeterministicArtifacts)
{
    const auto a = scratch_dir("det-a"), b = scratch_dir("det-b");
    for (const auto& name : {"kernel-audit", "covering-demo"}) {
        auto c = default_config(name);
        c.covering.samples = 2000;
        c.output = a.string();
        const auto ra = run(c);
        c.output = b.string();
        const auto rb = run(c);
        EXPECT_EQ(ra.summary_line(), rb.summary_line());
        for (const auto& entry : fs::directory_iterator(a / name)) {
            const auto other = b / name / entry.path().filename();
            ASSERT_TRUE(fs::exists(other));
            EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path();
        }
    }
}

TEST(Radii, UnforcedLinearFlowDecaysToZero)
{
    auto c = default_config("attractor-radii");
    c.members = 2;
    c.process.modes = 8;
    c.process.nonlinearity = "zero";
    c.process.forcing_amplitude = 0.0;
    const auto rep = estimate_radii(c, Process(c.process.to_process_config()));
    EXPECT_FALSE(rep.inconclusive);
    for (double r : rep.radius)
        EXPECT_LT(r, 1e-2);
}

TEST(Cli, ExitStatusContract)
{
    const auto dir = scratch_dir("cli");
    const std::string out = " --out " + dir.string();
    EXPECT_EQ(run_cli("free-oscillation --config " + std::string(MEMWAVE_CONFIG_DIR) + "/free-oscillation.ini" + out), 0);
    EXPECT_EQ(run_cli("no-such-experiment" + out), 2);
    EXPECT_EQ(run_cli("free-oscillation --config /nonexistent.ini" + out), 2);
    EXPECT_EQ(run_cli("free-oscillation --bogus-flag"), 2);
    const auto strict = write_file(dir, "strict.ini",
                                   "[experiment]\ntolerance = 1e-30\n[process]\nkernel = zero\nnonlinearity = zero\n");
    EXPECT_EQ(run_cli("free-oscillation --config " + strict.string() + out), 1);
    const auto fragile = write_file(dir, "fragile.ini",
                                    "[experiment]\nradius = 5\nhorizon = 1\n[process]\nmodes = 8\nblowup_threshold = 1e-3\n");
    EXPECT_EQ(run_cli("regularity-ladder --config " + fragile.string() + out), 3);
    const auto unknown = write_file(dir, "unknown.ini", "[experiment]\nfoo = 1\n");
    EXPECT_EQ(run_cli("free-oscillation --config " + unknown.string() + out), 2);
}

TEST(Cli, SeedAndOutputOverrides)
{
    const auto dir = scratch_dir("override");
    EXPECT_EQ(run_cli("kernel-audit --seed 9 --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "kernel-audit" / "audit.csv"));
}
