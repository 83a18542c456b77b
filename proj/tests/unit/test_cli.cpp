#include <json.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " MIXLIM_CLI_PATH " " + args;
    CliRun r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mixlim_cli_test_" + std::to_string(getpid()));
    fs::create_directories(dir);
    return dir / name;
}

std::string values_column(const std::string& csv) {
    std::string out;
    for (const auto& l : lines(csv)) out += l.substr(l.find(',') + 1) + "\n";
    return out;
}

}  // namespace

TEST(Classify, JsonZoneOne) {
    const CliRun r = run("classify --alpha 0.5 --gamma1 1 --gamma2 2 --format json");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_EQ(j["fluctuation"], "clt_full");
    EXPECT_EQ(j["lln"], "lln_full");
    EXPECT_EQ(j["zone"], 1);
}

TEST(Classify, BoundaryExitsTwo) {
    const CliRun r = run("classify --alpha 0.5 --gamma1 1 --gamma2 1.5");
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("boundary"), std::string::npos);
}

TEST(Classify, BadFlagsExitOneWithUsage) {
    CliRun r = run("classify --alpha 2.5 --gamma1 1 --gamma2 1 2>&1");
    EXPECT_EQ(r.code, 1);
    r = run("classify --alpha 0.5 --gamma1 1 2>&1");
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("--gamma2"), std::string::npos);
    r = run("classify --alpha 0.5 --gamma1 1 --gamma2 2 2>/dev/null");
    EXPECT_EQ(r.code, 0);
    r = run("frobnicate 2>&1");
    EXPECT_EQ(r.code, 1);
}

TEST(Classify, HeavyMeanHasNoZone) {
    const CliRun r = run("classify --alpha 1.5 --gamma1 2 --gamma2 0.5 --format json");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["fluctuation"], "stable");
    EXPECT_TRUE(j["zone"].is_null());
}

TEST(Simulate, RowCountHeaderAndMetadata) {
    const auto out = scratch("z1.csv");
    const CliRun r = run("simulate --alpha 0.5 --gamma1 1 --gamma2 2 --n 100000 --reps 1000 --seed 42 --out " +
                      out.string());
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(slurp(out));
    ASSERT_EQ(rows.size(), 1001u);
    EXPECT_EQ(rows[0], "replicate,value");
    EXPECT_EQ(rows[1].substr(0, 2), "0,");
    const auto meta = nlohmann::json::parse(slurp(out.string() + ".meta.json"));
    EXPECT_EQ(meta["schema"], 1);
    EXPECT_EQ(meta["config"]["n"], 100000);
    EXPECT_EQ(meta["config"]["seed"], 42);
    EXPECT_EQ(meta["plan"]["limit"]["law"], "normal");
    EXPECT_FALSE(meta["version"].get<std::string>().empty());
}

TEST(Simulate, DeterministicAndThreadInvariant) {
    const std::string base = "simulate --alpha 0.5 --gamma1 2 --gamma2 0.6 --n 20000 --reps 200 --seed 7";
    const auto out = scratch("det.csv");
    const std::string meta = out.string() + ".meta.json";
    std::vector<std::pair<std::string, std::string>> runs;
    for (const char* threads : {"1", "1", "8"}) {
        ASSERT_EQ(run(base + " --threads " + threads + " --out " + out.string()).code, 0);
        runs.emplace_back(slurp(out), slurp(meta));
    }
    EXPECT_EQ(runs[0], runs[1]);
    EXPECT_EQ(values_column(runs[0].first), values_column(runs[2].first));
    EXPECT_EQ(runs[0], runs[2]);
}

TEST(Simulate, ThreadsFromEnvironment) {
    const std::string base = "simulate --alpha 0.5 --gamma1 2 --gamma2 0.6 --n 5000 --reps 50 --seed 1";
    const auto a = scratch("env_a.csv"), b = scratch("env_b.csv");
    ASSERT_EQ(run(base + " --out " + a.string(), "MIXLIM_THREADS=3").code, 0);
    ASSERT_EQ(run(base + " --out " + b.string(), "MIXLIM_THREADS=1").code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(run(base + " --out " + a.string() + " 2>/dev/null", "MIXLIM_THREADS=lots").code, 1);
}

TEST(Simulate, BoundaryAndIoErrors) {
    EXPECT_EQ(run("simulate --alpha 0.5 --gamma1 1 --gamma2 1.5 --n 1000 --reps 10 --out " +
                  scratch("never.csv").string() + " 2>/dev/null")
                  .code,
              2);
    EXPECT_EQ(run("simulate --alpha 0.5 --gamma1 1 --gamma2 2 --n 1000 --reps 10 "
                  "--out /nonexistent-dir/x.csv 2>/dev/null")
                  .code,
              4);
    EXPECT_EQ(run("simulate --alpha 0.5 --gamma1 1 --gamma2 2 --n 1 --reps 10 --out " +
                  scratch("n1.csv").string() + " 2>/dev/null")
                  .code,
              1);
}

TEST(Verify, ZoneOneDefaultsPass) {
    const CliRun r = run("verify --alpha 0.5 --gamma1 1 --gamma2 2");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    ASSERT_EQ(j["rungs"].size(), 2u);
    const auto& top = j["rungs"][1];
    EXPECT_EQ(top["test"], "ks_normal");
    EXPECT_LT(top["ks"]["statistic"].get<double>(), top["ks"]["critical_value"].get<double>());
}

TEST(Verify, StableZoneTwoSamplePasses) {
    const CliRun r = run("verify --alpha 0.5 --gamma1 2 --gamma2 0.6 --n 100000");
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["rungs"][0]["test"], "ks_two_sample_stable");
    EXPECT_LT(j["rungs"][0]["ecf_distance"].get<double>(), 0.1);
}

TEST(Verify, ForcedNormalFailsInStableZone) {
    const CliRun r = run("verify --alpha 0.5 --gamma1 2 --gamma2 0.3 --n 100000 --force-test normal");
    EXPECT_EQ(r.code, 3);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_FALSE(j["pass"].get<bool>());
}

TEST(Verify, LlnLadderWithEnvAndReportFile) {
    const auto out = scratch("lln.json");
    const CliRun r = run("verify --alpha 0.5 --gamma1 1 --gamma2 2 --force-test lln-full --reps 100 "
                      "--ladder 1000,10000,100000 --out " + out.string());
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(slurp(out));
    EXPECT_EQ(j["rungs"].size(), 3u);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(run("verify --alpha 0.5 --gamma1 1 --gamma2 2 --force-test lln-full --ladder 1000,2000 "
                  "2>/dev/null")
                  .code,
              1);
}

TEST(PhaseGrid, AllSixZonesAtHalf) {
    const CliRun r = run("phase-grid --alpha 0.5 --gamma1 0.05:3:0.05 --gamma2 0.05:3:0.05");
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3601u);
    EXPECT_EQ(rows[0], "gamma1,gamma2,zone,fluctuation,lln");
    EXPECT_EQ(rows[1], "0.05,0.05,1,clt_full,lln_full");
    std::set<int> zones;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string g1, g2, zone;
        std::getline(ss, g1, ',');
        std::getline(ss, g2, ',');
        std::getline(ss, zone, ',');
        zones.insert(std::stoi(zone));
    }
    for (int z = 1; z <= 6; ++z) EXPECT_TRUE(zones.count(z)) << z;
}

TEST(PhaseGrid, HeavyMeanHasNoZones) {
    const CliRun r = run("phase-grid --alpha 1.5 --gamma1 0.05:3:0.05 --gamma2 0.05:3:0.05");
    ASSERT_EQ(r.code, 0);
    const auto rows = lines(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string g1, g2, zone, fl, lln;
        std::getline(ss, g1, ',');
        std::getline(ss, g2, ',');
        std::getline(ss, zone, ',');
        std::getline(ss, fl, ',');
        std::getline(ss, lln, ',');
        EXPECT_EQ(zone, "0");
        EXPECT_EQ(lln, "lln_full");
        if (fl == "boundary") {
            // only on the lines gamma2 = (2 - alpha) gamma1 or gamma2 = 1 - alpha gamma1
            const double a = std::stod(g1), b = std::stod(g2);
            EXPECT_TRUE(std::abs(b - 0.5 * a) < 1e-9 || std::abs(b - (1 - 1.5 * a)) < 1e-9) << rows[i];
        } else {
            EXPECT_TRUE(fl == "clt_full" || fl == "stable") << rows[i];
        }
    }
}

TEST(PhaseGrid, EmptyRangesExitOne) {
    EXPECT_EQ(run("phase-grid --alpha 0.5 --gamma1 0:1:2 --gamma2 0:1:0.1 2>/dev/null").code, 1);
    EXPECT_EQ(run("phase-grid --alpha 0.5 --gamma1 1:0:0.1 --gamma2 0:1:0.1 2>/dev/null").code, 1);
    EXPECT_EQ(run("phase-grid --alpha 0.5 --gamma1 0:1:0 --gamma2 0:1:0.1 2>/dev/null").code, 1);
    EXPECT_EQ(run("phase-grid --alpha 0.5 --gamma1 0:1 --gamma2 0:1:0.1 2>/dev/null").code, 1);
}

TEST(Moments, JsonReport) {
    const CliRun r = run("moments --alpha 0.5 --gamma1 1 --gamma2 2 --n 10000 --format json");
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_NEAR(j["mu1"].get<double>(), 1.0, 1e-15);
    EXPECT_GT(j["var_z"].get<double>(), 0.0);
}
