#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "golden_cases.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using kgnu::cli::run;
using kgnu::testing::GoldenCase;
using kgnu::testing::golden_cases;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> csv_rows(const std::string &text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    rows.push_back(line);
  }
  return rows;
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

class Golden : public ::testing::TestWithParam<GoldenCase> {};

} // namespace

TEST_P(Golden, MatchesStoredOutput) {
  const auto &c = GetParam();
  const auto r = invoke(c.args);
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path path = fs::path(KGNU_GOLDEN_DIR) / (std::string(c.name) + ".txt");
  if (std::getenv("KGNU_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << r.out;
    GTEST_SKIP() << "rewrote " << path;
  }
  ASSERT_TRUE(fs::exists(path)) << "missing golden file " << path;
  EXPECT_EQ(r.out, slurp(path));
}

INSTANTIATE_TEST_SUITE_P(Commands, Golden, ::testing::ValuesIn(golden_cases()),
                         [](const auto &info) { return std::string(info.param.name); });

TEST(Cli, PotentialOriginRow) {
  const auto r = invoke({"potential", "--v1", "1", "--v2", "-0.3333333333", "--alpha", "1", "--q",
                         "1", "--xmin", "-5", "--xmax", "5", "--points", "201"});
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 201u);
  EXPECT_EQ(rows[100], "0,-1");
}

TEST(Cli, MetadataHeader) {
  const auto r = invoke({"potential", "--points", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("# solver=kgnu version=1.0.0 command=potential\n", 0), 0u);
  EXPECT_NE(r.out.find("# convention_erratum=true"), std::string::npos);
  EXPECT_NE(r.out.find("# params "), std::string::npos);
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"potential", "--points", "1"}).code, 2);
  EXPECT_EQ(invoke({"potential", "--q", "-0.25"}).code, 2);
  EXPECT_EQ(invoke({"verify", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"sweep", "--steps", "0"}).code, 2);
  EXPECT_EQ(invoke({"spectrum", "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--config", "/nonexistent/kgnu.cfg", "spectrum"}).code, 2);
}

TEST(Cli, SingularDeformationRejected) {
  const auto r = invoke({"spectrum", "--q", "0"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("1/q"), std::string::npos);
}

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  const auto v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("1.0.0"), std::string::npos);
}

TEST(Cli, SpectrumAnchorRow) {
  const auto r = invoke({"spectrum", "--mass", "1", "--alpha", "1", "--q", "1", "--v1", "2",
                         "--v2", "0"});
  ASSERT_EQ(r.code, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_FALSE(rows.empty());
  const auto cells = split(rows[0], ',');
  ASSERT_EQ(cells.size(), 7u);
  EXPECT_EQ(cells[0], "0");
  EXPECT_NEAR(std::stod(cells[1]), -0.68540378772324802, 1e-10);
  EXPECT_EQ(cells[5], "true");
  EXPECT_EQ(cells[6], "");
}

TEST(Cli, FreeSpectrumIsHeaderOnly) {
  const auto r = invoke({"spectrum", "--v1", "0", "--v2", "0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(csv_rows(r.out).empty());
  EXPECT_NE(r.out.find("n,E,Ebar2,mu,nu,physical,reasons"), std::string::npos);
}

TEST(Cli, VerifyToleranceBreach) {
  const auto ok = invoke({"verify", "--q", "1", "--v1", "2", "--v2", "0", "--n-max", "0"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto bad = invoke({"verify", "--q", "1", "--v1", "2", "--v2", "0", "--n-max", "0",
                           "--tolerance", "1e-12"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, WavefunctionNormalizedOnEmittedGrid) {
  const auto r = invoke({"wavefunction", "--v1", "2", "--points", "2001"});
  ASSERT_EQ(r.code, 0);
  double sum = 0.0, xp = 0.0, yp = 0.0;
  bool first = true;
  int sign_changes = 0;
  for (const auto &row : csv_rows(r.out)) {
    const auto c = split(row, ',');
    const double x = std::stod(c[0]), y = std::stod(c[1]);
    if (!first) {
      sum += 0.5 * (x - xp) * (y * y + yp * yp);
      if (y * yp < 0.0) ++sign_changes;
    }
    first = false;
    xp = x;
    yp = y;
  }
  EXPECT_NEAR(sum, 1.0, 1e-4);
  EXPECT_EQ(sign_changes, 0);
}

TEST(Cli, WavefunctionMissingLevel) {
  const auto r = invoke({"wavefunction", "--v1", "2", "--n", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, JsonDocumentShape) {
  const auto r = invoke({"wavefunction", "--points", "11", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["schema"], "kgnu/1");
  EXPECT_EQ(doc["meta"]["command"], "wavefunction");
  EXPECT_EQ(doc["meta"]["convention_erratum"], true);
  EXPECT_TRUE(doc["meta"]["params"].is_object());
  EXPECT_EQ(doc["columns"], (nlohmann::json{"x", "psi"}));
  EXPECT_EQ(doc["rows"].size(), 11u);
}

TEST(Cli, ConfigFileMirrorsFlags) {
  const fs::path cfg = fs::temp_directory_path() / "kgnu_cli_test.cfg";
  std::ofstream(cfg) << "# sweep settings\nq = 1, 0.5\nn=0\nsteps=4\nfrom=1\nto=2\n";
  const auto a = invoke({"--config", cfg.string(), "sweep"});
  const auto b = invoke({"sweep", "--q", "1", "--q", "0.5", "--n", "0", "--steps", "4", "--from",
                         "1", "--to", "2"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto c = invoke({"--config", cfg.string(), "sweep", "--steps", "2"});
  EXPECT_EQ(csv_rows(c.out).size(), 6u);
  std::ofstream(cfg) << "garbage line\n";
  EXPECT_EQ(invoke({"--config", cfg.string(), "sweep"}).code, 2);
  fs::remove(cfg);
}

TEST(Cli, OutputFileMatchesStream) {
  const fs::path dir = fs::temp_directory_path() / "kgnu_cli_out";
  fs::create_directories(dir);
  const auto streamed = invoke({"spectrum", "--v1", "2"});
  const auto written = invoke({"spectrum", "--v1", "2", "--output", (dir / "s.csv").string()});
  ASSERT_EQ(written.code, 0);
  EXPECT_EQ(slurp(dir / "s.csv"), streamed.out);
  ASSERT_EQ(invoke({"potential", "--q", "1", "--q", "0.5", "--points", "3", "--output",
                    (dir / "v.csv").string()})
                .code,
            0);
  EXPECT_TRUE(fs::exists(dir / "v_q1.csv"));
  EXPECT_TRUE(fs::exists(dir / "v_q0.5.csv"));
  fs::remove_all(dir);
}

TEST(Cli, DeterministicAcrossThreadCounts) {
  const std::vector<std::string> args{"sweep", "--q", "1", "--q", "0.5", "--n", "0", "--n", "1",
                                      "--steps", "12"};
  setenv("KGNU_THREADS", "1", 1);
  EXPECT_EQ(kgnu::cli::thread_budget(), 1u);
  const auto serial = invoke(args);
  setenv("KGNU_THREADS", "8", 1);
  const auto parallel = invoke(args);
  const auto again = invoke(args);
  unsetenv("KGNU_THREADS");
  EXPECT_EQ(serial.out, parallel.out);
  EXPECT_EQ(parallel.out, again.out);
}

TEST(Cli, NumberFormatting) {
  EXPECT_EQ(kgnu::cli::format_number(-0.0), "0");
  EXPECT_EQ(kgnu::cli::format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(kgnu::cli::format_number(-1.0), "-1");
}
