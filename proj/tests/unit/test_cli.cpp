#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "lfc/light_field_io.hpp"
#include "util.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun lfc4(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = lfc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  const auto b = lfc::readFileBytes(p);
  return std::string(b.begin(), b.end());
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = testutil::scratchDir("cli");
    views = (dir / "lf" / "v_{s}_{t}.pfm").string();
    const CliRun r = lfc4({"synth", "--out", views, "--rows", "3", "--cols", "3", "--width", "40",
                        "--height", "24", "--seed", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir;
  std::string views;
};

}  // namespace

TEST_F(Cli, EncodeDecodeRoundTrip) {
  const std::string out = (dir / "a.lfc4").string();
  CliRun r = lfc4({"encode", "--views", views, "--rows", "3", "--cols", "3", "-o", out, "-d", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("bytes"), std::string::npos);
  EXPECT_NE(r.out.find("bpp"), std::string::npos);
  EXPECT_TRUE(fs::exists(out + ".meta.txt"));
  EXPECT_NE(slurp(out + ".meta.txt").find("frame1.tritan.lambda="), std::string::npos);
  EXPECT_NE(slurp(out + ".manifest.json").find("\"seed\": 1"), std::string::npos);

  r = lfc4({"decode", "-i", out, "--out-views", (dir / "dec" / "v{s}{t}.pfm").string(),
            "--out-acquired", (dir / "dec" / "a{n}.pfm").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "dec" / "v22.pfm"));
  EXPECT_TRUE(fs::exists(dir / "dec" / "a1.pfm"));
  EXPECT_TRUE(fs::exists(dir / "dec" / "decode.manifest.json"));
}

TEST_F(Cli, OutputsAndManifestAreByteIdenticalAcrossRuns) {
  const std::vector<std::string> base = {"encode", "--views", views, "--rows", "3", "--cols", "3",
                                         "--seed", "9", "-o"};
  auto a = base;
  a.push_back((dir / "x.lfc4").string());
  auto b = base;
  b.push_back((dir / "x.lfc4").string());
  ASSERT_EQ(lfc4(a).code, 0);
  const std::string first = slurp(dir / "x.lfc4");
  const std::string firstManifest = slurp(dir / "x.lfc4.manifest.json");
  ASSERT_EQ(lfc4(b).code, 0);
  EXPECT_EQ(slurp(dir / "x.lfc4"), first);
  EXPECT_EQ(slurp(dir / "x.lfc4.manifest.json"), firstManifest);
}

TEST_F(Cli, MissingViewIsAnIoError) {
  fs::remove(dir / "lf" / "v_2_1.pfm");
  const CliRun r = lfc4({"encode", "--views", views, "--rows", "3", "--cols", "3", "-o",
                      (dir / "a.lfc4").string()});
  EXPECT_EQ(r.code, lfc::cli::kExitIo);
  EXPECT_NE(r.err.find("missing view (2,1)"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "a.lfc4"));
}

TEST_F(Cli, TruncatedFileFailsCleanlyWithoutOutput) {
  const std::string out = (dir / "a.lfc4").string();
  ASSERT_EQ(lfc4({"encode", "--views", views, "--rows", "3", "--cols", "3", "-o", out}).code, 0);
  const std::string bytes = slurp(out);
  std::ofstream(dir / "t.lfc4", std::ios::binary).write(bytes.data(), bytes.size() / 2);
  const CliRun r = lfc4({"decode", "-i", (dir / "t.lfc4").string(), "--out-views",
                      (dir / "bad" / "v{s}{t}.pfm").string()});
  EXPECT_EQ(r.code, lfc::cli::kExitFormat);
  EXPECT_NE(r.err.find("truncated"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir / "bad"));
}

TEST_F(Cli, UsageAndValidationErrors) {
  EXPECT_EQ(lfc4({}).code, lfc::cli::kExitUsage);
  EXPECT_EQ(lfc4({"encode", "--bogus"}).code, lfc::cli::kExitUsage);
  EXPECT_EQ(lfc4({"encode", "--help"}).code, lfc::cli::kExitOk);
  const CliRun r = lfc4({"encode", "--views", views, "--rows", "3", "--cols", "3", "-d", "9", "-o",
                      (dir / "a.lfc4").string()});
  EXPECT_EQ(r.code, lfc::cli::kExitInvalidInput);
  EXPECT_NE(r.err.find("[cli]"), std::string::npos);
  EXPECT_EQ(lfc4({"encode", "--views", views, "--rows", "3", "--cols", "3", "-n", "9", "-o",
                  (dir / "a.lfc4").string()})
                .code,
            lfc::cli::kExitInvalidInput);
}

TEST_F(Cli, ConfigFileFillsGapsAndFlagsWin) {
  const fs::path cfg = dir / "job.cfg";
  std::ofstream(cfg) << "# job\nviews = " << views << "\nrows=3\ncols=3\ndistortion=5\n";
  const std::string out = (dir / "c.lfc4").string();
  ASSERT_EQ(lfc4({"encode", "--config", cfg.string(), "-o", out}).code, 0);
  EXPECT_NE(slurp(out + ".meta.txt").find("\nd=5\n"), std::string::npos);
  ASSERT_EQ(lfc4({"encode", "--config", cfg.string(), "-o", out, "-d", "2"}).code, 0);
  EXPECT_NE(slurp(out + ".meta.txt").find("\nd=2\n"), std::string::npos);

  std::ofstream(cfg) << "no_such_key=1\n";
  EXPECT_EQ(lfc4({"encode", "--config", cfg.string(), "--views", views, "-o", out}).code,
            lfc::cli::kExitInvalidInput);
}

TEST_F(Cli, EvalWritesSweepAndBjontegaard) {
  const std::string csv = (dir / "s.csv").string();
  CliRun r = lfc4({"eval", "--views", views, "--rows", "3", "--cols", "3", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream rows(slurp(csv));
  std::string line;
  size_t count = 0;
  while (std::getline(rows, line)) ++count;
  EXPECT_EQ(count, 6u);  // header + d = 1..5

  r = lfc4({"eval", "--reference", csv, "--test", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("BD-Rate: 0.000000 %"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("BD-PSNR: 0.000000 dB"), std::string::npos) << r.out;

  EXPECT_EQ(lfc4({"eval"}).code, lfc::cli::kExitInvalidInput);
  EXPECT_EQ(lfc4({"eval", "--views", (dir / "none" / "{s}{t}.pfm").string()}).code,
            lfc::cli::kExitIo);
}

TEST_F(Cli, ExportAndImportAcquired) {
  const std::string ex = (dir / "ex").string();
  CliRun r = lfc4({"export-acquired", "--views", views, "--rows", "3", "--cols", "3", "--out-dir",
                ex, "--chroma-420"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("10 bits (4:2:0), re-import verified"), std::string::npos) << r.out;
  EXPECT_NE(slurp(dir / "ex" / "frame_0.meta.txt").find("chroma420=1"), std::string::npos);
  r = lfc4({"import-acquired", "--in-dir", ex, "--out-views", (dir / "im" / "{s}{t}.pfm").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "im" / "22.pfm"));
}

TEST_F(Cli, AcquireWritesImagesAndPatterns) {
  const CliRun r = lfc4({"acquire", "--views", views, "--rows", "3", "--cols", "3", "--patterns",
                      "pinhole-pair", "--out-dir", (dir / "acq").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "acq" / "acquired_1.pfm"));
  EXPECT_EQ(slurp(dir / "acq" / "pattern_0.txt").find("#"), 0u);
}
