#include <gtest/gtest.h>

#include <sstream>

#include "commands.h"
#include "config_file.h"
#include "json.hpp"
#include "senti/error.h"
#include "senti/metrics.h"
#include "test_support.h"

namespace senti::cli {
namespace {

namespace fs = std::filesystem;
using senti::testing::read_file;
using senti::testing::TempDir;
using senti::testing::write_file;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

// Copies the shipped toy corpus into `dir`.
void copy_toy_data(const fs::path& dir) {
  fs::copy(fs::path(SENTI_SOURCE_DIR) / "data" / "toy", dir,
           fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

TEST(CliTest, MissingInputFileExitsTwoNamingPath) {
  TempDir dir;
  const auto missing = (dir / "nope.tsv").string();
  const Result r = run_cli({"preprocess", "--input", missing, "--output",
                            (dir / "o.tsv").string()});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST(CliTest, MissingConfigExitsTwo) {
  const Result r = run_cli({"--config", "/nonexistent/run.ini", "train"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("/nonexistent/run.ini"), std::string::npos);
}

TEST(CliTest, UnknownVerbIsUsageError) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({}).code, kExitUsage);
}

TEST(CliTest, PreprocessCountsDuplicates) {
  TempDir dir;
  write_file(dir / "train.tsv",
             "id\ttext\tlabel\n1\tsame\tPositive\n2\tsame\tPositive\n3\tsame\tPositive\n"
             "4\t@u other https://x\tNegative\n");
  const Result r = run_cli({"preprocess", "--input", (dir / "train.tsv").string(),
                            "--output", (dir / "out.tsv").string(), "--stats",
                            (dir / "stats.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto stats = nlohmann::json::parse(read_file(dir / "stats.json"));
  EXPECT_EQ(stats.at("rows_in"), 4);
  EXPECT_EQ(stats.at("duplicates_removed"), 2);
  EXPECT_EQ(stats.at("rows_out"), 2);
  EXPECT_NE(read_file(dir / "out.tsv").find("USER other URL"), std::string::npos);
}

TEST(CliTest, PreprocessOfficialSizeMismatchFails) {
  TempDir dir;
  write_file(dir / "train.tsv", "id\ttext\tlabel\n1\tx\tPositive\n");
  const Result r = run_cli({"preprocess", "--input", (dir / "train.tsv").string(),
                            "--output", (dir / "o.tsv").string(), "--official"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("32566"), std::string::npos) << r.err;
}

TEST(CliTest, InvalidWarmupRejected) {
  TempDir dir;
  copy_toy_data(dir.path());
  write_file(dir / "bad.ini",
             "[data]\ntrain = train.tsv\n[finetune]\nwarmup_ratio = -1\nepochs = 0\n");
  const Result r = run_cli({"--config", (dir / "bad.ini").string(), "train"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("warmup_ratio"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("epochs"), std::string::npos) << r.err;
}

TEST(CliTest, TrainPredictAndCorruptedHandle) {
  TempDir dir;
  copy_toy_data(dir.path());
  const std::string cfg = (dir / "toy.ini").string();
  const std::string out = (dir / "out").string();
  Result r = run_cli({"--config", cfg, "--out-dir", out, "train", "--name", "m"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string run_id = r.out.substr(5, r.out.find('\n') - 5);
  const fs::path model = fs::path(out) / "runs" / run_id / "model.bin";
  ASSERT_TRUE(fs::exists(model)) << model;
  EXPECT_TRUE(fs::exists(fs::path(out) / "runs" / run_id / "preds" / "test.tsv"));

  r = run_cli({"predict", "--model", model.string(), "--input",
               (dir / "dev.tsv").string(), "--split", "dev", "--output",
               (dir / "dev.pred").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const std::string preds = read_file(dir / "dev.pred");
  EXPECT_EQ(std::count(preds.begin(), preds.end(), '\n'), 61);  // header + 60

  r = run_cli({"predict", "--model", model.string(), "--input",
               (dir / "test.tsv").string(), "--split", "test", "--output",
               (dir / "test.pred").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "test.pred"));

  std::string bytes = read_file(model);
  bytes[bytes.size() / 2] ^= 0x10;
  write_file(dir / "corrupt.bin", bytes);
  r = run_cli({"predict", "--model", (dir / "corrupt.bin").string(), "--input",
               (dir / "dev.tsv").string(), "--split", "dev", "--output",
               (dir / "x.pred").string()});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_NE(r.err.find("corrupt"), std::string::npos) << r.err;

  r = run_cli({"evaluate", "--pred", (dir / "dev.pred").string(), "--gold",
               (dir / "dev.tsv").string(), "--split", "dev"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("micro_f1"), std::string::npos);
}

// Gold and three prediction files whose majority vote reproduces the
// published test confusion matrix.
TEST(CliTest, EnsembleOfThreeFilesReproducesPublishedScore) {
  TempDir dir;
  const std::array<std::array<int, 3>, 3> cm = {
      {{2770, 244, 324}, {598, 412, 267}, {331, 128, 1633}}};
  std::string gold = "id\ttext\tlabel\n";
  std::string best = "id\tlabel\n", second = best, third = best;
  int n = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t p = 0; p < 3; ++p) {
      for (int k = 0; k < cm[t][p]; ++k, ++n) {
        const std::string id = "t" + std::to_string(n);
        gold += id + "\ttext " + id + "\t" + std::string(to_string(label_at(t))) + "\n";
        best += id + "\t" + std::string(to_string(label_at(p))) + "\n";
        // The second model agrees with the best on odd rows only; the third
        // always predicts something else, so the best model decides.
        const std::size_t other = (p + 1) % 3;
        second += id + "\t" + std::string(to_string(label_at(n % 2 ? p : (p + 2) % 3))) + "\n";
        third += id + "\t" + std::string(to_string(label_at(other))) + "\n";
      }
    }
  }
  write_file(dir / "test.tsv", gold);
  write_file(dir / "a.tsv", best);
  write_file(dir / "b.tsv", second);
  write_file(dir / "c.tsv", third);
  const Result r = run_cli({"ensemble", "--model-pred", (dir / "a.tsv").string(),
                            "--model-pred", (dir / "b.tsv").string(), "--model-pred",
                            (dir / "c.tsv").string(), "--output", (dir / "e.tsv").string(),
                            "--gold", (dir / "test.tsv").string(), "--gold-split", "test",
                            "--metrics", (dir / "m.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto m = nlohmann::json::parse(read_file(dir / "m.json"));
  EXPECT_EQ(m.at("micro_f1").get<double>(), 0.7179);
  EXPECT_EQ(round_half_even(m.at("micro_f1").get<double>(), 3), 0.718);
  EXPECT_EQ(m.at("n"), 6707);
  EXPECT_EQ(m.at("confusion")[1][1], 412);
}

TEST(CliTest, EnsembleSingleFilePassthroughAndLengthMismatch) {
  TempDir dir;
  write_file(dir / "a.tsv", "id\tlabel\n1\tPositive\n2\tNeutral\n");
  write_file(dir / "b.tsv", "id\tlabel\n1\tPositive\n");
  Result r = run_cli({"ensemble", "--model-pred", (dir / "a.tsv").string(), "--output",
                      (dir / "e.tsv").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(read_file(dir / "e.tsv"), read_file(dir / "a.tsv"));
  r = run_cli({"ensemble", "--model-pred", (dir / "a.tsv").string(), "--model-pred",
               (dir / "b.tsv").string(), "--output", (dir / "f.tsv").string()});
  EXPECT_EQ(r.code, kExitFailure);
}

TEST(CliTest, ReportOnEmptyDirectory) {
  TempDir dir;
  fs::create_directories(dir / "runs");
  const Result r = run_cli({"report", "--runs-dir", (dir / "runs").string(), "--output",
                            (dir / "report").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(read_file(dir / "report.md").find("No runs found"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
}

TEST(RunConfigTest, ResolvesPathsAndOverridesSeed) {
  TempDir dir;
  const RunConfigFile c = parse_run_config(
      "[run]\nmaster_seed = 7\n[data]\ntrain = d/train.tsv\n[finetune]\nepochs = 2\n"
      "[finetune.stage1]\nbatch_size = 8\n[sweep]\nseeds = 1, 2, 3\n",
      dir.path(), 99);
  EXPECT_EQ(c.master_seed, 99u);
  EXPECT_EQ(c.finetune.seed, 99u);
  EXPECT_EQ(c.data.at(SplitName::kTrain), dir.path() / "d" / "train.tsv");
  EXPECT_EQ(c.out_dir, dir.path() / "out");
  EXPECT_EQ(c.finetune.epochs, 2);
  EXPECT_EQ(c.stage1.epochs, 2);
  EXPECT_EQ(c.stage1.batch_size, 8);
  EXPECT_EQ(c.sweep_seeds, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(RunConfigTest, AllErrorsReportedTogether) {
  try {
    parse_run_config("[run]\nbogus = 1\nbackend = nope\n[finetune]\nepochs = x\n[weird]\n",
                     "/tmp");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("bogus"), std::string::npos) << msg;
    EXPECT_NE(msg.find("nope"), std::string::npos) << msg;
    EXPECT_NE(msg.find("epochs"), std::string::npos) << msg;
    EXPECT_NE(msg.find("weird"), std::string::npos) << msg;
  }
}

}  // namespace
}  // namespace senti::cli
