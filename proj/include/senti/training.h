#ifndef SENTI_TRAINING_H_
#define SENTI_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "senti/backend.h"
#include "senti/config.h"
#include "senti/corpus.h"
#include "senti/metrics.h"
#include "senti/run_record.h"
#include "senti/textprep.h"

namespace senti {

// Everything a run needs besides its config and data.
struct TrainingContext {
  const Tokenizer& tokenizer;
  ModelBackend& backend;
  // Used in run ids and report rows, e.g. "bbert-rtd".
  std::string model_name = "model";
  // Returns the timestamp stored in records; defaults to utc_timestamp().
  std::function<std::string()> clock = utc_timestamp;
};

struct TrainResult {
  ModelHandle handle;
  RunRecord record;
};

// Token-drop-on-the-fly view of an encoded, labeled split. Sequence i in
// epoch e is token_drop(seq_i, {ratio, (seed, e, i)}).
class AugmentedEpochSource final : public EpochSource {
 public:
  // Throws ParseError when an example has no label.
  AugmentedEpochSource(EncodedSplit data, double drop_ratio, std::uint64_t seed);

  std::size_t size() const override { return data_.size(); }
  std::int32_t vocab_size() const override { return data_.vocab_size; }
  SentimentLabel label(std::size_t index) const override;
  TokenSequence sequence(int epoch, std::size_t index) const override;

 private:
  EncodedSplit data_;
  double drop_ratio_;
  std::uint64_t seed_;
};

// "<kind>-<model_name>-s<seed>-<first 8 hex digits of config hash>".
std::string make_run_id(std::string_view kind, std::string_view model_name,
                        std::uint64_t seed, std::string_view config_hash);

// Fine-tunes on `train` (labeled, preprocessed), optionally starting from
// `init`. Backend failures are rethrown with the run id prepended.
// Throws ConfigError for invalid configs, EmptyDatasetError for empty data.
TrainResult finetune(const FinetuneConfig& cfg, const DatasetSplit& train,
                     TrainingContext& ctx, const ModelHandle* init = nullptr);

// Throws LeakageError when any `external` text equals a text of one of the
// held-out splits.
void check_no_leakage(const DatasetSplit& external,
                      const std::vector<const DatasetSplit*>& held_out);

// Stage 1 on the merged external data only, stage 2 on `train` initialised
// from stage 1. An empty external set skips stage 1 with a warning.
TrainResult two_stage_finetune(const FinetuneConfig& stage1,
                               const DatasetSplit& external,
                               const FinetuneConfig& stage2,
                               const DatasetSplit& train,
                               const std::vector<const DatasetSplit*>& held_out,
                               TrainingContext& ctx);

// Task-adaptive pre-training on the texts of `train` only. Texts are
// encoded, token-dropped and MLM-masked for epoch 0 with keys
// (cfg.seed, 0, i) and handed to the backend.
// Throws ConfigError, CapabilityError or EmptyDatasetError.
TrainResult tapt_pretrain(const TaptConfig& cfg, const DatasetSplit& train,
                          TrainingContext& ctx);

struct Evaluation {
  PredictionVector predictions;
  std::optional<MetricsResult> metrics;  // present when the split is labeled
};

Evaluation evaluate(const ModelHandle& handle, const DatasetSplit& split,
                    std::size_t max_length, TrainingContext& ctx);

struct SweepOutcome {
  SeedSweepResult result;
  std::vector<TrainResult> runs;  // successful seeds, in order
};

// finetune + evaluate on `eval_split` for every seed. Per-seed failures are
// recorded in result.failures and the sweep continues.
// Throws ConfigError when seeds are empty or repeated, or eval_split is
// unlabeled.
SweepOutcome seed_sweep(const FinetuneConfig& cfg,
                        const std::vector<std::uint64_t>& seeds,
                        const DatasetSplit& train,
                        const DatasetSplit& eval_split, TrainingContext& ctx,
                        const std::string& sweep_name = "sweep");

// Derives `count` distinct seeds from a master seed.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed,
                                        std::size_t count);

// runs/<run_id>/{record.json, model.bin}
struct RunPaths {
  std::filesystem::path dir;
  std::filesystem::path record;
  std::filesystem::path model;
  std::filesystem::path metrics;
  std::filesystem::path preds_dir;
};
RunPaths run_paths(const std::filesystem::path& out_dir,
                   const std::string& run_id);
void persist_run(const std::filesystem::path& out_dir, const TrainResult& run);

}  // namespace senti

#endif  // SENTI_TRAINING_H_
