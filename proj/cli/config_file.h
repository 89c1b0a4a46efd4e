#ifndef SENTI_CLI_CONFIG_FILE_H_
#define SENTI_CLI_CONFIG_FILE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "senti/config.h"
#include "senti/corpus.h"

namespace senti::cli {

struct ExternalSource {
  std::string name;
  std::filesystem::path path;
  std::optional<std::filesystem::path> mapping;  // default mapping if unset
  int classes = 3;
};

// Parsed run configuration. The file is INI-like:
//
//   # comment
//   [run]        name, backend, tokenizer, vocab_size, normalizer,
//                paraphraser, paraphrases_per_example, master_seed,
//                out_dir, model_family, eval_split, mixed_precision
//   [data]       train, dev, dev_test, test, official_sizes
//   [finetune]   FinetuneConfig fields
//   [finetune.stage1]  overrides for stage 1 of two-stage fine-tuning
//   [tapt]       TaptConfig fields
//   [external.<name>]  path, mapping, classes
//   [sweep]      name, seeds (comma list) or count
//   [ensemble]   name, models (comma list, priority order), split
//
// Relative paths are resolved against the config file's directory.
struct RunConfigFile {
  std::filesystem::path base_dir;

  std::string name = "model";
  std::string backend = "toy";
  std::string tokenizer = "hash";
  int vocab_size = 4096;
  std::string normalizer = "nfc";
  std::string paraphraser = "none";
  int paraphrases_per_example = 0;
  std::uint64_t master_seed = 42;
  std::filesystem::path out_dir;  // defaults to <base_dir>/out
  std::string model_family = "banglabert";
  SplitName eval_split = SplitName::kDevTest;
  bool mixed_precision = false;

  std::map<SplitName, std::filesystem::path> data;
  bool official_sizes = false;

  FinetuneConfig finetune;
  FinetuneConfig stage1;
  TaptConfig tapt;

  std::vector<ExternalSource> external;

  std::string sweep_name = "sweep";
  std::vector<std::uint64_t> sweep_seeds;
  std::size_t sweep_count = 0;

  std::string ensemble_name = "ensemble";
  std::vector<std::string> ensemble_models;
  SplitName ensemble_split = SplitName::kDevTest;
};

// Parses and validates `text`. Every problem (unknown section or key,
// malformed value, out-of-range hyperparameter) is collected and reported
// together in one ConfigError, one per line. `seed_override` replaces the
// master seed and every run seed.
RunConfigFile parse_run_config(const std::string& text,
                               const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override = {});

// Throws ParseError when the file cannot be read.
RunConfigFile load_run_config(const std::filesystem::path& path,
                              std::optional<std::uint64_t> seed_override = {});

}  // namespace senti::cli

#endif  // SENTI_CLI_CONFIG_FILE_H_
