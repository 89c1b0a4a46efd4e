#ifndef SENTI_CORPUS_H_
#define SENTI_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "senti/label.h"

namespace senti {

enum class SplitName { kTrain, kDev, kDevTest, kTest, kExternal };

std::string_view to_string(SplitName name);
std::optional<SplitName> parse_split_name(std::string_view text);

struct Example {
  std::string id;
  std::string text;
  std::optional<SentimentLabel> label;
  std::string source;

  friend bool operator==(const Example&, const Example&) = default;
};

struct DatasetSplit {
  SplitName name = SplitName::kTrain;
  std::vector<Example> examples;
  // True when every example carries a gold label.
  bool labeled = true;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

struct ExternalExample {
  std::string id;
  std::string text;
  std::string original_label;
};

struct ExternalDataset {
  std::string name;
  std::vector<ExternalExample> examples;
  int declared_class_count = 1;
};

// Case-insensitive map from an external corpus' label spelling to the task
// label set.
class LabelMapping {
 public:
  LabelMapping() = default;

  // The nine conversions used for the external corpora:
  //   Love, Joy, Non-Abusive -> Positive
  //   Anger, Sad/Sadness, Fear, Disgust, Abusive -> Negative
  //   Surprise -> Neutral
  static LabelMapping defaults();

  // Adds `original` (folded) -> `mapped`. Re-adding the same spelling with
  // a different target throws ParseError.
  void add(std::string_view original, SentimentLabel mapped);
  std::optional<SentimentLabel> lookup(std::string_view original) const;

  // Number of distinct folded spellings.
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, SentimentLabel>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, SentimentLabel> entries_;
};

// Expected official sizes: train 32566, dev 3934, dev_test 3426, test 6707.
std::optional<std::size_t> official_size(SplitName name);
// Throws ParseError when `split` does not have its official size.
void check_official_size(const DatasetSplit& split);

// Reads a task split. Header `id<TAB>text<TAB>label`; the test split may
// also use `id<TAB>text` or leave label cells empty.
// Throws ParseError (malformed row or label, names the line) and
// DuplicateIdError.
DatasetSplit load_split(const std::filesystem::path& path, SplitName name);
void write_split(const std::filesystem::path& path, const DatasetSplit& split);

// Reads an external corpus with free-string labels (same TSV layout).
ExternalDataset load_external(const std::filesystem::path& path,
                              std::string name, int declared_class_count);

// Reads `original<TAB>mapped` lines. Blank lines and lines starting with
// '#' are skipped.
LabelMapping load_label_mapping(const std::filesystem::path& path);

struct DedupConflict {
  std::string kept_id;
  std::string dropped_id;
  std::optional<SentimentLabel> kept_label;
  std::optional<SentimentLabel> dropped_label;
};

struct DedupResult {
  DatasetSplit split;
  std::size_t removed = 0;
  // Duplicates whose labels disagreed with the surviving copy.
  std::vector<DedupConflict> conflicts;
};

// Removes examples whose NFC-normalized text equals an earlier one. The
// first occurrence survives and relative order is kept.
DedupResult deduplicate(const DatasetSplit& split);

// Throws UnknownLabelError naming the label and row when a label is not
// covered by `mapping`.
DatasetSplit map_external_labels(const ExternalDataset& ds,
                                 const LabelMapping& mapping);

// Concatenates mapped external sets in order, rewrites ids to
// "<source>:<id>", then deduplicates.
DedupResult merge_external(const std::vector<DatasetSplit>& datasets);

}  // namespace senti

#endif  // SENTI_CORPUS_H_
