#ifndef SENTI_BACKEND_H_
#define SENTI_BACKEND_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "senti/augment.h"
#include "senti/config.h"
#include "senti/corpus.h"
#include "senti/label.h"
#include "senti/textprep.h"

namespace senti {

// A split after tokenization, aligned with its source by position.
struct EncodedSplit {
  std::vector<std::string> ids;
  std::vector<TokenSequence> sequences;
  std::vector<std::optional<SentimentLabel>> labels;
  std::int32_t vocab_size = 0;

  std::size_t size() const { return ids.size(); }
};

// Tokenizes every example with head truncation to max_length.
EncodedSplit encode_split(const DatasetSplit& split, const Tokenizer& tok,
                          std::size_t max_length);

using ClassScores = std::array<double, kNumLabels>;

// Index of the largest score; ties go to the earliest class in
// Negative, Neutral, Positive order.
SentimentLabel argmax_label(const ClassScores& scores);

struct PredictionVector {
  std::vector<std::string> ids;
  std::vector<SentimentLabel> labels;
  std::vector<ClassScores> scores;

  std::size_t size() const { return labels.size(); }
};

// Training examples as seen by a backend. sequence() is recomputed per
// epoch so augmentation happens on the fly.
class EpochSource {
 public:
  virtual ~EpochSource() = default;
  virtual std::size_t size() const = 0;
  virtual std::int32_t vocab_size() const = 0;
  virtual SentimentLabel label(std::size_t index) const = 0;
  virtual TokenSequence sequence(int epoch, std::size_t index) const = 0;
};

// Serialized model plus provenance. Parameters are opaque to everything
// but the backend that produced them.
struct ModelHandle {
  std::string id;
  std::string backend;
  std::string config_hash;
  std::vector<std::string> stage_tags;
  std::map<std::string, std::string> metadata;
  std::vector<std::uint8_t> parameters;

  bool has_tag(std::string_view tag) const;

  friend bool operator==(const ModelHandle&, const ModelHandle&) = default;
};

// Container layout (little endian):
//   "SENTIMDL" | u32 version | u32 header length | header JSON |
//   u64 parameter length | parameters | u64 FNV-1a of all preceding bytes
std::vector<std::uint8_t> serialize_handle(const ModelHandle& h);
// Throws IntegrityError on bad magic, version, length or checksum.
ModelHandle deserialize_handle(const std::vector<std::uint8_t>& bytes);
void save_handle(const std::filesystem::path& path, const ModelHandle& h);
ModelHandle load_handle(const std::filesystem::path& path);

struct MaskedCorpus {
  std::vector<MaskedSequence> sequences;
  std::int32_t vocab_size = 0;
  std::size_t masked_positions = 0;
  std::size_t eligible_positions = 0;
};

class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string name() const = 0;

  // Deterministic given (config.seed, data, init).
  virtual ModelHandle train(const FinetuneConfig& config,
                            const EpochSource& data,
                            const ModelHandle* init) = 0;

  // Pure function of (handle, data). Safe to call concurrently.
  virtual PredictionVector predict(const ModelHandle& handle,
                                   const EncodedSplit& data) const = 0;

  virtual bool supports_pretraining() const { return false; }
  // Throws CapabilityError unless supports_pretraining().
  virtual ModelHandle pretrain_tapt(const TaptConfig& config,
                                    const MaskedCorpus& corpus);

  virtual bool supports_mixed_precision() const { return false; }
};

// Backend factories keyed by name. "toy" is always registered.
class BackendRegistry {
 public:
  using Factory = std::function<std::unique_ptr<ModelBackend>()>;

  static BackendRegistry& global();
  void add(std::string name, Factory factory);
  // Throws ConfigError for unknown names.
  std::unique_ptr<ModelBackend> create(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  BackendRegistry();
  std::map<std::string, Factory, std::less<>> factories_;
};

}  // namespace senti

#endif  // SENTI_BACKEND_H_
