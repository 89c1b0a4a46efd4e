#ifndef SENTI_CONFIG_H_
#define SENTI_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace senti {

// Ordered so that serialization and hashing are canonical.
using KeyValues = std::map<std::string, std::string>;

// Fine-tuning hyperparameters. Defaults are the best BanglaBert settings;
// see xlmr() for the XLM-R variant.
struct FinetuneConfig {
  double learning_rate = 2e-5;
  std::string lr_scheduler = "linear";
  double warmup_ratio = 0.0;
  int batch_size = 16;
  int epochs = 3;
  double weight_decay = 0.01;
  double token_drop_ratio = 0.2;
  double classifier_dropout = 0.1;
  int max_length = 128;
  std::uint64_t seed = 42;
  // Start the classification head from zero when initialising from another
  // handle (second stage of two-stage fine-tuning).
  bool reset_head = false;

  static FinetuneConfig banglabert() { return {}; }
  // Batch size 32 and 5 epochs; everything else as banglabert().
  static FinetuneConfig xlmr();

  // Every violated constraint, one message each. Empty when valid.
  std::vector<std::string> problems() const;
  // Throws ConfigError listing all problems.
  void validate() const;

  KeyValues to_kv() const;
  // Applies `kv` on top of `base`. Unknown keys and malformed values are
  // appended to `errors` (prefixed with `where`).
  static FinetuneConfig from_kv(const KeyValues& kv, const FinetuneConfig& base,
                                std::string_view where,
                                std::vector<std::string>& errors);
  // FNV-1a over the canonical key=value rendering, as 16 hex digits.
  std::string hash() const;

  friend bool operator==(const FinetuneConfig&, const FinetuneConfig&) = default;
};

// Electra-style task-adaptive pre-training settings.
struct TaptConfig {
  double lambda_disc = 50.0;  // discriminator loss weight
  double mlm_probability = 0.25;
  double learning_rate = 1e-4;
  std::string lr_scheduler = "linear";
  double warmup_ratio = 0.06;
  int batch_size = 64;
  int epochs = 100;
  double weight_decay = 0.01;
  double token_drop_ratio = 0.2;
  int max_length = 128;
  std::uint64_t seed = 42;

  // Total pre-training loss: L = L_mlm + lambda_disc * L_disc.
  double total_loss(double mlm_loss, double disc_loss) const {
    return mlm_loss + lambda_disc * disc_loss;
  }

  std::vector<std::string> problems() const;
  void validate() const;
  KeyValues to_kv() const;
  static TaptConfig from_kv(const KeyValues& kv, const TaptConfig& base,
                            std::string_view where,
                            std::vector<std::string>& errors);
  std::string hash() const;

  friend bool operator==(const TaptConfig&, const TaptConfig&) = default;
};

// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

// Canonical "k=v\n" rendering used for hashing.
std::string canonical_text(const KeyValues& kv);
std::string hash_kv(const KeyValues& kv);

}  // namespace senti

#endif  // SENTI_CONFIG_H_
