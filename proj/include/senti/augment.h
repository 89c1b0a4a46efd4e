#ifndef SENTI_AUGMENT_H_
#define SENTI_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "senti/corpus.h"
#include "senti/keyed_rng.h"
#include "senti/textprep.h"

namespace senti {

struct DropSpec {
  double ratio = 0.2;  // in [0, 1)
  RngKey key;
};

struct MaskSpec {
  double mlm_probability = 0.25;  // in [0, 1]
  RngKey key;
  std::int32_t mask_token_id = HashTokenizer::kMask;
};

// Random token drop. Removes floor(ratio * eligible) distinct non-special
// positions chosen uniformly without replacement, keeping at least one
// content token and every special token. Surviving tokens keep their
// order. Sequences without content tokens are returned unchanged.
// Throws ConfigError when ratio is outside [0, 1).
TokenSequence token_drop(const TokenSequence& seq, const DropSpec& spec);

struct MaskedSequence {
  TokenSequence masked;
  std::map<std::size_t, std::int32_t> labels;  // position -> original id
};

// MLM masking: each non-special position is replaced by mask_token_id
// independently with probability mlm_probability.
// Throws ConfigError when the probability is outside [0, 1].
MaskedSequence mlm_mask(const TokenSequence& seq, const MaskSpec& spec);

class Paraphraser {
 public:
  virtual ~Paraphraser() = default;
  virtual std::string name() const = 0;
  virtual bool deterministic() const { return true; }
  virtual std::vector<std::string> generate(std::string_view text) = 0;
};

// Returns the input unchanged.
class IdentityParaphraser final : public Paraphraser {
 public:
  std::string name() const override { return "identity"; }
  std::vector<std::string> generate(std::string_view text) override;
};

// Reverses whitespace-separated word order.
class WordReverseParaphraser final : public Paraphraser {
 public:
  std::string name() const override { return "word-reverse"; }
  std::vector<std::string> generate(std::string_view text) override;
};

// "identity" | "word-reverse"; throws ConfigError otherwise.
std::unique_ptr<Paraphraser> make_paraphraser(std::string_view name);

// Appends up to `per_example` paraphrases after the original examples.
// Paraphrases equal to their source, to any earlier text, or produced for
// unlabeled sources are dropped. New ids are "<id>#p<k>".
// Throws ConfigError for negative per_example and PluginError (naming the
// example id) when the paraphraser fails.
DatasetSplit paraphrase_expand(const DatasetSplit& split, Paraphraser& p,
                               int per_example);

}  // namespace senti

#endif  // SENTI_AUGMENT_H_
