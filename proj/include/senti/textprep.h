#ifndef SENTI_TEXTPREP_H_
#define SENTI_TEXTPREP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "senti/corpus.h"

namespace senti {

// ---------------------------------------------------------------------------
// URL / username tagging

struct TagCounts {
  std::size_t urls = 0;
  std::size_t users = 0;
};

// Replaces `scheme://nonspace+` and `www.nonspace+` with `URL`, and an
// '@'-run followed by word characters (not preceded by a word character)
// with `USER`. Passes repeat until nothing matches, so the result is a
// fixed point: replace_urls_users(replace_urls_users(t)) == replace_urls_users(t).
std::string replace_urls_users(std::string_view text, TagCounts* counts = nullptr);

// ---------------------------------------------------------------------------
// Normalizers

using Normalizer = std::function<std::string(std::string_view)>;

// Name -> normalizer. Built in: "identity" and "nfc" (the default).
class NormalizerRegistry {
 public:
  static NormalizerRegistry& global();

  void add(std::string name, Normalizer fn);
  // Throws ConfigError for unknown names.
  Normalizer get(std::string_view name) const;
  bool contains(std::string_view name) const;

 private:
  NormalizerRegistry();
  std::map<std::string, Normalizer, std::less<>> entries_;
};

// Runs `normalizer`; any failure is rethrown as NormalizationError.
std::string normalize(std::string_view text, const Normalizer& normalizer);

// ---------------------------------------------------------------------------
// Tokenization

struct TokenSequence {
  std::vector<std::int32_t> tokens;
  std::vector<bool> special_mask;  // parallel to tokens
  std::size_t max_length = 0;

  std::size_t size() const { return tokens.size(); }
  std::size_t content_count() const;
  // length(tokens) == length(special_mask) <= max_length
  bool valid() const;

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual std::string name() const = 0;
  virtual std::int32_t vocab_size() const = 0;
  virtual std::int32_t bos_id() const = 0;
  virtual std::int32_t eos_id() const = 0;
  virtual std::int32_t pad_id() const = 0;
  virtual std::int32_t mask_id() const = 0;

  // Content token ids only, no specials, no truncation.
  virtual std::vector<std::int32_t> content_ids(std::string_view text) const = 0;
  virtual std::string decode(const TokenSequence& seq) const = 0;

  // Full sequence with delimiters; max_length equals its length.
  TokenSequence encode(std::string_view text) const;
};

// Whitespace tokenizer with hashed ids: FNV-1a(token) mod (vocab - 4) + 4.
// Ids 0..3 are reserved for begin, end, pad and mask.
class HashTokenizer final : public Tokenizer {
 public:
  static constexpr std::int32_t kBos = 0;
  static constexpr std::int32_t kEos = 1;
  static constexpr std::int32_t kPad = 2;
  static constexpr std::int32_t kMask = 3;
  static constexpr std::int32_t kFirstContentId = 4;

  // Throws ConfigError when vocab_size <= kFirstContentId.
  explicit HashTokenizer(std::int32_t vocab_size);

  std::string name() const override { return "hash"; }
  std::int32_t vocab_size() const override { return vocab_size_; }
  std::int32_t bos_id() const override { return kBos; }
  std::int32_t eos_id() const override { return kEos; }
  std::int32_t pad_id() const override { return kPad; }
  std::int32_t mask_id() const override { return kMask; }

  std::int32_t token_id(std::string_view token) const;
  std::vector<std::int32_t> content_ids(std::string_view text) const override;
  std::string decode(const TokenSequence& seq) const override;

 private:
  std::int32_t vocab_size_;
};

// Builds a tokenizer by name ("hash"). Throws ConfigError otherwise.
std::unique_ptr<Tokenizer> make_tokenizer(std::string_view name,
                                          std::int32_t vocab_size);

// Encodes and keeps the head: at most max_length - 2 content tokens between
// the begin/end delimiters. Throws ConfigError when max_length < 3 and
// EmptyTextError when the text yields no content token.
TokenSequence encode_truncate(std::string_view text, const Tokenizer& tok,
                              std::size_t max_length);

// ---------------------------------------------------------------------------
// Split-level preprocessing

struct PreprocessStats {
  std::size_t rows_in = 0;
  std::size_t rows_out = 0;
  std::size_t duplicates_removed = 0;
  std::size_t label_conflicts = 0;
  std::size_t url_replacements = 0;
  std::size_t user_replacements = 0;
};

struct PreprocessResult {
  DatasetSplit split;
  PreprocessStats stats;
  std::vector<DedupConflict> conflicts;
};

// Tag -> normalize for one text.
std::string preprocess_text(std::string_view text, const Normalizer& normalizer,
                            TagCounts* counts = nullptr);

// Optional dedup on raw text, then tag -> normalize for every example.
// Examples whose text becomes empty are an error (EmptyTextError, names id).
PreprocessResult preprocess_split(const DatasetSplit& split,
                                  const Normalizer& normalizer, bool dedup);

}  // namespace senti

#endif  // SENTI_TEXTPREP_H_
