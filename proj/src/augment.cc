#include "senti/augment.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "senti/error.h"
#include "senti/unicode.h"

namespace senti {

namespace {

// floor(ratio * n), tolerant of products like 0.2 * 35 = 6.999999999.
std::size_t drop_count(double ratio, std::size_t eligible) {
  const double product = ratio * static_cast<double>(eligible);
  auto k = static_cast<std::size_t>(std::floor(product + 1e-9));
  if (eligible > 0 && k >= eligible) k = eligible - 1;
  return k;
}

}  // namespace

TokenSequence token_drop(const TokenSequence& seq, const DropSpec& spec) {
  if (!(spec.ratio >= 0.0 && spec.ratio < 1.0)) {
    throw ConfigError("token drop ratio must be in [0, 1), got " +
                      std::to_string(spec.ratio));
  }
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!seq.special_mask[i]) eligible.push_back(i);
  }
  const std::size_t k = drop_count(spec.ratio, eligible.size());
  if (k == 0) return seq;

  // Partial Fisher-Yates: the first k slots become the dropped positions.
  KeyedRng rng(spec.key, RngStream::kTokenDrop);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<bool> dropped(seq.size(), false);
  for (std::size_t i = 0; i < k; ++i) dropped[eligible[i]] = true;

  TokenSequence out;
  out.max_length = seq.max_length;
  out.tokens.reserve(seq.size() - k);
  out.special_mask.reserve(seq.size() - k);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (dropped[i]) continue;
    out.tokens.push_back(seq.tokens[i]);
    out.special_mask.push_back(seq.special_mask[i]);
  }
  return out;
}

MaskedSequence mlm_mask(const TokenSequence& seq, const MaskSpec& spec) {
  if (!(spec.mlm_probability >= 0.0 && spec.mlm_probability <= 1.0)) {
    throw ConfigError("mlm probability must be in [0, 1], got " +
                      std::to_string(spec.mlm_probability));
  }
  MaskedSequence result{seq, {}};
  KeyedRng rng(spec.key, RngStream::kMlmMask);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.special_mask[i]) continue;
    if (rng.bernoulli(spec.mlm_probability)) {
      result.labels.emplace(i, seq.tokens[i]);
      result.masked.tokens[i] = spec.mask_token_id;
    }
  }
  return result;
}

std::vector<std::string> IdentityParaphraser::generate(std::string_view text) {
  return {std::string(text)};
}

std::vector<std::string> WordReverseParaphraser::generate(
    std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(std::move(w));
  std::reverse(words.begin(), words.end());
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return {out};
}

std::unique_ptr<Paraphraser> make_paraphraser(std::string_view name) {
  if (name == "identity") return std::make_unique<IdentityParaphraser>();
  if (name == "word-reverse") return std::make_unique<WordReverseParaphraser>();
  throw ConfigError("unknown paraphraser '" + std::string(name) + "'");
}

DatasetSplit paraphrase_expand(const DatasetSplit& split, Paraphraser& p,
                               int per_example) {
  if (per_example < 0) {
    throw ConfigError("paraphrases per example must be >= 0");
  }
  DatasetSplit out = split;
  if (per_example == 0) return out;

  std::unordered_set<std::string> seen;
  for (const auto& ex : split.examples) seen.insert(unicode::nfc(ex.text));

  for (const auto& ex : split.examples) {
    if (!ex.label) continue;
    std::vector<std::string> candidates;
    try {
      candidates = p.generate(ex.text);
    } catch (const std::exception& e) {
      throw PluginError("paraphraser '" + p.name() + "' failed on example '" +
                        ex.id + "': " + e.what());
    }
    int added = 0;
    for (auto& text : candidates) {
      if (added >= per_example) break;
      if (text == ex.text || unicode::trim(text).empty()) continue;
      if (!seen.insert(unicode::nfc(text)).second) continue;
      ++added;
      out.examples.push_back(Example{ex.id + "#p" + std::to_string(added),
                                     std::move(text), ex.label, ex.source});
    }
  }
  return out;
}

}  // namespace senti
