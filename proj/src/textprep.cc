#include "senti/textprep.h"

#include <unicode/regex.h>
#include <unicode/unistr.h>

#include <memory>
#include <sstream>

#include "senti/error.h"
#include "senti/hashing.h"
#include "senti/unicode.h"

namespace senti {

namespace {

std::unique_ptr<icu::RegexPattern> compile(const char* pattern) {
  UErrorCode status = U_ZERO_ERROR;
  UParseError perr;
  std::unique_ptr<icu::RegexPattern> p(icu::RegexPattern::compile(
      icu::UnicodeString::fromUTF8(pattern), 0, perr, status));
  if (U_FAILURE(status)) {
    throw Error(std::string("bad regex ") + pattern + ": " +
                u_errorName(status));
  }
  return p;
}

const icu::RegexPattern& url_pattern() {
  static const auto p =
      compile(R"([A-Za-z][A-Za-z0-9+.\-]*://\S+|www\.\S+)");
  return *p;
}

const icu::RegexPattern& user_pattern() {
  static const auto p = compile(R"((?<!\w)@+\w+)");
  return *p;
}

// Replaces every match of `pattern` in `s` by `tag`; returns match count.
std::size_t replace_all(icu::UnicodeString& s, const icu::RegexPattern& pattern,
                        const icu::UnicodeString& tag) {
  UErrorCode status = U_ZERO_ERROR;
  std::unique_ptr<icu::RegexMatcher> m(pattern.matcher(s, status));
  if (U_FAILURE(status)) throw Error("regex matcher failed");
  icu::UnicodeString out;
  std::size_t n = 0;
  while (m->find(status) && U_SUCCESS(status)) {
    m->appendReplacement(out, tag, status);
    ++n;
  }
  m->appendTail(out);
  if (U_FAILURE(status)) throw Error("regex replace failed");
  if (n > 0) s = out;
  return n;
}

}  // namespace

std::string replace_urls_users(std::string_view text, TagCounts* counts) {
  if (!unicode::is_valid_utf8(text)) {
    throw NormalizationError("text is not valid UTF-8");
  }
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  static const icu::UnicodeString kUrl = icu::UnicodeString::fromUTF8("URL");
  static const icu::UnicodeString kUser = icu::UnicodeString::fromUTF8("USER");
  TagCounts local;
  // Each pass removes at least one "://", "www." or '@' and inserts none,
  // so the loop terminates.
  for (;;) {
    const std::size_t urls = replace_all(s, url_pattern(), kUrl);
    const std::size_t users = replace_all(s, user_pattern(), kUser);
    local.urls += urls;
    local.users += users;
    if (urls == 0 && users == 0) break;
  }
  if (counts) {
    counts->urls += local.urls;
    counts->users += local.users;
  }
  if (local.urls == 0 && local.users == 0) return std::string(text);
  std::string out;
  s.toUTF8String(out);
  return out;
}

NormalizerRegistry::NormalizerRegistry() {
  entries_.emplace("identity",
                   [](std::string_view t) { return std::string(t); });
  entries_.emplace("nfc", [](std::string_view t) { return unicode::nfc(t); });
}

NormalizerRegistry& NormalizerRegistry::global() {
  static NormalizerRegistry registry;
  return registry;
}

void NormalizerRegistry::add(std::string name, Normalizer fn) {
  entries_.insert_or_assign(std::move(name), std::move(fn));
}

Normalizer NormalizerRegistry::get(std::string_view name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw ConfigError("unknown normalizer '" + std::string(name) + "'");
  }
  return it->second;
}

bool NormalizerRegistry::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

std::string normalize(std::string_view text, const Normalizer& normalizer) {
  try {
    return normalizer(text);
  } catch (const NormalizationError&) {
    throw;
  } catch (const std::exception& e) {
    throw NormalizationError(std::string("normalizer failed: ") + e.what());
  }
}

std::size_t TokenSequence::content_count() const {
  std::size_t n = 0;
  for (bool s : special_mask) n += s ? 0 : 1;
  return n;
}

bool TokenSequence::valid() const {
  return tokens.size() == special_mask.size() && tokens.size() <= max_length;
}

TokenSequence Tokenizer::encode(std::string_view text) const {
  TokenSequence seq;
  const auto ids = content_ids(text);
  seq.tokens.reserve(ids.size() + 2);
  seq.tokens.push_back(bos_id());
  seq.special_mask.push_back(true);
  for (auto id : ids) {
    seq.tokens.push_back(id);
    seq.special_mask.push_back(false);
  }
  seq.tokens.push_back(eos_id());
  seq.special_mask.push_back(true);
  seq.max_length = seq.tokens.size();
  return seq;
}

HashTokenizer::HashTokenizer(std::int32_t vocab_size) : vocab_size_(vocab_size) {
  if (vocab_size <= kFirstContentId) {
    throw ConfigError("vocab_size must exceed " +
                      std::to_string(kFirstContentId));
  }
}

std::int32_t HashTokenizer::token_id(std::string_view token) const {
  const auto span = static_cast<std::uint64_t>(vocab_size_ - kFirstContentId);
  return kFirstContentId + static_cast<std::int32_t>(fnv1a64(token) % span);
}

std::vector<std::int32_t> HashTokenizer::content_ids(
    std::string_view text) const {
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  std::vector<std::int32_t> ids;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) ids.push_back(token_id(text.substr(start, i - start)));
  }
  return ids;
}

std::string HashTokenizer::decode(const TokenSequence& seq) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i) out << ' ';
    const auto id = seq.tokens[i];
    switch (id) {
      case kBos: out << "[CLS]"; break;
      case kEos: out << "[SEP]"; break;
      case kPad: out << "[PAD]"; break;
      case kMask: out << "[MASK]"; break;
      default: out << '#' << id;
    }
  }
  return out.str();
}

std::unique_ptr<Tokenizer> make_tokenizer(std::string_view name,
                                          std::int32_t vocab_size) {
  if (name == "hash" || name == "toy") {
    return std::make_unique<HashTokenizer>(vocab_size);
  }
  throw ConfigError("unknown tokenizer '" + std::string(name) + "'");
}

TokenSequence encode_truncate(std::string_view text, const Tokenizer& tok,
                              std::size_t max_length) {
  if (max_length < 3) {
    throw ConfigError("max_length must be >= 3, got " +
                      std::to_string(max_length));
  }
  auto ids = tok.content_ids(text);
  if (ids.empty()) throw EmptyTextError("no content tokens in text");
  if (ids.size() > max_length - 2) ids.resize(max_length - 2);
  TokenSequence seq;
  seq.max_length = max_length;
  seq.tokens.reserve(ids.size() + 2);
  seq.tokens.push_back(tok.bos_id());
  seq.tokens.insert(seq.tokens.end(), ids.begin(), ids.end());
  seq.tokens.push_back(tok.eos_id());
  seq.special_mask.assign(seq.tokens.size(), false);
  seq.special_mask.front() = true;
  seq.special_mask.back() = true;
  return seq;
}

std::string preprocess_text(std::string_view text, const Normalizer& normalizer,
                            TagCounts* counts) {
  return normalize(replace_urls_users(text, counts), normalizer);
}

PreprocessResult preprocess_split(const DatasetSplit& split,
                                  const Normalizer& normalizer, bool dedup) {
  PreprocessResult result;
  result.stats.rows_in = split.size();
  if (dedup) {
    DedupResult d = deduplicate(split);
    result.split = std::move(d.split);
    result.stats.duplicates_removed = d.removed;
    result.stats.label_conflicts = d.conflicts.size();
    result.conflicts = std::move(d.conflicts);
  } else {
    result.split = split;
  }
  TagCounts counts;
  for (auto& ex : result.split.examples) {
    try {
      ex.text = preprocess_text(ex.text, normalizer, &counts);
    } catch (const NormalizationError& e) {
      throw NormalizationError("example '" + ex.id + "': " + e.what());
    }
    if (unicode::trim(ex.text).empty()) {
      throw EmptyTextError("example '" + ex.id +
                           "' is empty after preprocessing");
    }
  }
  result.stats.url_replacements = counts.urls;
  result.stats.user_replacements = counts.users;
  result.stats.rows_out = result.split.size();
  return result;
}

}  // namespace senti
