#include "senti/corpus.h"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "senti/error.h"
#include "senti/tsv.h"
#include "senti/unicode.h"

namespace senti {

std::string_view to_string(SplitName name) {
  switch (name) {
    case SplitName::kTrain:
      return "train";
    case SplitName::kDev:
      return "dev";
    case SplitName::kDevTest:
      return "dev_test";
    case SplitName::kTest:
      return "test";
    case SplitName::kExternal:
      return "external";
  }
  return "?";
}

std::optional<SplitName> parse_split_name(std::string_view text) {
  for (SplitName n : {SplitName::kTrain, SplitName::kDev, SplitName::kDevTest,
                      SplitName::kTest, SplitName::kExternal}) {
    if (to_string(n) == text) return n;
  }
  return std::nullopt;
}

LabelMapping LabelMapping::defaults() {
  using L = SentimentLabel;
  LabelMapping m;
  m.add("Love", L::kPositive);
  m.add("Joy", L::kPositive);
  m.add("Anger", L::kNegative);
  m.add("Sad", L::kNegative);
  m.add("Sadness", L::kNegative);
  m.add("Fear", L::kNegative);
  m.add("Disgust", L::kNegative);
  m.add("Surprise", L::kNeutral);
  m.add("Abusive", L::kNegative);
  m.add("Non-Abusive", L::kPositive);
  return m;
}

void LabelMapping::add(std::string_view original, SentimentLabel mapped) {
  std::string key = unicode::case_fold(unicode::trim(original));
  if (key.empty()) throw ParseError("empty original label in mapping");
  auto [it, inserted] = entries_.emplace(key, mapped);
  if (!inserted && it->second != mapped) {
    throw ParseError("label '" + std::string(original) +
                     "' mapped to both " + std::string(to_string(it->second)) +
                     " and " + std::string(to_string(mapped)));
  }
}

std::optional<SentimentLabel> LabelMapping::lookup(
    std::string_view original) const {
  auto it = entries_.find(unicode::case_fold(unicode::trim(original)));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> official_size(SplitName name) {
  switch (name) {
    case SplitName::kTrain:
      return 32566;
    case SplitName::kDev:
      return 3934;
    case SplitName::kDevTest:
      return 3426;
    case SplitName::kTest:
      return 6707;
    case SplitName::kExternal:
      return std::nullopt;
  }
  return std::nullopt;
}

void check_official_size(const DatasetSplit& split) {
  auto expected = official_size(split.name);
  if (!expected) return;
  if (split.size() != *expected) {
    throw ParseError(std::string(to_string(split.name)) + " split has " +
                     std::to_string(split.size()) + " rows, expected " +
                     std::to_string(*expected));
  }
}

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

struct RawRow {
  std::size_t line;
  std::string id;
  std::string text;
  std::optional<std::string> label;
};

// Shared TSV reader for task and external files. Validates header, field
// counts, UTF-8, non-empty id/text and id uniqueness.
std::vector<RawRow> read_rows(const std::filesystem::path& path,
                              bool label_optional) {
  const tsv::Table table = tsv::read(path);
  const auto& h = table.header;
  const bool has_label_col = h.size() == 3 && h[2] == "label";
  const bool ok_header = h.size() >= 2 && h[0] == "id" && h[1] == "text" &&
                         (has_label_col || (h.size() == 2 && label_optional));
  if (!ok_header) {
    throw ParseError(path.string() + ": expected header 'id\\ttext\\tlabel'");
  }
  std::vector<RawRow> rows;
  rows.reserve(table.rows.size());
  std::unordered_set<std::string> seen;
  for (const auto& r : table.rows) {
    if (r.fields.size() != h.size()) {
      throw ParseError(where(path, r.line) + ": expected " +
                       std::to_string(h.size()) + " fields, found " +
                       std::to_string(r.fields.size()));
    }
    RawRow row{r.line, r.fields[0], r.fields[1], std::nullopt};
    if (!unicode::is_valid_utf8(row.id) || !unicode::is_valid_utf8(row.text)) {
      throw ParseError(where(path, r.line) + ": invalid UTF-8");
    }
    if (unicode::trim(row.id).empty()) {
      throw ParseError(where(path, r.line) + ": empty id");
    }
    if (unicode::trim(row.text).empty()) {
      throw ParseError(where(path, r.line) + ": empty text for id '" +
                       row.id + "'");
    }
    if (has_label_col && !r.fields[2].empty()) row.label = r.fields[2];
    if (!row.label && !label_optional) {
      throw ParseError(where(path, r.line) + ": missing label for id '" +
                       row.id + "'");
    }
    if (!seen.insert(row.id).second) {
      throw DuplicateIdError(where(path, r.line) + ": duplicate id '" +
                             row.id + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

DatasetSplit load_split(const std::filesystem::path& path, SplitName name) {
  const bool label_optional = name == SplitName::kTest;
  DatasetSplit split;
  split.name = name;
  const std::string source(to_string(name));
  for (auto& raw : read_rows(path, label_optional)) {
    Example ex{std::move(raw.id), std::move(raw.text), std::nullopt, source};
    if (raw.label) {
      ex.label = parse_label(*raw.label);
      if (!ex.label) {
        throw ParseError(where(path, raw.line) + ": unknown label '" +
                         *raw.label +
                         "' (expected Negative|Neutral|Positive)");
      }
    }
    split.examples.push_back(std::move(ex));
  }
  split.labeled = true;
  for (const auto& ex : split.examples) {
    if (!ex.label) split.labeled = false;
  }
  return split;
}

void write_split(const std::filesystem::path& path, const DatasetSplit& split) {
  std::ostringstream out;
  out << "id\ttext\tlabel\n";
  for (const auto& ex : split.examples) {
    out << ex.id << '\t' << ex.text << '\t';
    if (ex.label) out << to_string(*ex.label);
    out << '\n';
  }
  tsv::write_atomic(path, out.str());
}

ExternalDataset load_external(const std::filesystem::path& path,
                              std::string name, int declared_class_count) {
  if (declared_class_count < 1) {
    throw ParseError(name + ": declared class count must be positive");
  }
  ExternalDataset ds{std::move(name), {}, declared_class_count};
  for (auto& raw : read_rows(path, /*label_optional=*/false)) {
    ds.examples.push_back(
        ExternalExample{std::move(raw.id), std::move(raw.text), *raw.label});
  }
  return ds;
}

LabelMapping load_label_mapping(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  LabelMapping m;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = tsv::split(line);
    if (fields.size() != 2) {
      throw ParseError(where(path, lineno) +
                       ": expected 'original<TAB>mapped'");
    }
    const auto mapped = parse_label(unicode::trim(fields[1]));
    if (!mapped) {
      throw ParseError(where(path, lineno) + ": unknown target label '" +
                       fields[1] + "'");
    }
    m.add(fields[0], *mapped);
  }
  return m;
}

DedupResult deduplicate(const DatasetSplit& split) {
  DedupResult result;
  result.split.name = split.name;
  result.split.labeled = split.labeled;
  std::unordered_map<std::string, std::size_t> first;  // key -> kept index
  for (const auto& ex : split.examples) {
    std::string key = unicode::nfc(ex.text);
    auto [it, inserted] = first.emplace(std::move(key), result.split.size());
    if (inserted) {
      result.split.examples.push_back(ex);
      continue;
    }
    ++result.removed;
    const Example& kept = result.split.examples[it->second];
    if (kept.label != ex.label) {
      result.conflicts.push_back({kept.id, ex.id, kept.label, ex.label});
    }
  }
  return result;
}

DatasetSplit map_external_labels(const ExternalDataset& ds,
                                 const LabelMapping& mapping) {
  DatasetSplit out;
  out.name = SplitName::kExternal;
  out.labeled = true;
  out.examples.reserve(ds.examples.size());
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const auto& src = ds.examples[i];
    const auto mapped = mapping.lookup(src.original_label);
    if (!mapped) {
      throw UnknownLabelError(ds.name + ": row " + std::to_string(i + 1) +
                              " (id '" + src.id + "') has unmapped label '" +
                              src.original_label + "'");
    }
    out.examples.push_back(Example{src.id, src.text, *mapped, ds.name});
  }
  return out;
}

DedupResult merge_external(const std::vector<DatasetSplit>& datasets) {
  DatasetSplit merged;
  merged.name = SplitName::kExternal;
  merged.labeled = true;
  for (const auto& ds : datasets) {
    for (const auto& ex : ds.examples) {
      Example copy = ex;
      copy.id = ex.source + ":" + ex.id;
      if (!copy.label) merged.labeled = false;
      merged.examples.push_back(std::move(copy));
    }
  }
  return deduplicate(merged);
}

}  // namespace senti
