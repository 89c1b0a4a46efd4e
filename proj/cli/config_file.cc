#include "config_file.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "senti/backend.h"
#include "senti/error.h"
#include "senti/textprep.h"

namespace senti::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

struct Section {
  std::string name;
  std::size_t line = 0;
  KeyValues values;
};

std::vector<Section> parse_ini(const std::string& text,
                               std::vector<std::string>& errors) {
  std::vector<Section> sections;
  std::set<std::string> seen_sections;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    const std::string where = "line " + std::to_string(lineno);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back(where + ": malformed section header");
        continue;
      }
      Section s{trim(line.substr(1, line.size() - 2)), lineno, {}};
      if (!seen_sections.insert(s.name).second) {
        errors.push_back(where + ": duplicate section [" + s.name + "]");
      }
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(where + ": expected 'key = value'");
      continue;
    }
    if (sections.empty()) {
      errors.push_back(where + ": key outside of any section");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!sections.back().values.emplace(key, value).second) {
      errors.push_back(where + ": duplicate key '" + key + "'");
    }
  }
  return sections;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Consumes known keys from a section, reporting unknown or bad ones.
class SectionReader {
 public:
  SectionReader(const Section& s, std::vector<std::string>& errors)
      : section_(s), errors_(errors), remaining_(s.values) {}

  ~SectionReader() {
    for (const auto& [k, _] : remaining_) {
      errors_.push_back("[" + section_.name + "]: unknown key '" + k + "'");
    }
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = remaining_.find(key);
    if (it == remaining_.end()) return std::nullopt;
    std::string v = it->second;
    remaining_.erase(it);
    return v;
  }

  void str(const std::string& key, std::string& out) {
    if (auto v = take(key)) out = *v;
  }

  template <typename T>
  void number(const std::string& key, T& out) {
    if (auto v = take(key)) {
      if (!parse_number(*v, out)) bad(key, *v);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (auto v = take(key)) {
      if (*v == "true") {
        out = true;
      } else if (*v == "false") {
        out = false;
      } else {
        bad(key, *v);
      }
    }
  }

  void split(const std::string& key, SplitName& out) {
    if (auto v = take(key)) {
      auto s = parse_split_name(*v);
      if (s && *s != SplitName::kExternal) {
        out = *s;
      } else {
        bad(key, *v);
      }
    }
  }

  void bad(const std::string& key, const std::string& value) {
    errors_.push_back("[" + section_.name + "]: invalid value '" + value +
                      "' for " + key);
  }

  void error(const std::string& msg) {
    errors_.push_back("[" + section_.name + "]: " + msg);
  }

 private:
  const Section& section_;
  std::vector<std::string>& errors_;
  KeyValues remaining_;
};

std::filesystem::path resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

void add_problems(const std::string& section,
                  const std::vector<std::string>& problems,
                  std::vector<std::string>& errors) {
  for (const auto& p : problems) errors.push_back("[" + section + "]: " + p);
}

}  // namespace

RunConfigFile parse_run_config(const std::string& text,
                               const std::filesystem::path& base_dir,
                               std::optional<std::uint64_t> seed_override) {
  std::vector<std::string> errors;
  const auto sections = parse_ini(text, errors);
  RunConfigFile cfg;
  cfg.base_dir = base_dir;

  auto find = [&sections](const std::string& name) -> const Section* {
    for (const auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  };

  if (const Section* s = find("run")) {
    SectionReader r(*s, errors);
    r.str("name", cfg.name);
    r.str("backend", cfg.backend);
    r.str("tokenizer", cfg.tokenizer);
    r.number("vocab_size", cfg.vocab_size);
    r.str("normalizer", cfg.normalizer);
    r.str("paraphraser", cfg.paraphraser);
    r.number("paraphrases_per_example", cfg.paraphrases_per_example);
    r.number("master_seed", cfg.master_seed);
    if (auto v = r.take("out_dir")) cfg.out_dir = resolve(base_dir, *v);
    r.str("model_family", cfg.model_family);
    r.split("eval_split", cfg.eval_split);
    r.boolean("mixed_precision", cfg.mixed_precision);
  }
  if (seed_override) cfg.master_seed = *seed_override;
  if (cfg.out_dir.empty()) cfg.out_dir = base_dir / "out";

  if (cfg.vocab_size <= 4) errors.push_back("[run]: vocab_size must be > 4");
  if (cfg.paraphrases_per_example < 0) {
    errors.push_back("[run]: paraphrases_per_example must be >= 0");
  }
  if (!NormalizerRegistry::global().contains(cfg.normalizer)) {
    errors.push_back("[run]: unknown normalizer '" + cfg.normalizer + "'");
  }
  if (cfg.tokenizer != "hash" && cfg.tokenizer != "toy") {
    errors.push_back("[run]: unknown tokenizer '" + cfg.tokenizer + "'");
  }
  if (cfg.paraphraser != "none" && cfg.paraphraser != "identity" &&
      cfg.paraphraser != "word-reverse") {
    errors.push_back("[run]: unknown paraphraser '" + cfg.paraphraser + "'");
  }
  {
    const auto names = BackendRegistry::global().names();
    if (std::find(names.begin(), names.end(), cfg.backend) == names.end()) {
      errors.push_back("[run]: unknown backend '" + cfg.backend + "'");
    }
  }

  FinetuneConfig family;
  if (cfg.model_family == "xlmr") {
    family = FinetuneConfig::xlmr();
  } else if (cfg.model_family != "banglabert") {
    errors.push_back("[run]: model_family must be 'banglabert' or 'xlmr'");
  }
  family.seed = cfg.master_seed;
  TaptConfig tapt_base;
  tapt_base.seed = cfg.master_seed;

  if (const Section* s = find("data")) {
    SectionReader r(*s, errors);
    for (SplitName n : {SplitName::kTrain, SplitName::kDev,
                        SplitName::kDevTest, SplitName::kTest}) {
      if (auto v = r.take(std::string(to_string(n)))) {
        if (!v->empty()) cfg.data[n] = resolve(base_dir, *v);
      }
    }
    r.boolean("official_sizes", cfg.official_sizes);
  }

  const Section* ft = find("finetune");
  cfg.finetune = ft ? FinetuneConfig::from_kv(ft->values, family, "[finetune]",
                                              errors)
                    : family;
  const Section* st1 = find("finetune.stage1");
  cfg.stage1 = st1 ? FinetuneConfig::from_kv(st1->values, cfg.finetune,
                                             "[finetune.stage1]", errors)
                   : cfg.finetune;
  const Section* tp = find("tapt");
  cfg.tapt = tp ? TaptConfig::from_kv(tp->values, tapt_base, "[tapt]", errors)
                : tapt_base;
  if (seed_override) {
    cfg.finetune.seed = cfg.stage1.seed = cfg.tapt.seed = *seed_override;
  }
  add_problems("finetune", cfg.finetune.problems(), errors);
  add_problems("finetune.stage1", cfg.stage1.problems(), errors);
  add_problems("tapt", cfg.tapt.problems(), errors);

  if (const Section* s = find("sweep")) {
    SectionReader r(*s, errors);
    r.str("name", cfg.sweep_name);
    if (auto v = r.take("seeds")) {
      for (const auto& item : split_list(*v)) {
        std::uint64_t seed = 0;
        if (parse_number(item, seed)) {
          cfg.sweep_seeds.push_back(seed);
        } else {
          r.bad("seeds", item);
        }
      }
    }
    r.number("count", cfg.sweep_count);
    if (!cfg.sweep_seeds.empty() && cfg.sweep_count != 0) {
      r.error("set either seeds or count, not both");
    }
  }

  if (const Section* s = find("ensemble")) {
    SectionReader r(*s, errors);
    r.str("name", cfg.ensemble_name);
    if (auto v = r.take("models")) cfg.ensemble_models = split_list(*v);
    r.split("split", cfg.ensemble_split);
  }

  static const std::set<std::string> kKnown = {
      "run", "data", "finetune", "finetune.stage1", "tapt", "sweep", "ensemble"};
  for (const auto& s : sections) {
    if (s.name.starts_with("external.")) {
      ExternalSource src;
      src.name = s.name.substr(9);
      SectionReader r(s, errors);
      if (src.name.empty()) r.error("external source needs a name");
      if (auto v = r.take("path")) {
        src.path = resolve(base_dir, *v);
      } else {
        r.error("missing 'path'");
      }
      if (auto v = r.take("mapping")) src.mapping = resolve(base_dir, *v);
      r.number("classes", src.classes);
      if (src.classes < 1) r.error("classes must be >= 1");
      cfg.external.push_back(std::move(src));
    } else if (!kKnown.count(s.name)) {
      errors.push_back("line " + std::to_string(s.line) +
                       ": unknown section [" + s.name + "]");
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid run config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfigFile load_run_config(const std::filesystem::path& path,
                              std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str(), path.parent_path(), seed_override);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace senti::cli
