#include "commands.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "config_file.h"
#include "json.hpp"
#include "senti/augment.h"
#include "senti/backend.h"
#include "senti/corpus.h"
#include "senti/ensemble.h"
#include "senti/error.h"
#include "senti/metrics.h"
#include "senti/report.h"
#include "senti/run_record.h"
#include "senti/textprep.h"
#include "senti/training.h"
#include "senti/tsv.h"

namespace senti::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Input file or directory that does not exist; exit code 2.
class MissingInputError : public Error {
 public:
  using Error::Error;
};

void require_file(const fs::path& path, std::string_view what) {
  if (!fs::exists(path)) {
    throw MissingInputError(std::string(what) + " not found: " + path.string());
  }
}

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string backend;
};

struct Session {
  RunConfigFile cfg;
  std::unique_ptr<Tokenizer> tokenizer;
  std::unique_ptr<ModelBackend> backend;
  Normalizer normalizer;
};

Session open_session(const GlobalOptions& g, std::ostream& err) {
  if (g.config.empty()) throw ConfigError("--config is required");
  require_file(g.config, "config file");
  Session s;
  s.cfg = load_run_config(g.config, g.seed);
  if (!g.out_dir.empty()) s.cfg.out_dir = g.out_dir;
  if (!g.backend.empty()) s.cfg.backend = g.backend;
  s.tokenizer = make_tokenizer(s.cfg.tokenizer, s.cfg.vocab_size);
  s.backend = BackendRegistry::global().create(s.cfg.backend);
  s.normalizer = NormalizerRegistry::global().get(s.cfg.normalizer);
  if (s.cfg.mixed_precision && !s.backend->supports_mixed_precision()) {
    err << "warning: backend '" << s.cfg.backend
        << "' has no mixed-precision mode; running in full precision\n";
  }
  return s;
}

json stats_json(const PreprocessStats& s) {
  return {{"rows_in", s.rows_in},
          {"rows_out", s.rows_out},
          {"duplicates_removed", s.duplicates_removed},
          {"label_conflicts", s.label_conflicts},
          {"url_replacements", s.url_replacements},
          {"user_replacements", s.user_replacements}};
}

void report_conflicts(std::string_view what,
                      const std::vector<DedupConflict>& conflicts,
                      std::ostream& err) {
  for (const auto& c : conflicts) {
    err << "warning: " << what << ": duplicate text '" << c.dropped_id
        << "' has label "
        << (c.dropped_label ? to_string(*c.dropped_label) : "none")
        << " but kept copy '" << c.kept_id << "' has "
        << (c.kept_label ? to_string(*c.kept_label) : "none") << '\n';
  }
}

// Duplicates are removed from the training and development sets only.
bool dedups(SplitName name) {
  return name == SplitName::kTrain || name == SplitName::kDev;
}

struct LoadedData {
  std::map<SplitName, DatasetSplit> splits;
  std::map<SplitName, PreprocessStats> stats;

  const DatasetSplit* find(SplitName n) const {
    auto it = splits.find(n);
    return it == splits.end() ? nullptr : &it->second;
  }
};

LoadedData load_data(const Session& s, std::ostream& err) {
  LoadedData data;
  for (const auto& [name, path] : s.cfg.data) {
    require_file(path, std::string(to_string(name)) + " split");
    DatasetSplit raw = load_split(path, name);
    if (s.cfg.official_sizes) check_official_size(raw);
    PreprocessResult pre = preprocess_split(raw, s.normalizer, dedups(name));
    report_conflicts(to_string(name), pre.conflicts, err);
    data.stats.emplace(name, pre.stats);
    data.splits.emplace(name, std::move(pre.split));
  }
  return data;
}

const DatasetSplit& require_split(const LoadedData& data, SplitName n) {
  const DatasetSplit* s = data.find(n);
  if (!s) {
    throw ConfigError("[data]: " + std::string(to_string(n)) +
                      " split is required for this command");
  }
  return *s;
}

// Loads, maps and merges every [external.*] source; dedup on raw text, then
// URL/USER tagging and normalization.
PreprocessResult load_external_data(const Session& s, std::ostream& err) {
  std::vector<DatasetSplit> mapped;
  for (const auto& src : s.cfg.external) {
    require_file(src.path, "external dataset '" + src.name + "'");
    const ExternalDataset ds = load_external(src.path, src.name, src.classes);
    LabelMapping mapping = LabelMapping::defaults();
    if (src.mapping) {
      require_file(*src.mapping, "label mapping for '" + src.name + "'");
      mapping = load_label_mapping(*src.mapping);
    }
    mapped.push_back(map_external_labels(ds, mapping));
  }
  DedupResult merged = merge_external(mapped);
  report_conflicts("external", merged.conflicts, err);
  PreprocessResult pre =
      preprocess_split(merged.split, s.normalizer, /*dedup=*/false);
  pre.stats.rows_in = merged.split.size() + merged.removed;
  pre.stats.duplicates_removed = merged.removed;
  pre.stats.label_conflicts = merged.conflicts.size();
  return pre;
}

DatasetSplit training_split(const Session& s, const LoadedData& data) {
  DatasetSplit train = require_split(data, SplitName::kTrain);
  if (s.cfg.paraphraser != "none" && s.cfg.paraphrases_per_example > 0) {
    auto p = make_paraphraser(s.cfg.paraphraser);
    train = paraphrase_expand(train, *p, s.cfg.paraphrases_per_example);
  }
  return train;
}

std::vector<const DatasetSplit*> held_out(const LoadedData& data) {
  std::vector<const DatasetSplit*> out;
  for (SplitName n : {SplitName::kDev, SplitName::kDevTest, SplitName::kTest}) {
    if (const auto* s = data.find(n)) out.push_back(s);
  }
  return out;
}

TrainingContext context(Session& s, const std::string& model_name) {
  return TrainingContext{*s.tokenizer, *s.backend, model_name, utc_timestamp};
}

// Evaluates on every held-out split, writes predictions and persists.
void finish_run(Session& s, TrainResult& run, const LoadedData& data,
                std::size_t max_length, std::ostream& out) {
  run.handle.metadata["normalizer"] = s.cfg.normalizer;
  TrainingContext ctx = context(s, run.record.model_name);
  const RunPaths paths = run_paths(s.cfg.out_dir, run.record.run_id);
  for (SplitName n : {SplitName::kDev, SplitName::kDevTest, SplitName::kTest}) {
    const DatasetSplit* split = data.find(n);
    if (!split || split->empty()) continue;
    Evaluation ev = evaluate(run.handle, *split, max_length, ctx);
    write_predictions(paths.preds_dir / (std::string(to_string(n)) + ".tsv"),
                      ev.predictions);
    if (ev.metrics) {
      run.record.metrics.emplace(std::string(to_string(n)), *ev.metrics);
    }
  }
  persist_run(s.cfg.out_dir, run);
  out << "run: " << run.record.run_id << '\n';
  out << "model: " << paths.model.string() << '\n';
  const std::string eval(to_string(s.cfg.eval_split));
  auto it = run.record.metrics.find(eval);
  if (it != run.record.metrics.end()) {
    out << eval << " micro-F1: " << format_double(round_half_even(it->second.micro_f1, 4))
        << '\n';
  }
}

// ---------------------------------------------------------------------------

struct PreprocessArgs {
  std::string input;
  std::string split = "train";
  std::string output;
  std::string stats;
  std::string normalizer;
  bool no_dedup = false;
  bool official = false;
};

int cmd_preprocess(const GlobalOptions& g, const PreprocessArgs& a,
                   std::ostream& out, std::ostream& err) {
  if (!a.input.empty()) {
    if (a.output.empty()) throw ConfigError("--output is required with --input");
    require_file(a.input, "input file");
    const auto name = parse_split_name(a.split);
    if (!name || *name == SplitName::kExternal) {
      throw ConfigError("--split must be train, dev, dev_test or test");
    }
    const Normalizer norm = NormalizerRegistry::global().get(
        a.normalizer.empty() ? "nfc" : a.normalizer);
    const DatasetSplit raw = load_split(a.input, *name);
    if (a.official) check_official_size(raw);
    PreprocessResult pre =
        preprocess_split(raw, norm, dedups(*name) && !a.no_dedup);
    report_conflicts(a.split, pre.conflicts, err);
    write_split(a.output, pre.split);
    const fs::path stats_path =
        a.stats.empty() ? fs::path(a.output + ".stats.json") : fs::path(a.stats);
    tsv::write_atomic(stats_path, stats_json(pre.stats).dump(2) + "\n");
    out << a.split << ": rows_in " << pre.stats.rows_in << ", rows_out "
        << pre.stats.rows_out << ", duplicates_removed "
        << pre.stats.duplicates_removed << '\n';
    return kExitOk;
  }

  Session s = open_session(g, err);
  if (!a.normalizer.empty()) {
    s.normalizer = NormalizerRegistry::global().get(a.normalizer);
  }
  if (a.official) s.cfg.official_sizes = true;
  const LoadedData data = load_data(s, err);
  const fs::path dir = s.cfg.out_dir / "data";
  json stats = json::object();
  for (const auto& [name, split] : data.splits) {
    write_split(dir / (std::string(to_string(name)) + ".tsv"), split);
    const auto& st = data.stats.at(name);
    stats[std::string(to_string(name))] = stats_json(st);
    out << to_string(name) << ": rows_in " << st.rows_in << ", rows_out "
        << st.rows_out << ", duplicates_removed " << st.duplicates_removed
        << '\n';
  }
  if (!s.cfg.external.empty()) {
    const PreprocessResult ext = load_external_data(s, err);
    write_split(dir / "external.tsv", ext.split);
    stats["external"] = stats_json(ext.stats);
    out << "external: rows_in " << ext.stats.rows_in << ", rows_out "
        << ext.stats.rows_out << ", duplicates_removed "
        << ext.stats.duplicates_removed << '\n';
  }
  tsv::write_atomic(dir / "stats.json", stats.dump(2) + "\n");
  return kExitOk;
}

struct MapLabelsArgs {
  std::string input;
  std::string mapping;
  std::string name;
  int classes = 3;
  std::string output;
};

int cmd_map_labels(const GlobalOptions& g, const MapLabelsArgs& a,
                   std::ostream& out, std::ostream& err) {
  if (!a.input.empty()) {
    if (a.output.empty()) throw ConfigError("--output is required with --input");
    require_file(a.input, "external dataset");
    const std::string name =
        a.name.empty() ? fs::path(a.input).stem().string() : a.name;
    LabelMapping mapping = LabelMapping::defaults();
    if (!a.mapping.empty()) {
      require_file(a.mapping, "label mapping");
      mapping = load_label_mapping(a.mapping);
    }
    const DatasetSplit mapped =
        map_external_labels(load_external(a.input, name, a.classes), mapping);
    write_split(a.output, mapped);
    out << name << ": " << mapped.size() << " examples mapped\n";
    return kExitOk;
  }
  Session s = open_session(g, err);
  if (s.cfg.external.empty()) {
    throw ConfigError("no [external.*] sections in config");
  }
  const PreprocessResult ext = load_external_data(s, err);
  const fs::path path = s.cfg.out_dir / "data" / "external.tsv";
  write_split(path, ext.split);
  out << "external: " << ext.split.size() << " examples ("
      << ext.stats.duplicates_removed << " duplicates removed) -> "
      << path.string() << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string name;
  std::string init;
};

int cmd_train(const GlobalOptions& g, const TrainArgs& a, std::ostream& out,
              std::ostream& err) {
  Session s = open_session(g, err);
  const LoadedData data = load_data(s, err);
  const DatasetSplit train = training_split(s, data);
  std::optional<ModelHandle> init;
  if (!a.init.empty()) {
    require_file(a.init, "init model");
    init = load_handle(a.init);
  }
  TrainingContext ctx = context(s, a.name.empty() ? s.cfg.name : a.name);
  TrainResult run = finetune(s.cfg.finetune, train, ctx, init ? &*init : nullptr);
  finish_run(s, run, data, static_cast<std::size_t>(s.cfg.finetune.max_length),
             out);
  return kExitOk;
}

int cmd_train_2ft(const GlobalOptions& g, const TrainArgs& a, std::ostream& out,
                  std::ostream& err) {
  Session s = open_session(g, err);
  const LoadedData data = load_data(s, err);
  const DatasetSplit train = training_split(s, data);
  const PreprocessResult ext = load_external_data(s, err);
  TrainingContext ctx = context(s, a.name.empty() ? s.cfg.name : a.name);
  TrainResult run = two_stage_finetune(s.cfg.stage1, ext.split, s.cfg.finetune,
                                       train, held_out(data), ctx);
  for (const auto& w : run.record.warnings) err << "warning: " << w << '\n';
  finish_run(s, run, data, static_cast<std::size_t>(s.cfg.finetune.max_length),
             out);
  return kExitOk;
}

int cmd_tapt(const GlobalOptions& g, const TrainArgs& a, std::ostream& out,
             std::ostream& err) {
  Session s = open_session(g, err);
  const LoadedData data = load_data(s, err);
  TrainingContext ctx = context(s, a.name.empty() ? s.cfg.name : a.name);
  TrainResult run =
      tapt_pretrain(s.cfg.tapt, require_split(data, SplitName::kTrain), ctx);
  run.handle.metadata["normalizer"] = s.cfg.normalizer;
  persist_run(s.cfg.out_dir, run);
  const RunPaths paths = run_paths(s.cfg.out_dir, run.record.run_id);
  out << "run: " << run.record.run_id << '\n';
  out << "model: " << paths.model.string() << '\n';
  out << "lambda_disc: " << run.record.extra.at("lambda_disc")
      << ", masked " << run.record.extra.at("masked_positions") << " of "
      << run.record.extra.at("eligible_positions") << " positions\n";
  return kExitOk;
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string split = "test";
  std::string output;
};

int cmd_predict(const GlobalOptions& g, const PredictArgs& a, std::ostream& out,
                std::ostream& err) {
  fs::path model_path = a.model;
  if (!fs::exists(model_path)) {
    if (const char* cache = std::getenv("SENTI_CACHE_DIR")) {
      if (fs::exists(fs::path(cache) / a.model)) model_path = fs::path(cache) / a.model;
    }
  }
  require_file(model_path, "model handle");
  require_file(a.input, "input split");
  const auto name = parse_split_name(a.split);
  if (!name) throw ConfigError("unknown --split '" + a.split + "'");

  const ModelHandle handle = load_handle(model_path);
  auto meta = [&handle](const std::string& key, const std::string& fallback) {
    auto it = handle.metadata.find(key);
    return it == handle.metadata.end() ? fallback : it->second;
  };

  std::unique_ptr<Tokenizer> tok;
  std::unique_ptr<ModelBackend> backend;
  Normalizer norm;
  if (!g.config.empty()) {
    Session s = open_session(g, err);
    tok = std::move(s.tokenizer);
    backend = std::move(s.backend);
    norm = s.normalizer;
  } else {
    tok = make_tokenizer(meta("tokenizer", "hash"),
                         std::stoi(meta("vocab_size", "4096")));
    backend = BackendRegistry::global().create(
        g.backend.empty() ? handle.backend : g.backend);
    norm = NormalizerRegistry::global().get(meta("normalizer", "nfc"));
  }
  const auto max_length =
      static_cast<std::size_t>(std::stoul(meta("max_length", "128")));

  const DatasetSplit raw = load_split(a.input, *name);
  const PreprocessResult pre = preprocess_split(raw, norm, /*dedup=*/false);
  TrainingContext ctx{*tok, *backend, handle.id, utc_timestamp};
  const Evaluation ev = evaluate(handle, pre.split, max_length, ctx);
  write_predictions(a.output, ev.predictions);
  out << "predictions: " << ev.predictions.size() << " rows -> " << a.output
      << '\n';
  if (ev.metrics) {
    out << a.split << " micro-F1: "
        << format_double(round_half_even(ev.metrics->micro_f1, 4)) << '\n';
  }
  return kExitOk;
}

struct EnsembleArgs {
  std::vector<std::string> model_preds;
  std::string output;
  std::string gold;
  std::string gold_split = "dev_test";
  std::string metrics;
};

void write_metrics(const fs::path& path, const MetricsResult& m) {
  tsv::write_atomic(path, to_json(m).dump(2) + "\n");
}

// Expands "sweep:<name>" entries into that sweep's member run ids, best
// score on the sweep split first (ties keep the lower seed first).
std::vector<std::string> resolve_members(const fs::path& out_dir,
                                         const std::vector<std::string>& models) {
  std::vector<std::string> out;
  for (const auto& m : models) {
    if (m.rfind("sweep:", 0) != 0) {
      out.push_back(m);
      continue;
    }
    const std::string sweep = m.substr(6);
    std::vector<std::tuple<double, std::uint64_t, std::string>> found;
    const fs::path runs = out_dir / "runs";
    if (fs::exists(runs)) {
      for (const auto& entry : fs::directory_iterator(runs)) {
        const fs::path rec_path = entry.path() / "record.json";
        if (!fs::exists(rec_path)) continue;
        const RunRecord r = read_record(rec_path);
        if (r.sweep != sweep || r.metrics.empty()) continue;
        found.emplace_back(-r.metrics.begin()->second.micro_f1, r.seed, r.run_id);
      }
    }
    if (found.empty()) {
      throw MissingInputError("no runs of sweep '" + sweep + "' under " +
                              runs.string());
    }
    std::sort(found.begin(), found.end());
    for (auto& f : found) out.push_back(std::get<2>(f));
  }
  return out;
}

int cmd_ensemble(const GlobalOptions& g, const EnsembleArgs& a,
                 std::ostream& out, std::ostream& err) {
  if (!a.model_preds.empty()) {
    if (a.output.empty()) throw ConfigError("--output is required");
    PredictionSet ps;
    for (const auto& p : a.model_preds) {
      require_file(p, "prediction file");
      ps.models.emplace_back(p, read_predictions(p));
    }
    const PredictionVector ens = ensemble_predict(ps);
    write_predictions(a.output, ens);
    out << "ensemble: " << ens.size() << " rows from " << ps.models.size()
        << " models -> " << a.output << '\n';
    if (!a.gold.empty()) {
      require_file(a.gold, "gold split");
      const auto split = parse_split_name(a.gold_split);
      if (!split) throw ConfigError("unknown --gold-split '" + a.gold_split + "'");
      const MetricsResult m =
          MetricsResult::from(confusion(load_split(a.gold, *split), ens));
      const fs::path metrics_path =
          a.metrics.empty() ? fs::path(a.output + ".metrics.json") : fs::path(a.metrics);
      write_metrics(metrics_path, m);
      out << "micro-F1: " << format_double(round_half_even(m.micro_f1, 4)) << '\n';
    }
    return kExitOk;
  }

  Session s = open_session(g, err);
  if (s.cfg.ensemble_models.empty()) {
    throw ConfigError("no --model-pred files and no [ensemble] models in config");
  }
  const std::string split(to_string(s.cfg.ensemble_split));
  const std::vector<std::string> members =
      resolve_members(s.cfg.out_dir, s.cfg.ensemble_models);
  PredictionSet ps;
  for (const auto& run_id : members) {
    const fs::path p = run_paths(s.cfg.out_dir, run_id).preds_dir / (split + ".tsv");
    require_file(p, "predictions of run '" + run_id + "'");
    ps.models.emplace_back(run_id, read_predictions(p));
  }
  const PredictionVector ens = ensemble_predict(ps);

  RunRecord rec;
  rec.kind = "ensemble";
  rec.model_name = s.cfg.ensemble_name;
  rec.backend = s.cfg.backend;
  rec.seed = s.cfg.master_seed;
  std::string joined;
  for (const auto& m : members) {
    joined += (joined.empty() ? "" : ",") + m;
  }
  rec.config = {{"models", joined}, {"split", split}};
  rec.config_hash = hash_kv(rec.config);
  rec.run_id = make_run_id("ensemble", rec.model_name, rec.seed, rec.config_hash);
  rec.stage_tags = {"ENSEMBLE"};
  rec.started_at = rec.finished_at = utc_timestamp();

  const RunPaths paths = run_paths(s.cfg.out_dir, rec.run_id);
  write_predictions(paths.preds_dir / (split + ".tsv"), ens);
  if (auto it = s.cfg.data.find(s.cfg.ensemble_split); it != s.cfg.data.end()) {
    require_file(it->second, split + " split");
    const DatasetSplit gold = load_split(it->second, s.cfg.ensemble_split);
    if (gold.labeled) {
      const MetricsResult m = MetricsResult::from(confusion(gold, ens));
      rec.metrics.emplace(split, m);
      json metrics = {{split, to_json(m)}};
      tsv::write_atomic(paths.metrics, metrics.dump(2) + "\n");
      out << split << " micro-F1: "
          << format_double(round_half_even(m.micro_f1, 4)) << '\n';
    }
  }
  write_record(paths.record, rec);
  out << "run: " << rec.run_id << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::string pred;
  std::string gold;
  std::string split = "dev_test";
  std::string output;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  require_file(a.pred, "prediction file");
  require_file(a.gold, "gold split");
  const auto split = parse_split_name(a.split);
  if (!split) throw ConfigError("unknown --split '" + a.split + "'");
  const MetricsResult m = MetricsResult::from(
      confusion(load_split(a.gold, *split), read_predictions(a.pred)));
  const json j = to_json(m);
  if (!a.output.empty()) write_metrics(a.output, m);
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string name;
};

int cmd_seed_sweep(const GlobalOptions& g, const SweepArgs& a,
                   std::ostream& out, std::ostream& err) {
  Session s = open_session(g, err);
  const LoadedData data = load_data(s, err);
  const DatasetSplit train = training_split(s, data);
  const DatasetSplit& eval = require_split(data, s.cfg.eval_split);
  std::vector<std::uint64_t> seeds = s.cfg.sweep_seeds;
  if (seeds.empty()) {
    seeds = derive_seeds(s.cfg.master_seed,
                         s.cfg.sweep_count ? s.cfg.sweep_count : 3);
  }
  const std::string sweep = a.name.empty() ? s.cfg.sweep_name : a.name;
  TrainingContext ctx = context(s, sweep);
  SweepOutcome outcome = seed_sweep(s.cfg.finetune, seeds, train, eval, ctx, sweep);
  // Members keep only the sweep split in their metrics; predictions for
  // every held-out split are written so members can feed an ensemble.
  const auto max_length = static_cast<std::size_t>(s.cfg.finetune.max_length);
  for (auto& run : outcome.runs) {
    run.handle.metadata["normalizer"] = s.cfg.normalizer;
    const RunPaths paths = run_paths(s.cfg.out_dir, run.record.run_id);
    for (const DatasetSplit* split : held_out(data)) {
      if (split->empty()) continue;
      write_predictions(
          paths.preds_dir / (std::string(to_string(split->name)) + ".tsv"),
          evaluate(run.handle, *split, max_length, ctx).predictions);
    }
    persist_run(s.cfg.out_dir, run);
  }
  json summary = to_json(outcome.result);
  summary["name"] = sweep;
  summary["split"] = std::string(to_string(s.cfg.eval_split));
  tsv::write_atomic(s.cfg.out_dir / "sweeps" / (sweep + ".json"),
                    summary.dump(2) + "\n");

  for (const auto& [seed, score] : outcome.result.entries) {
    out << "seed " << seed << ": " << format_double(round_half_even(score, 4))
        << '\n';
  }
  for (const auto& [seed, msg] : outcome.result.failures) {
    err << "error: seed " << seed << " failed: " << msg << '\n';
  }
  if (!outcome.result.entries.empty()) {
    out << "mean: " << format_double(outcome.result.mean_rounded()) << '\n';
  }
  return outcome.result.complete() ? kExitOk : kExitFailure;
}

struct ReportArgs {
  std::string runs_dir;
  std::string output;
};

int cmd_report(const GlobalOptions& g, const ReportArgs& a, std::ostream& out,
               std::ostream& err) {
  fs::path runs_dir = a.runs_dir;
  fs::path out_dir = g.out_dir;
  if (runs_dir.empty()) {
    if (out_dir.empty()) out_dir = open_session(g, err).cfg.out_dir;
    runs_dir = out_dir / "runs";
  }
  if (out_dir.empty()) out_dir = runs_dir.parent_path();
  if (!fs::exists(runs_dir)) {
    if (a.runs_dir.empty()) {
      fs::create_directories(runs_dir);
    } else {
      throw MissingInputError("runs directory not found: " + runs_dir.string());
    }
  }

  std::vector<fs::path> record_paths;
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    const fs::path rec = entry.path() / "record.json";
    if (entry.is_directory() && fs::exists(rec)) record_paths.push_back(rec);
  }
  std::sort(record_paths.begin(), record_paths.end());
  std::vector<RunRecord> records;
  for (const auto& p : record_paths) records.push_back(read_record(p));

  std::vector<NamedConfusion> cms;
  for (const auto& r : records) {
    if (r.kind != "ensemble") continue;
    for (const auto& [split, m] : r.metrics) {
      cms.push_back({r.model_name + " (" + split + ")", m.confusion});
    }
  }
  const Report report = build_report(records, cms, sweeps_from_records(records));
  const fs::path prefix =
      a.output.empty() ? out_dir / "report" : fs::path(a.output);
  tsv::write_atomic(fs::path(prefix.string() + ".md"), report.markdown);
  tsv::write_atomic(fs::path(prefix.string() + ".json"),
                    report.json.dump(2) + "\n");
  out << report.markdown;
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Sentiment classification experiment pipeline", "senti"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "Run config file");
  app.add_option("--seed", g.seed, "Override the master seed and run seeds");
  app.add_option("--out-dir", g.out_dir, "Output directory (overrides config)");
  app.add_option("--backend", g.backend, "Model backend (overrides config)");

  PreprocessArgs pre;
  auto* preprocess = app.add_subcommand(
      "preprocess", "Dedup, tag URLs/users, normalize and write splits");
  preprocess->add_option("--input", pre.input, "Single split to process");
  preprocess->add_option("--split", pre.split, "Split name of --input");
  preprocess->add_option("--output", pre.output, "Output TSV for --input");
  preprocess->add_option("--stats", pre.stats, "Stats JSON path");
  preprocess->add_option("--normalizer", pre.normalizer, "identity | nfc");
  preprocess->add_flag("--no-dedup", pre.no_dedup, "Keep duplicate texts");
  preprocess->add_flag("--official", pre.official,
                       "Require the official split sizes");

  MapLabelsArgs ml;
  auto* map_labels =
      app.add_subcommand("map-labels", "Map external labels to the task labels");
  map_labels->add_option("--input", ml.input, "External TSV");
  map_labels->add_option("--mapping", ml.mapping, "original<TAB>mapped file");
  map_labels->add_option("--name", ml.name, "Source name");
  map_labels->add_option("--classes", ml.classes, "Declared class count");
  map_labels->add_option("--output", ml.output, "Output TSV");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fine-tune on the train split");
  train->add_option("--name", tr.name, "Model name for the run id");
  train->add_option("--init", tr.init, "Initial model handle (e.g. from tapt)");

  TrainArgs tr2;
  auto* train2 = app.add_subcommand(
      "train-2ft", "Two-stage fine-tuning: external data, then train split");
  train2->add_option("--name", tr2.name, "Model name for the run id");

  TrainArgs tp;
  auto* tapt = app.add_subcommand("tapt", "Task-adaptive pre-training");
  tapt->add_option("--name", tp.name, "Model name for the run id");

  PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "Write id<TAB>label predictions");
  predict->add_option("--model", pr.model, "Model handle")->required();
  predict->add_option("--input", pr.input, "Split TSV")->required();
  predict->add_option("--split", pr.split, "Split name of --input");
  predict->add_option("--output", pr.output, "Prediction TSV")->required();

  EnsembleArgs en;
  auto* ensemble =
      app.add_subcommand("ensemble", "Majority vote over prediction files");
  ensemble->add_option("--model-pred", en.model_preds,
                       "Prediction file; repeat in priority order (best first)");
  ensemble->add_option("--output", en.output, "Ensemble prediction TSV");
  ensemble->add_option("--gold", en.gold, "Gold split for metrics");
  ensemble->add_option("--gold-split", en.gold_split, "Split name of --gold");
  ensemble->add_option("--metrics", en.metrics, "Metrics JSON path");

  EvaluateArgs ev;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "Score a prediction file against gold");
  evaluate_cmd->add_option("--pred", ev.pred, "Prediction TSV")->required();
  evaluate_cmd->add_option("--gold", ev.gold, "Gold split TSV")->required();
  evaluate_cmd->add_option("--split", ev.split, "Split name of --gold");
  evaluate_cmd->add_option("--output", ev.output, "Metrics JSON path");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("seed-sweep", "Fine-tune once per seed");
  sweep->add_option("--name", sw.name, "Sweep name");

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Summarize stored run records");
  report->add_option("--runs-dir", rp.runs_dir, "Directory of run folders");
  report->add_option("--output", rp.output, "Output prefix (.md and .json)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("senti");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*preprocess) return cmd_preprocess(g, pre, out, err);
    if (*map_labels) return cmd_map_labels(g, ml, out, err);
    if (*train) return cmd_train(g, tr, out, err);
    if (*train2) return cmd_train_2ft(g, tr2, out, err);
    if (*tapt) return cmd_tapt(g, tp, out, err);
    if (*predict) return cmd_predict(g, pr, out, err);
    if (*ensemble) return cmd_ensemble(g, en, out, err);
    if (*evaluate_cmd) return cmd_evaluate(ev, out);
    if (*sweep) return cmd_seed_sweep(g, sw, out, err);
    if (*report) return cmd_report(g, rp, out, err);
  } catch (const MissingInputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace senti::cli
