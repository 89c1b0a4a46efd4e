#include "senti/training.h"

#include <set>
#include <unordered_map>

#include "senti/augment.h"
#include "senti/error.h"
#include "senti/keyed_rng.h"
#include "senti/tsv.h"

namespace senti {

AugmentedEpochSource::AugmentedEpochSource(EncodedSplit data, double drop_ratio,
                                           std::uint64_t seed)
    : data_(std::move(data)), drop_ratio_(drop_ratio), seed_(seed) {
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!data_.labels[i]) {
      throw ParseError("training example '" + data_.ids[i] + "' has no label");
    }
  }
}

SentimentLabel AugmentedEpochSource::label(std::size_t index) const {
  return *data_.labels[index];
}

TokenSequence AugmentedEpochSource::sequence(int epoch,
                                             std::size_t index) const {
  const TokenSequence& seq = data_.sequences[index];
  if (drop_ratio_ <= 0.0) return seq;
  return token_drop(seq, DropSpec{drop_ratio_,
                                  {seed_, static_cast<std::uint64_t>(epoch),
                                   static_cast<std::uint64_t>(index)}});
}

std::string make_run_id(std::string_view kind, std::string_view model_name,
                        std::uint64_t seed, std::string_view config_hash) {
  std::string id(kind);
  id += '-';
  for (char c : model_name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    id += ok ? c : '_';
  }
  id += "-s" + std::to_string(seed) + "-";
  id += config_hash.substr(0, 8);
  return id;
}

namespace {

KeyValues prefixed(const KeyValues& kv, const std::string& prefix) {
  KeyValues out;
  for (const auto& [k, v] : kv) out.emplace(prefix + k, v);
  return out;
}

void stamp_handle(ModelHandle& h, const RunRecord& r, const Tokenizer& tok,
                  int max_length) {
  h.id = r.run_id;
  h.stage_tags = r.stage_tags;
  h.metadata["tokenizer"] = tok.name();
  h.metadata["max_length"] = std::to_string(max_length);
  h.metadata["model_name"] = r.model_name;
}

}  // namespace

TrainResult finetune(const FinetuneConfig& cfg, const DatasetSplit& train,
                     TrainingContext& ctx, const ModelHandle* init) {
  cfg.validate();
  TrainResult result;
  RunRecord& rec = result.record;
  rec.kind = "finetune";
  rec.model_name = ctx.model_name;
  rec.backend = ctx.backend.name();
  rec.seed = cfg.seed;
  rec.config = cfg.to_kv();
  // The starting checkpoint is part of the run's identity.
  if (init) rec.config["init"] = init->id;
  rec.config_hash = hash_kv(rec.config);
  rec.run_id = make_run_id(rec.kind, rec.model_name, rec.seed, rec.config_hash);
  rec.stage_tags = {"FT"};
  if (cfg.token_drop_ratio > 0) rec.stage_tags.push_back("RTD");
  if (init) {
    for (const auto& t : init->stage_tags) {
      if (t == "TAPT") rec.stage_tags.push_back("TAPT");
    }
  }
  rec.stages.push_back(StageRecord{"FT", rec.config, rec.config_hash,
                                   train.size(), false});
  rec.started_at = ctx.clock();

  try {
    if (train.empty()) throw EmptyDatasetError("training split is empty");
    AugmentedEpochSource source(
        encode_split(train, ctx.tokenizer,
                     static_cast<std::size_t>(cfg.max_length)),
        cfg.token_drop_ratio, cfg.seed);
    result.handle = ctx.backend.train(cfg, source, init);
  } catch (const Error&) {
    rethrow_with_context("run " + rec.run_id + ": ");
  }
  rec.finished_at = ctx.clock();
  stamp_handle(result.handle, rec, ctx.tokenizer, cfg.max_length);
  return result;
}

void check_no_leakage(const DatasetSplit& external,
                      const std::vector<const DatasetSplit*>& held_out) {
  std::unordered_map<std::string, std::string> texts;  // text -> where
  for (const DatasetSplit* split : held_out) {
    for (const auto& ex : split->examples) {
      texts.emplace(ex.text, std::string(to_string(split->name)) + " id '" +
                                 ex.id + "'");
    }
  }
  for (const auto& ex : external.examples) {
    auto it = texts.find(ex.text);
    if (it != texts.end()) {
      throw LeakageError("external example '" + ex.id +
                         "' duplicates held-out " + it->second);
    }
  }
}

TrainResult two_stage_finetune(const FinetuneConfig& stage1,
                               const DatasetSplit& external,
                               const FinetuneConfig& stage2,
                               const DatasetSplit& train,
                               const std::vector<const DatasetSplit*>& held_out,
                               TrainingContext& ctx) {
  stage1.validate();
  stage2.validate();
  check_no_leakage(external, held_out);

  RunRecord rec;
  rec.kind = "2ft";
  rec.model_name = ctx.model_name;
  rec.backend = ctx.backend.name();
  rec.seed = stage2.seed;
  rec.config = prefixed(stage1.to_kv(), "stage1.");
  rec.config.merge(prefixed(stage2.to_kv(), "stage2."));
  rec.config_hash = hash_kv(rec.config);
  rec.run_id = make_run_id(rec.kind, rec.model_name, rec.seed, rec.config_hash);
  rec.started_at = ctx.clock();

  StageRecord s1{"2FT-stage1", stage1.to_kv(), stage1.hash(), external.size(),
                 external.empty()};
  StageRecord s2{"2FT-stage2", stage2.to_kv(), stage2.hash(), train.size(),
                 false};

  TrainResult final_stage;
  if (external.empty()) {
    rec.warnings.push_back(
        "external set is empty; stage 1 skipped, plain fine-tuning only");
    final_stage = finetune(stage2, train, ctx);
  } else {
    TrainResult first = finetune(stage1, external, ctx);
    rec.extra["stage1_run"] = first.record.run_id;
    final_stage = finetune(stage2, train, ctx, &first.handle);
  }

  rec.stages = {s1, s2};
  rec.stage_tags = {"2FT"};
  if (stage1.token_drop_ratio > 0 || stage2.token_drop_ratio > 0) {
    rec.stage_tags.push_back("RTD");
  }
  rec.finished_at = ctx.clock();

  TrainResult result{std::move(final_stage.handle), std::move(rec)};
  stamp_handle(result.handle, result.record, ctx.tokenizer, stage2.max_length);
  return result;
}

TrainResult tapt_pretrain(const TaptConfig& cfg, const DatasetSplit& train,
                          TrainingContext& ctx) {
  cfg.validate();
  if (!ctx.backend.supports_pretraining()) {
    throw CapabilityError("backend '" + ctx.backend.name() +
                          "' cannot pre-train");
  }
  if (train.empty()) throw EmptyDatasetError("TAPT corpus has no texts");

  TrainResult result;
  RunRecord& rec = result.record;
  rec.kind = "tapt";
  rec.model_name = ctx.model_name;
  rec.backend = ctx.backend.name();
  rec.seed = cfg.seed;
  rec.config = cfg.to_kv();
  rec.config_hash = cfg.hash();
  rec.run_id = make_run_id(rec.kind, rec.model_name, rec.seed, rec.config_hash);
  rec.stage_tags = {"TAPT"};
  rec.stages.push_back(StageRecord{"TAPT", rec.config, rec.config_hash,
                                   train.size(), false});
  rec.started_at = ctx.clock();

  MaskedCorpus corpus;
  corpus.vocab_size = ctx.tokenizer.vocab_size();
  try {
    for (std::size_t i = 0; i < train.size(); ++i) {
      const RngKey key{cfg.seed, 0, i};
      TokenSequence seq =
          encode_truncate(train.examples[i].text, ctx.tokenizer,
                          static_cast<std::size_t>(cfg.max_length));
      seq = token_drop(seq, DropSpec{cfg.token_drop_ratio, key});
      MaskedSequence m = mlm_mask(
          seq, MaskSpec{cfg.mlm_probability, key, ctx.tokenizer.mask_id()});
      corpus.eligible_positions += seq.content_count();
      corpus.masked_positions += m.labels.size();
      corpus.sequences.push_back(std::move(m));
    }
    result.handle = ctx.backend.pretrain_tapt(cfg, corpus);
  } catch (const Error&) {
    rethrow_with_context("run " + rec.run_id + ": ");
  }
  rec.extra["lambda_disc"] = format_double(cfg.lambda_disc);
  rec.extra["mlm_probability"] = format_double(cfg.mlm_probability);
  rec.extra["masked_positions"] = std::to_string(corpus.masked_positions);
  rec.extra["eligible_positions"] = std::to_string(corpus.eligible_positions);
  rec.finished_at = ctx.clock();
  stamp_handle(result.handle, rec, ctx.tokenizer, cfg.max_length);
  return result;
}

Evaluation evaluate(const ModelHandle& handle, const DatasetSplit& split,
                    std::size_t max_length, TrainingContext& ctx) {
  Evaluation ev;
  const EncodedSplit encoded = encode_split(split, ctx.tokenizer, max_length);
  ev.predictions = ctx.backend.predict(handle, encoded);
  if (split.labeled && !split.empty()) {
    ev.metrics = MetricsResult::from(confusion(split, ev.predictions));
  }
  return ev;
}

SweepOutcome seed_sweep(const FinetuneConfig& cfg,
                        const std::vector<std::uint64_t>& seeds,
                        const DatasetSplit& train,
                        const DatasetSplit& eval_split, TrainingContext& ctx,
                        const std::string& sweep_name) {
  if (seeds.empty()) throw ConfigError("seed sweep needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() !=
      seeds.size()) {
    throw ConfigError("seed sweep seeds must be distinct");
  }
  if (!eval_split.labeled || eval_split.empty()) {
    throw ConfigError("seed sweep evaluation split must be labeled and non-empty");
  }

  SweepOutcome out;
  std::vector<std::pair<std::uint64_t, double>> scores;
  for (std::uint64_t seed : seeds) {
    FinetuneConfig c = cfg;
    c.seed = seed;
    try {
      TrainResult run = finetune(c, train, ctx);
      const Evaluation ev = evaluate(run.handle, eval_split,
                                     static_cast<std::size_t>(c.max_length), ctx);
      run.record.metrics.emplace(std::string(to_string(eval_split.name)),
                                 *ev.metrics);
      run.record.sweep = sweep_name;
      scores.emplace_back(seed, ev.metrics->micro_f1);
      out.runs.push_back(std::move(run));
    } catch (const Error& e) {
      out.result.failures.emplace_back(seed, e.what());
    }
  }
  auto failures = std::move(out.result.failures);
  if (!scores.empty()) out.result = aggregate_seed_scores(std::move(scores));
  out.result.failures = std::move(failures);
  return out;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed,
                                        std::size_t count) {
  KeyedRng rng({master_seed, 0, 0}, RngStream::kSeedDerivation);
  std::vector<std::uint64_t> seeds;
  std::set<std::uint64_t> seen;
  while (seeds.size() < count) {
    const std::uint64_t s = rng.below(1'000'000);
    if (seen.insert(s).second) seeds.push_back(s);
  }
  return seeds;
}

RunPaths run_paths(const std::filesystem::path& out_dir,
                   const std::string& run_id) {
  RunPaths p;
  p.dir = out_dir / "runs" / run_id;
  p.record = p.dir / "record.json";
  p.model = p.dir / "model.bin";
  p.metrics = p.dir / "metrics.json";
  p.preds_dir = p.dir / "preds";
  return p;
}

void persist_run(const std::filesystem::path& out_dir, const TrainResult& run) {
  const RunPaths p = run_paths(out_dir, run.record.run_id);
  save_handle(p.model, run.handle);
  if (!run.record.metrics.empty()) {
    nlohmann::json metrics = nlohmann::json::object();
    for (const auto& [split, m] : run.record.metrics) metrics[split] = to_json(m);
    tsv::write_atomic(p.metrics, metrics.dump(2) + "\n");
  }
  write_record(p.record, run.record);
}

}  // namespace senti
