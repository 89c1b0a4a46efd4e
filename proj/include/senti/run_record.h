#ifndef SENTI_RUN_RECORD_H_
#define SENTI_RUN_RECORD_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "senti/config.h"
#include "senti/metrics.h"

namespace senti {

struct StageRecord {
  std::string tag;  // e.g. "2FT-stage1"
  KeyValues config;
  std::string config_hash;
  std::size_t train_examples = 0;
  bool skipped = false;

  friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

// What one run did and how it scored. Written once as
// runs/<run_id>/record.json and never modified.
struct RunRecord {
  std::string run_id;
  std::string kind;  // finetune | 2ft | tapt | ensemble
  std::string model_name;
  std::string backend;
  std::uint64_t seed = 0;
  KeyValues config;
  std::string config_hash;
  std::vector<std::string> stage_tags;
  std::vector<StageRecord> stages;
  std::map<std::string, MetricsResult> metrics;  // split name -> metrics
  std::optional<std::string> sweep;              // seed-sweep group
  std::vector<std::string> warnings;
  KeyValues extra;
  std::string started_at;
  std::string finished_at;

  // True when config_hash matches hash_kv(config).
  bool consistent() const { return config_hash == hash_kv(config); }
};

nlohmann::json to_json(const RunRecord& r);
// Throws ParseError on schema problems and IntegrityError when the stored
// config hash does not match the stored config.
RunRecord record_from_json(const nlohmann::json& j);

// Atomic write (temporary file + rename).
void write_record(const std::filesystem::path& path, const RunRecord& r);
RunRecord read_record(const std::filesystem::path& path);

// UTC, ISO-8601 with seconds.
std::string utc_timestamp();

}  // namespace senti

#endif  // SENTI_RUN_RECORD_H_
