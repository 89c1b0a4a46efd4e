#include "senti/run_record.h"

#include <chrono>
#include <ctime>
#include <fstream>

#include "senti/error.h"
#include "senti/tsv.h"

namespace senti {

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : r.stages) {
    stages.push_back({{"tag", s.tag},
                      {"config", s.config},
                      {"config_hash", s.config_hash},
                      {"train_examples", s.train_examples},
                      {"skipped", s.skipped}});
  }
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [split, m] : r.metrics) metrics[split] = to_json(m);
  nlohmann::json j = {{"run_id", r.run_id},
                      {"kind", r.kind},
                      {"model_name", r.model_name},
                      {"backend", r.backend},
                      {"seed", r.seed},
                      {"config", r.config},
                      {"config_hash", r.config_hash},
                      {"stage_tags", r.stage_tags},
                      {"stages", stages},
                      {"metrics", metrics},
                      {"warnings", r.warnings},
                      {"extra", r.extra},
                      {"started_at", r.started_at},
                      {"finished_at", r.finished_at}};
  j["sweep"] = r.sweep ? nlohmann::json(*r.sweep) : nlohmann::json(nullptr);
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.run_id = j.at("run_id").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.model_name = j.at("model_name").get<std::string>();
    r.backend = j.at("backend").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config").get<KeyValues>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.stage_tags = j.at("stage_tags").get<std::vector<std::string>>();
    for (const auto& s : j.at("stages")) {
      r.stages.push_back(StageRecord{s.at("tag").get<std::string>(),
                                     s.at("config").get<KeyValues>(),
                                     s.at("config_hash").get<std::string>(),
                                     s.at("train_examples").get<std::size_t>(),
                                     s.at("skipped").get<bool>()});
    }
    for (const auto& [split, m] : j.at("metrics").items()) {
      r.metrics.emplace(split, metrics_from_json(m));
    }
    if (!j.at("sweep").is_null()) r.sweep = j.at("sweep").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.extra = j.at("extra").get<KeyValues>();
    r.started_at = j.at("started_at").get<std::string>();
    r.finished_at = j.at("finished_at").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("run record: ") + e.what());
  }
  if (!r.consistent()) {
    throw IntegrityError("run record '" + r.run_id +
                         "': config hash does not match stored config");
  }
  return r;
}

void write_record(const std::filesystem::path& path, const RunRecord& r) {
  tsv::write_atomic(path, to_json(r).dump(2) + "\n");
}

RunRecord read_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return record_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace senti
