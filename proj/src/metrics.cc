#include "senti/metrics.h"

#include <cmath>

#include "senti/error.h"

namespace senti {

std::uint64_t ConfusionMatrix3::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto v : row) t += v;
  }
  return t;
}

std::uint64_t ConfusionMatrix3::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) t += counts[c][c];
  return t;
}

std::uint64_t ConfusionMatrix3::row_sum(SentimentLabel gold) const {
  std::uint64_t t = 0;
  for (auto v : counts[index_of(gold)]) t += v;
  return t;
}

std::uint64_t ConfusionMatrix3::col_sum(SentimentLabel pred) const {
  std::uint64_t t = 0;
  for (const auto& row : counts) t += row[index_of(pred)];
  return t;
}

ConfusionMatrix3 confusion(std::span<const SentimentLabel> gold,
                           std::span<const SentimentLabel> pred) {
  if (gold.size() != pred.size()) {
    throw MisalignedPredictionsError(
        "gold has " + std::to_string(gold.size()) + " labels, predictions " +
        std::to_string(pred.size()));
  }
  ConfusionMatrix3 cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++cm.counts[index_of(gold[i])][index_of(pred[i])];
  }
  return cm;
}

ConfusionMatrix3 confusion(const DatasetSplit& gold,
                           const PredictionVector& pred) {
  if (gold.size() != pred.size() || pred.ids.size() != pred.size()) {
    throw MisalignedPredictionsError(
        "gold split has " + std::to_string(gold.size()) +
        " examples, predictions " + std::to_string(pred.size()));
  }
  std::vector<SentimentLabel> labels;
  labels.reserve(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& ex = gold.examples[i];
    if (ex.id != pred.ids[i]) {
      throw MisalignedPredictionsError("row " + std::to_string(i + 1) +
                                       ": gold id '" + ex.id +
                                       "' vs prediction id '" + pred.ids[i] +
                                       "'");
    }
    if (!ex.label) {
      throw ParseError("gold example '" + ex.id + "' has no label");
    }
    labels.push_back(*ex.label);
  }
  return confusion(labels, pred.labels);
}

double micro_f1(const ConfusionMatrix3& cm) {
  const auto total = cm.total();
  if (total == 0) throw EmptyMatrixError("confusion matrix is empty");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::array<std::optional<double>, kNumLabels> per_class_recall(
    const ConfusionMatrix3& cm) {
  std::array<std::optional<double>, kNumLabels> out{};
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const auto row = cm.row_sum(label_at(c));
    if (row > 0) {
      out[c] = static_cast<double>(cm.counts[c][c]) / static_cast<double>(row);
    }
  }
  return out;
}

double round_half_even(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // nearbyint honours the default round-to-nearest-even mode.
  return std::nearbyint(value * scale) / scale;
}

MetricsResult MetricsResult::from(const ConfusionMatrix3& cm) {
  return MetricsResult{senti::micro_f1(cm), per_class_recall(cm), cm};
}

namespace {

nlohmann::json optional_score(const std::optional<double>& v) {
  if (!v) return nullptr;
  return round_half_even(*v, 4);
}

}  // namespace

nlohmann::json to_json(const MetricsResult& m) {
  nlohmann::json confusion = nlohmann::json::array();
  for (const auto& row : m.confusion.counts) {
    confusion.push_back(nlohmann::json(row));
  }
  return {
      {"micro_f1", round_half_even(m.micro_f1, 4)},
      {"per_class_recall",
       {{"negative", optional_score(m.recall[0])},
        {"neutral", optional_score(m.recall[1])},
        {"positive", optional_score(m.recall[2])}}},
      {"confusion", confusion},
      {"n", m.confusion.total()},
  };
}

MetricsResult metrics_from_json(const nlohmann::json& j) {
  ConfusionMatrix3 cm;
  const auto& rows = j.at("confusion");
  if (rows.size() != kNumLabels) throw ParseError("confusion must be 3x3");
  for (std::size_t r = 0; r < kNumLabels; ++r) {
    if (rows[r].size() != kNumLabels) throw ParseError("confusion must be 3x3");
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      cm.counts[r][c] = rows[r][c].get<std::uint64_t>();
    }
  }
  if (cm.total() == 0) return MetricsResult{0.0, {}, cm};
  return MetricsResult::from(cm);
}

SeedSweepResult aggregate_seed_scores(
    std::vector<std::pair<std::uint64_t, double>> entries) {
  if (entries.empty()) throw ConfigError("seed sweep has no scores");
  SeedSweepResult r;
  double sum = 0.0;
  for (const auto& [_, score] : entries) sum += score;
  r.mean = sum / static_cast<double>(entries.size());
  r.entries = std::move(entries);
  return r;
}

nlohmann::json to_json(const SeedSweepResult& r) {
  nlohmann::json seeds = nlohmann::json::array();
  for (const auto& [seed, score] : r.entries) {
    seeds.push_back({{"seed", seed}, {"micro_f1", round_half_even(score, 4)}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& [seed, msg] : r.failures) {
    failures.push_back({{"seed", seed}, {"error", msg}});
  }
  nlohmann::json j = {{"seeds", seeds},
                      {"failures", failures},
                      {"complete", r.complete()}};
  j["mean"] = r.entries.empty() ? nlohmann::json(nullptr)
                                : nlohmann::json(r.mean_rounded());
  return j;
}

}  // namespace senti
