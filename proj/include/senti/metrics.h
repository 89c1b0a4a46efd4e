#ifndef SENTI_METRICS_H_
#define SENTI_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "senti/backend.h"
#include "senti/corpus.h"
#include "senti/label.h"

namespace senti {

// counts[true][pred], both axes ordered Negative, Neutral, Positive.
struct ConfusionMatrix3 {
  std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels> counts{};

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(SentimentLabel gold) const;
  std::uint64_t col_sum(SentimentLabel pred) const;

  friend bool operator==(const ConfusionMatrix3&, const ConfusionMatrix3&) = default;
};

// Throws MisalignedPredictionsError when lengths differ.
ConfusionMatrix3 confusion(std::span<const SentimentLabel> gold,
                           std::span<const SentimentLabel> pred);

// Aligns by position and checks ids match. Throws
// MisalignedPredictionsError on length or id mismatch and ParseError when a
// gold example has no label.
ConfusionMatrix3 confusion(const DatasetSplit& gold, const PredictionVector& pred);

// Micro-averaged F1. With exactly one gold and one predicted label per
// example every false positive is some other class' false negative, so
// micro precision == micro recall == trace / total.
// Throws EmptyMatrixError when total == 0.
double micro_f1(const ConfusionMatrix3& cm);

// counts[c][c] / row_sum(c); nullopt for classes with no gold examples.
std::array<std::optional<double>, kNumLabels> per_class_recall(
    const ConfusionMatrix3& cm);

// Rounds to `decimals` places, ties to even.
double round_half_even(double value, int decimals);

struct MetricsResult {
  double micro_f1 = 0.0;  // unrounded
  std::array<std::optional<double>, kNumLabels> recall{};
  ConfusionMatrix3 confusion;

  static MetricsResult from(const ConfusionMatrix3& cm);
};

// {micro_f1, per_class_recall:{negative,neutral,positive}, confusion, n}
// with scores rounded to 4 decimals.
nlohmann::json to_json(const MetricsResult& m);
MetricsResult metrics_from_json(const nlohmann::json& j);

struct SeedSweepResult {
  // In the order the seeds were run.
  std::vector<std::pair<std::uint64_t, double>> entries;
  double mean = 0.0;  // unrounded arithmetic mean of the entries
  std::vector<std::pair<std::uint64_t, std::string>> failures;

  double mean_rounded() const { return round_half_even(mean, 4); }
  bool complete() const { return failures.empty(); }
};

// Builds a result from per-seed scores. Throws ConfigError when empty.
SeedSweepResult aggregate_seed_scores(
    std::vector<std::pair<std::uint64_t, double>> entries);

nlohmann::json to_json(const SeedSweepResult& r);

}  // namespace senti

#endif  // SENTI_METRICS_H_
