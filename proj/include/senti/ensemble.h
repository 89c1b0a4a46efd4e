#ifndef SENTI_ENSEMBLE_H_
#define SENTI_ENSEMBLE_H_

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "senti/backend.h"
#include "senti/label.h"

namespace senti {

// Majority vote over one label per model, index 0 being the best model.
// Returns the label with the strictly highest count; when the highest count
// is shared by two or more labels, returns labels[0].
// Throws ConfigError on an empty list.
SentimentLabel vote(std::span<const SentimentLabel> labels);

// Per-model predictions ordered by priority (index 0 = best dev-test score).
struct PredictionSet {
  std::vector<std::pair<std::string, PredictionVector>> models;
};

// Votes example by example. Output scores are vote fractions per class.
// Throws MisalignedPredictionsError when models disagree on length or ids,
// ConfigError when the set is empty.
PredictionVector ensemble_predict(const PredictionSet& ps);

// `id<TAB>label` files. Loaded vectors get one-hot scores.
void write_predictions(const std::filesystem::path& path,
                       const PredictionVector& pv);
PredictionVector read_predictions(const std::filesystem::path& path);

}  // namespace senti

#endif  // SENTI_ENSEMBLE_H_
