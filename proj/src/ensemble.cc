#include "senti/ensemble.h"

#include <sstream>

#include "senti/error.h"
#include "senti/tsv.h"

namespace senti {

SentimentLabel vote(std::span<const SentimentLabel> labels) {
  if (labels.empty()) throw ConfigError("vote needs at least one label");
  std::array<std::size_t, kNumLabels> counts{};
  for (SentimentLabel l : labels) ++counts[index_of(l)];
  std::size_t best = 0;
  std::size_t ties = 0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    if (counts[c] > counts[best]) {
      best = c;
      ties = 1;
    } else if (counts[c] == counts[best]) {
      ++ties;
    }
  }
  // ties = number of labels sharing the maximum count.
  if (ties > 1) return labels[0];
  return label_at(best);
}

PredictionVector ensemble_predict(const PredictionSet& ps) {
  if (ps.models.empty()) throw ConfigError("ensemble needs at least one model");
  const auto& [first_name, first] = ps.models.front();
  const std::size_t n = first.size();
  for (const auto& [name, pv] : ps.models) {
    if (pv.size() != n || pv.ids.size() != n) {
      throw MisalignedPredictionsError(
          "model '" + name + "' has " + std::to_string(pv.size()) +
          " predictions, '" + first_name + "' has " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (pv.ids[i] != first.ids[i]) {
        throw MisalignedPredictionsError(
            "model '" + name + "' row " + std::to_string(i + 1) + " id '" +
            pv.ids[i] + "' != '" + first.ids[i] + "'");
      }
    }
  }

  PredictionVector out;
  out.ids = first.ids;
  out.labels.reserve(n);
  out.scores.reserve(n);
  std::vector<SentimentLabel> column(ps.models.size());
  const double weight = 1.0 / static_cast<double>(ps.models.size());
  for (std::size_t i = 0; i < n; ++i) {
    ClassScores fractions{};
    for (std::size_t m = 0; m < ps.models.size(); ++m) {
      column[m] = ps.models[m].second.labels[i];
      fractions[index_of(column[m])] += weight;
    }
    out.labels.push_back(vote(column));
    out.scores.push_back(fractions);
  }
  return out;
}

void write_predictions(const std::filesystem::path& path,
                       const PredictionVector& pv) {
  std::ostringstream out;
  out << "id\tlabel\n";
  for (std::size_t i = 0; i < pv.size(); ++i) {
    out << pv.ids[i] << '\t' << to_string(pv.labels[i]) << '\n';
  }
  tsv::write_atomic(path, out.str());
}

PredictionVector read_predictions(const std::filesystem::path& path) {
  const auto table = tsv::read(path);
  if (table.header.size() != 2 || table.header[0] != "id" ||
      table.header[1] != "label") {
    throw ParseError(path.string() + ": expected header 'id\\tlabel'");
  }
  PredictionVector pv;
  for (const auto& row : table.rows) {
    const std::string where = path.string() + ":" + std::to_string(row.line);
    if (row.fields.size() != 2) throw ParseError(where + ": expected 2 fields");
    const auto label = parse_label(row.fields[1]);
    if (!label) {
      throw ParseError(where + ": unknown label '" + row.fields[1] + "'");
    }
    ClassScores one_hot{};
    one_hot[index_of(*label)] = 1.0;
    pv.ids.push_back(row.fields[0]);
    pv.labels.push_back(*label);
    pv.scores.push_back(one_hot);
  }
  return pv;
}

}  // namespace senti
