#ifndef SENTI_REPORT_H_
#define SENTI_REPORT_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "senti/metrics.h"
#include "senti/run_record.h"

namespace senti {

struct NamedConfusion {
  std::string name;
  ConfusionMatrix3 cm;
};

struct NamedSweep {
  std::string name;
  SeedSweepResult result;
};

struct Report {
  nlohmann::json json;
  std::string markdown;
};

// Score tables grouped by backend (sweep members excluded), one confusion
// block per matrix, and a seeds-by-sweep table with an "avg." row.
// Scores print with 3 decimals except the seed table, which uses 4.
Report build_report(const std::vector<RunRecord>& runs,
                    const std::vector<NamedConfusion>& confusions,
                    const std::vector<NamedSweep>& sweeps);

// Groups records carrying a sweep name; each member contributes the
// micro-F1 of its single evaluated split. Groups keep first-seen order.
std::vector<NamedSweep> sweeps_from_records(const std::vector<RunRecord>& runs);

// Markdown table for one confusion matrix plus micro-F1 and recalls.
std::string confusion_markdown(const std::string& name,
                               const ConfusionMatrix3& cm);

}  // namespace senti

#endif  // SENTI_REPORT_H_
