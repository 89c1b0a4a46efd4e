#include "senti/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace senti {

namespace {

std::string fixed(double v, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals,
                round_half_even(v, decimals));
  return buf;
}

std::string fixed(const std::optional<double>& v, int decimals) {
  return v ? fixed(*v, decimals) : "n/a";
}

std::string join_tags(const std::vector<std::string>& tags) {
  std::string out;
  for (const auto& t : tags) {
    if (!out.empty()) out += '+';
    out += t;
  }
  return out;
}

}  // namespace

std::string confusion_markdown(const std::string& name,
                               const ConfusionMatrix3& cm) {
  static constexpr const char* kShort[] = {"Neg", "Neut", "Pos"};
  std::ostringstream md;
  md << "### Confusion matrix: " << name << "\n\n";
  md << "| True \\ Pred | Neg | Neut | Pos |\n|---|---:|---:|---:|\n";
  for (std::size_t r = 0; r < kNumLabels; ++r) {
    md << "| " << kShort[r];
    for (std::size_t c = 0; c < kNumLabels; ++c) md << " | " << cm.counts[r][c];
    md << " |\n";
  }
  md << '\n';
  if (cm.total() > 0) {
    const auto recall = per_class_recall(cm);
    md << "micro-F1: " << fixed(micro_f1(cm), 3) << " (n = " << cm.total()
       << ")  \n";
    md << "recall: Negative " << fixed(recall[0], 3) << ", Neutral "
       << fixed(recall[1], 3) << ", Positive " << fixed(recall[2], 3) << "\n\n";
  }
  return md.str();
}

std::vector<NamedSweep> sweeps_from_records(const std::vector<RunRecord>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<std::uint64_t, double>>> groups;
  for (const auto& r : runs) {
    if (!r.sweep || r.metrics.size() != 1) continue;
    if (!groups.count(*r.sweep)) order.push_back(*r.sweep);
    groups[*r.sweep].emplace_back(r.seed, r.metrics.begin()->second.micro_f1);
  }
  std::vector<NamedSweep> out;
  for (const auto& name : order) {
    auto& entries = groups[name];
    std::sort(entries.begin(), entries.end());
    out.push_back(NamedSweep{name, aggregate_seed_scores(entries)});
  }
  return out;
}

Report build_report(const std::vector<RunRecord>& runs,
                    const std::vector<NamedConfusion>& confusions,
                    const std::vector<NamedSweep>& sweeps) {
  Report report;
  std::ostringstream md;
  md << "# Experiment report\n\n";

  // Per-backend score tables.
  std::map<std::string, std::vector<const RunRecord*>> by_backend;
  for (const auto& r : runs) {
    if (!r.sweep) by_backend[r.backend].push_back(&r);
  }
  nlohmann::json runs_json = nlohmann::json::object();
  for (auto& [backend, members] : by_backend) {
    std::sort(members.begin(), members.end(),
              [](const RunRecord* a, const RunRecord* b) {
                return a->run_id < b->run_id;
              });
    std::set<std::string> splits;
    for (const auto* r : members) {
      for (const auto& [split, _] : r->metrics) splits.insert(split);
    }
    nlohmann::json rows = nlohmann::json::array();
    md << "## Backend: " << backend << "\n\n| Model | Run | Tags |";
    for (const auto& s : splits) md << ' ' << s << " |";
    md << "\n|---|---|---|";
    for (std::size_t i = 0; i < splits.size(); ++i) md << "---:|";
    md << '\n';
    for (const auto* r : members) {
      nlohmann::json scores = nlohmann::json::object();
      md << "| " << r->model_name << " | " << r->run_id << " | "
         << join_tags(r->stage_tags) << " |";
      for (const auto& s : splits) {
        auto it = r->metrics.find(s);
        if (it == r->metrics.end()) {
          md << " - |";
        } else {
          md << ' ' << fixed(it->second.micro_f1, 3) << " |";
          scores[s] = round_half_even(it->second.micro_f1, 4);
        }
      }
      md << '\n';
      rows.push_back({{"run_id", r->run_id},
                      {"model_name", r->model_name},
                      {"kind", r->kind},
                      {"seed", r->seed},
                      {"stage_tags", r->stage_tags},
                      {"micro_f1", scores}});
    }
    md << '\n';
    runs_json[backend] = rows;
  }

  nlohmann::json cms = nlohmann::json::array();
  for (const auto& c : confusions) {
    nlohmann::json entry = {{"name", c.name}};
    if (c.cm.total() > 0) {
      entry["metrics"] = to_json(MetricsResult::from(c.cm));
    } else {
      entry["metrics"] = nullptr;
    }
    cms.push_back(entry);
    md << confusion_markdown(c.name, c.cm);
  }

  nlohmann::json sweeps_json = nlohmann::json::array();
  if (!sweeps.empty()) {
    std::vector<std::uint64_t> seeds;
    std::set<std::uint64_t> seen;
    for (const auto& s : sweeps) {
      for (const auto& [seed, _] : s.result.entries) {
        if (seen.insert(seed).second) seeds.push_back(seed);
      }
    }
    md << "## Seed sweeps\n\n| Seed |";
    for (const auto& s : sweeps) md << ' ' << s.name << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < sweeps.size(); ++i) md << "---:|";
    md << '\n';
    for (std::uint64_t seed : seeds) {
      md << "| " << seed << " |";
      for (const auto& s : sweeps) {
        auto it = std::find_if(s.result.entries.begin(), s.result.entries.end(),
                               [seed](const auto& e) { return e.first == seed; });
        md << ' '
           << (it == s.result.entries.end() ? std::string("-")
                                            : fixed(it->second, 4))
           << " |";
      }
      md << '\n';
    }
    md << "| avg. |";
    for (const auto& s : sweeps) {
      md << ' '
         << (s.result.entries.empty() ? std::string("-")
                                      : fixed(s.result.mean, 4))
         << " |";
    }
    md << "\n\n";
    for (const auto& s : sweeps) {
      nlohmann::json j = to_json(s.result);
      j["name"] = s.name;
      sweeps_json.push_back(j);
    }
  }

  if (runs.empty() && confusions.empty() && sweeps.empty()) {
    md << "_No runs found._\n";
  }

  report.json = {{"runs", runs_json},
                 {"confusion", cms},
                 {"seed_sweeps", sweeps_json}};
  report.markdown = md.str();
  return report;
}

}  // namespace senti
