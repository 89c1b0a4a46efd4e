#include "senti/label.h"

namespace senti {

std::string_view to_string(SentimentLabel label) {
  switch (label) {
    case SentimentLabel::kNegative:
      return "Negative";
    case SentimentLabel::kNeutral:
      return "Neutral";
    case SentimentLabel::kPositive:
      return "Positive";
  }
  return "?";
}

std::optional<SentimentLabel> parse_label(std::string_view text) {
  for (SentimentLabel l : kAllLabels) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

}  // namespace senti
