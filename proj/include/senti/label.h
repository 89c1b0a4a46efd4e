#ifndef SENTI_LABEL_H_
#define SENTI_LABEL_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace senti {

// The task's closed label set. The numeric order (Negative < Neutral <
// Positive) is the axis order of confusion matrices and the tie order of
// argmax over class scores.
enum class SentimentLabel : int { kNegative = 0, kNeutral = 1, kPositive = 2 };

inline constexpr std::size_t kNumLabels = 3;
inline constexpr std::array<SentimentLabel, kNumLabels> kAllLabels = {
    SentimentLabel::kNegative, SentimentLabel::kNeutral,
    SentimentLabel::kPositive};

inline constexpr std::size_t index_of(SentimentLabel l) {
  return static_cast<std::size_t>(l);
}
inline constexpr SentimentLabel label_at(std::size_t i) {
  return static_cast<SentimentLabel>(static_cast<int>(i));
}

// "Negative" | "Neutral" | "Positive".
std::string_view to_string(SentimentLabel label);

// Exact, case-sensitive inverse of to_string.
std::optional<SentimentLabel> parse_label(std::string_view text);

}  // namespace senti

#endif  // SENTI_LABEL_H_
