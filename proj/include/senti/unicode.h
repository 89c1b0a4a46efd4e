#ifndef SENTI_UNICODE_H_
#define SENTI_UNICODE_H_

#include <string>
#include <string_view>

namespace senti::unicode {

// Canonical composition (NFC) of UTF-8 text. Throws NormalizationError on
// malformed UTF-8.
std::string nfc(std::string_view utf8);

// Full Unicode case folding; used for case-insensitive label lookup.
std::string case_fold(std::string_view utf8);

bool is_valid_utf8(std::string_view bytes);

// Strips ASCII and Unicode whitespace from both ends.
std::string trim(std::string_view utf8);

}  // namespace senti::unicode

#endif  // SENTI_UNICODE_H_
