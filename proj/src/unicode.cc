#include "senti/unicode.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "senti/error.h"

namespace senti::unicode {

bool is_valid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  const int32_t len = static_cast<int32_t>(bytes.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

namespace {

icu::UnicodeString from_utf8(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) {
    throw NormalizationError("text is not valid UTF-8");
  }
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw NormalizationError(std::string("ICU NFC unavailable: ") +
                             u_errorName(status));
  }
  const icu::UnicodeString in = from_utf8(utf8);
  if (norm->isNormalized(in, status) && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  icu::UnicodeString out = norm->normalize(in, status);
  if (U_FAILURE(status)) {
    throw NormalizationError(std::string("NFC failed: ") + u_errorName(status));
  }
  return to_utf8(out);
}

std::string case_fold(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  s.foldCase();
  return to_utf8(s);
}

std::string trim(std::string_view utf8) {
  icu::UnicodeString s = from_utf8(utf8);
  int32_t begin = 0;
  int32_t end = s.length();
  while (begin < end && u_isUWhiteSpace(s.char32At(begin))) {
    begin = s.moveIndex32(begin, 1);
  }
  while (end > begin) {
    const int32_t prev = s.moveIndex32(end, -1);
    if (!u_isUWhiteSpace(s.char32At(prev))) break;
    end = prev;
  }
  return to_utf8(s.tempSubStringBetween(begin, end));
}

}  // namespace senti::unicode
