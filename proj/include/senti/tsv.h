#ifndef SENTI_TSV_H_
#define SENTI_TSV_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace senti::tsv {

struct Row {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;
};

// Splits on '\t' without quoting rules. Trailing '\r' and a leading UTF-8
// BOM are dropped; blank lines are skipped. Throws ParseError when the
// file cannot be opened or is empty (no header).
Table read(const std::filesystem::path& path);

std::vector<std::string> split(std::string_view line);

// Writes to `path` via a temporary sibling file and rename.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace senti::tsv

#endif  // SENTI_TSV_H_
