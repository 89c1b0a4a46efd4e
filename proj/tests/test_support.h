#ifndef SENTI_TESTS_TEST_SUPPORT_H_
#define SENTI_TESTS_TEST_SUPPORT_H_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <tuple>

#include "senti/corpus.h"
#include "senti/label.h"

namespace senti::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("senti-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& contents) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using Row = std::tuple<std::string, std::string, SentimentLabel>;

inline DatasetSplit make_split(std::initializer_list<Row> rows,
                               SplitName name = SplitName::kTrain) {
  DatasetSplit split;
  split.name = name;
  for (const auto& [id, text, label] : rows) {
    split.examples.push_back(Example{id, text, label, ""});
  }
  return split;
}

constexpr SentimentLabel kNeg = SentimentLabel::kNegative;
constexpr SentimentLabel kNeut = SentimentLabel::kNeutral;
constexpr SentimentLabel kPos = SentimentLabel::kPositive;

}  // namespace senti::testing

#endif  // SENTI_TESTS_TEST_SUPPORT_H_
