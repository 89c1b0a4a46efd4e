#include "senti/corpus.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "senti/error.h"
#include "senti/keyed_rng.h"
#include "test_support.h"

namespace senti {
namespace {

using testing::kNeg;
using testing::kNeut;
using testing::kPos;
using testing::make_split;
using testing::TempDir;
using testing::write_file;

TEST(LabelTest, ParseIsExactAndRoundTrips) {
  for (SentimentLabel l : kAllLabels) {
    EXPECT_EQ(parse_label(to_string(l)), l);
  }
  EXPECT_FALSE(parse_label("positive"));
  EXPECT_FALSE(parse_label("Positve"));
  EXPECT_FALSE(parse_label(""));
}

TEST(SplitNameTest, RoundTrips) {
  for (SplitName n : {SplitName::kTrain, SplitName::kDev, SplitName::kDevTest,
                      SplitName::kTest, SplitName::kExternal}) {
    EXPECT_EQ(parse_split_name(to_string(n)), n);
  }
  EXPECT_FALSE(parse_split_name("validation"));
}

TEST(OfficialSizeTest, MatchesPublishedSplitSizes) {
  EXPECT_EQ(official_size(SplitName::kTrain), 32566u);
  EXPECT_EQ(official_size(SplitName::kDev), 3934u);
  EXPECT_EQ(official_size(SplitName::kDevTest), 3426u);
  EXPECT_EQ(official_size(SplitName::kTest), 6707u);
  EXPECT_FALSE(official_size(SplitName::kExternal));
}

TEST(OfficialSizeTest, MismatchThrows) {
  const DatasetSplit split = make_split({{"a", "x", kPos}});
  EXPECT_THROW(check_official_size(split), ParseError);
}

TEST(LoadSplitTest, ReadsLabeledRows) {
  TempDir dir;
  write_file(dir / "train.tsv",
             "id\ttext\tlabel\n1\tভালো লাগল\tPositive\n2\tখারাপ\tNegative\n");
  const DatasetSplit split = load_split(dir / "train.tsv", SplitName::kTrain);
  ASSERT_EQ(split.size(), 2u);
  EXPECT_TRUE(split.labeled);
  EXPECT_EQ(split.examples[0].id, "1");
  EXPECT_EQ(split.examples[0].text, "ভালো লাগল");
  EXPECT_EQ(split.examples[0].label, kPos);
  EXPECT_EQ(split.examples[1].label, kNeg);
}

TEST(LoadSplitTest, HeaderOnlyFileGivesEmptySplit) {
  TempDir dir;
  write_file(dir / "dev.tsv", "id\ttext\tlabel\n");
  EXPECT_TRUE(load_split(dir / "dev.tsv", SplitName::kDev).empty());
}

TEST(LoadSplitTest, UnknownLabelNamesRow) {
  TempDir dir;
  write_file(dir / "train.tsv", "id\ttext\tlabel\n1\tx\tPositive\n2\ty\tPositve\n");
  try {
    load_split(dir / "train.tsv", SplitName::kTrain);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("Positve"), std::string::npos);
  }
}

TEST(LoadSplitTest, DuplicateIdThrows) {
  TempDir dir;
  write_file(dir / "train.tsv", "id\ttext\tlabel\n1\tx\tPositive\n1\ty\tNegative\n");
  EXPECT_THROW(load_split(dir / "train.tsv", SplitName::kTrain), DuplicateIdError);
}

TEST(LoadSplitTest, InvalidUtf8Throws) {
  TempDir dir;
  write_file(dir / "train.tsv", "id\ttext\tlabel\n1\tab\xff\tPositive\n");
  EXPECT_THROW(load_split(dir / "train.tsv", SplitName::kTrain), ParseError);
}

TEST(LoadSplitTest, TestSplitMayBeUnlabeled) {
  TempDir dir;
  write_file(dir / "test.tsv", "id\ttext\n1\tx\n2\ty\n");
  const DatasetSplit split = load_split(dir / "test.tsv", SplitName::kTest);
  ASSERT_EQ(split.size(), 2u);
  EXPECT_FALSE(split.labeled);
  EXPECT_FALSE(split.examples[0].label);
}

TEST(LoadSplitTest, TrainSplitRequiresLabels) {
  TempDir dir;
  write_file(dir / "train.tsv", "id\ttext\n1\tx\n");
  EXPECT_THROW(load_split(dir / "train.tsv", SplitName::kTrain), ParseError);
}

TEST(LoadSplitTest, WriteThenLoadRoundTrips) {
  TempDir dir;
  DatasetSplit split =
      make_split({{"a", "one two", kPos}, {"b", "তিন", kNeut}}, SplitName::kDev);
  for (auto& ex : split.examples) ex.source = "dev";  // loader tags the split
  write_split(dir / "out" / "dev.tsv", split);
  EXPECT_EQ(load_split(dir / "out" / "dev.tsv", SplitName::kDev), split);
}

TEST(DeduplicateTest, KeepsFirstOccurrence) {
  const auto r = deduplicate(make_split({{"a", "x", kPos}, {"b", "x", kPos}, {"c", "y", kNeg}}));
  ASSERT_EQ(r.split.size(), 2u);
  EXPECT_EQ(r.split.examples[0].id, "a");
  EXPECT_EQ(r.split.examples[1].id, "c");
  EXPECT_EQ(r.removed, 1u);
  EXPECT_TRUE(r.conflicts.empty());
}

TEST(DeduplicateTest, NoDuplicatesIsIdentity) {
  const DatasetSplit split = make_split({{"a", "x", kPos}, {"b", "y", kNeg}});
  EXPECT_EQ(deduplicate(split).split, split);
}

TEST(DeduplicateTest, ConflictingLabelsReported) {
  const auto r = deduplicate(make_split({{"a", "x", kPos}, {"b", "x", kNeg}}));
  ASSERT_EQ(r.split.size(), 1u);
  EXPECT_EQ(r.split.examples[0].id, "a");
  ASSERT_EQ(r.conflicts.size(), 1u);
  EXPECT_EQ(r.conflicts[0].kept_id, "a");
  EXPECT_EQ(r.conflicts[0].dropped_id, "b");
}

TEST(DeduplicateTest, ComparesNfcForms) {
  // "é" precomposed vs e + combining acute.
  const auto r = deduplicate(
      make_split({{"a", "caf\xC3\xA9", kPos}, {"b", "cafe\xCC\x81", kPos}}));
  EXPECT_EQ(r.split.size(), 1u);
}

// Oracle: the surviving texts are exactly the distinct input texts in order
// of first appearance, and dedup is idempotent.
TEST(DeduplicateTest, MatchesFirstSeenOracle) {
  KeyedRng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    DatasetSplit split;
    const std::size_t n = rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      split.examples.push_back(Example{"id" + std::to_string(i),
                                       "t" + std::to_string(rng.below(8)),
                                       label_at(rng.below(3)), ""});
    }
    std::vector<std::string> expected;
    for (const auto& ex : split.examples) {
      if (std::find(expected.begin(), expected.end(), ex.text) == expected.end()) {
        expected.push_back(ex.text);
      }
    }
    const auto r = deduplicate(split);
    std::vector<std::string> got;
    for (const auto& ex : r.split.examples) got.push_back(ex.text);
    EXPECT_EQ(got, expected);
    EXPECT_EQ(r.removed, n - expected.size());
    EXPECT_EQ(deduplicate(r.split).split, r.split);
  }
}

TEST(LabelMappingTest, DefaultsCoverExternalLabels) {
  const LabelMapping m = LabelMapping::defaults();
  EXPECT_EQ(m.lookup("Love"), kPos);
  EXPECT_EQ(m.lookup("Joy"), kPos);
  EXPECT_EQ(m.lookup("Surprise"), kNeut);
  EXPECT_EQ(m.lookup("Non-Abusive"), kPos);
  for (const char* neg : {"Anger", "Sad", "Sadness", "Fear", "Disgust", "Abusive"}) {
    EXPECT_EQ(m.lookup(neg), kNeg) << neg;
  }
  EXPECT_EQ(m.lookup("  love "), kPos);
  EXPECT_EQ(m.lookup("ANGER"), kNeg);
  EXPECT_FALSE(m.lookup("Sarcasm"));
}

TEST(LabelMappingTest, ConflictingReAddThrows) {
  LabelMapping m;
  m.add("Joy", kPos);
  m.add("joy", kPos);
  EXPECT_THROW(m.add("JOY", kNeg), ParseError);
}

TEST(LabelMappingTest, LoadsMappingFile) {
  TempDir dir;
  write_file(dir / "map.tsv", "# comment\n\nneg\tNegative\npos\tPositive\n");
  const LabelMapping m = load_label_mapping(dir / "map.tsv");
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.lookup("neg"), kNeg);
}

TEST(MapExternalLabelsTest, MapsAndTagsSource) {
  ExternalDataset ds{"emo", {{"1", "x", "Love"}, {"2", "y", "Surprise"}}, 6};
  const DatasetSplit out = map_external_labels(ds, LabelMapping::defaults());
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out.name, SplitName::kExternal);
  EXPECT_EQ(out.examples[0].label, kPos);
  EXPECT_EQ(out.examples[1].label, kNeut);
  EXPECT_EQ(out.examples[0].source, "emo");
}

TEST(MapExternalLabelsTest, UnmappedLabelThrows) {
  ExternalDataset ds{"emo", {{"1", "x", "Love"}, {"2", "y", "Sarcasm"}}, 6};
  try {
    map_external_labels(ds, LabelMapping::defaults());
    FAIL() << "expected UnknownLabelError";
  } catch (const UnknownLabelError& e) {
    EXPECT_NE(std::string(e.what()).find("Sarcasm"), std::string::npos);
  }
}

TEST(MergeExternalTest, DisjointUnion) {
  auto a = make_split({{"1", "x", kPos}, {"2", "y", kNeg}}, SplitName::kExternal);
  auto b = make_split({{"1", "z", kPos}, {"2", "w", kNeut}}, SplitName::kExternal);
  for (auto& ex : a.examples) ex.source = "a";
  for (auto& ex : b.examples) ex.source = "b";
  const auto r = merge_external({a, b});
  EXPECT_EQ(r.split.size(), 4u);
  EXPECT_EQ(r.split.examples[2].id, "b:1");
}

TEST(MergeExternalTest, SharedTextCountedOnce) {
  const auto a = make_split({{"1", "x", kPos}, {"2", "y", kNeg}}, SplitName::kExternal);
  const auto b = make_split({{"3", "x", kPos}, {"4", "w", kNeut}}, SplitName::kExternal);
  EXPECT_EQ(merge_external({a, b}).split.size(), 3u);
}

TEST(MergeExternalTest, EmptyListGivesEmptySplit) {
  EXPECT_TRUE(merge_external({}).split.empty());
}

}  // namespace
}  // namespace senti
