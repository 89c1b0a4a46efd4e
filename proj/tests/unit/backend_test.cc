#include "senti/backend.h"

#include <gtest/gtest.h>

#include "senti/error.h"
#include "senti/toy_backend.h"
#include "senti/training.h"
#include "test_support.h"

namespace senti {
namespace {

using testing::kNeg;
using testing::kNeut;
using testing::kPos;
using testing::TempDir;

// 20 examples; each class owns its own words, so the data are linearly
// separable in bag-of-ids space.
DatasetSplit separable_split() {
  const std::array<std::vector<std::string>, 3> words = {{
      {"bad", "awful", "sad"}, {"news", "today", "report"}, {"good", "great", "joy"}}};
  DatasetSplit split;
  for (int i = 0; i < 20; ++i) {
    const std::size_t c = static_cast<std::size_t>(i % 3);
    const std::string text = words[c][i % 3] + " " + words[c][(i + 1) % 3];
    split.examples.push_back(Example{"e" + std::to_string(i), text, label_at(c), ""});
  }
  return split;
}

// Overlapping vocabulary with label noise.
DatasetSplit noisy_split() {
  DatasetSplit split;
  KeyedRng rng(3);
  const std::vector<std::string> words = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int i = 0; i < 120; ++i) {
    std::string text;
    for (int w = 0; w < 5; ++w) text += words[rng.below(words.size())] + " ";
    split.examples.push_back(
        Example{"n" + std::to_string(i), text, label_at(rng.below(3)), ""});
  }
  return split;
}

ModelHandle train_toy(const DatasetSplit& data, const FinetuneConfig& cfg) {
  HashTokenizer tok(512);
  ToyBackend backend;
  AugmentedEpochSource src(encode_split(data, tok, cfg.max_length),
                           cfg.token_drop_ratio, cfg.seed);
  return backend.train(cfg, src, nullptr);
}

TEST(ArgmaxLabelTest, TiesGoToEarliestClass) {
  EXPECT_EQ(argmax_label({0, 0, 0}), kNeg);
  EXPECT_EQ(argmax_label({0, 1, 1}), kNeut);
  EXPECT_EQ(argmax_label({0, 0, 2}), kPos);
}

TEST(ToyBackendTest, FitsSeparableData) {
  FinetuneConfig cfg;
  cfg.token_drop_ratio = 0.0;
  cfg.classifier_dropout = 0.0;
  cfg.epochs = 5;
  const DatasetSplit data = separable_split();
  const ModelHandle h = train_toy(data, cfg);
  HashTokenizer tok(512);
  ToyBackend backend;
  const PredictionVector pred = backend.predict(h, encode_split(data, tok, 128));
  ASSERT_EQ(pred.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(pred.labels[i], *data.examples[i].label) << data.examples[i].text;
    EXPECT_EQ(pred.ids[i], data.examples[i].id);
  }
}

TEST(ToyBackendTest, FitsSeparableDataWithDefaults) {
  const DatasetSplit data = separable_split();
  const ModelHandle h = train_toy(data, FinetuneConfig{});
  HashTokenizer tok(512);
  const PredictionVector pred = ToyBackend().predict(h, encode_split(data, tok, 128));
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(pred.labels[i], *data.examples[i].label);
  }
}

TEST(ToyBackendTest, SameSeedGivesIdenticalHandle) {
  const DatasetSplit data = noisy_split();
  EXPECT_EQ(serialize_handle(train_toy(data, FinetuneConfig{})),
            serialize_handle(train_toy(data, FinetuneConfig{})));
}

TEST(ToyBackendTest, SeedChangesParameters) {
  const DatasetSplit data = noisy_split();
  FinetuneConfig a, b;
  a.seed = 42;
  b.seed = 1234;
  EXPECT_NE(train_toy(data, a).parameters, train_toy(data, b).parameters);
}

TEST(ToyBackendTest, ZeroWeightModelPredictsNegative) {
  ToyBackend backend;
  const DatasetSplit data = separable_split();
  HashTokenizer tok(512);
  ModelHandle zero;
  zero.backend = ToyBackend::kName;
  zero.metadata["vocab_size"] = "512";
  zero.parameters.assign((3 * 512 + 3) * sizeof(double), 0);
  const PredictionVector pred = backend.predict(zero, encode_split(data, tok, 128));
  for (SentimentLabel l : pred.labels) EXPECT_EQ(l, kNeg);
}

TEST(ToyBackendTest, EmptyInputGivesEmptyPredictions) {
  const ModelHandle h = train_toy(separable_split(), FinetuneConfig{});
  HashTokenizer tok(512);
  EXPECT_EQ(ToyBackend().predict(h, encode_split(DatasetSplit{}, tok, 128)).size(), 0u);
}

TEST(ToyBackendTest, VocabMismatchThrows) {
  const ModelHandle h = train_toy(separable_split(), FinetuneConfig{});
  HashTokenizer big(4096);
  EXPECT_THROW(ToyBackend().predict(h, encode_split(separable_split(), big, 128)),
               VocabMismatchError);
}

TEST(ToyBackendTest, PretrainingCapabilityCanBeDisabled) {
  ToyBackend no_pretrain(false);
  EXPECT_FALSE(no_pretrain.supports_pretraining());
  EXPECT_THROW(no_pretrain.pretrain_tapt(TaptConfig{}, MaskedCorpus{}), CapabilityError);
}

TEST(BackendRegistryTest, ToyIsRegistered) {
  EXPECT_EQ(BackendRegistry::global().create("toy")->name(), "toy");
  EXPECT_THROW(BackendRegistry::global().create("gpu-bert"), ConfigError);
}

TEST(ModelHandleTest, SerializeRoundTrip) {
  ModelHandle h = train_toy(separable_split(), FinetuneConfig{});
  h.id = "run-1";
  h.stage_tags = {"FT", "RTD"};
  h.metadata["tokenizer"] = "hash";
  EXPECT_EQ(deserialize_handle(serialize_handle(h)), h);
  TempDir dir;
  save_handle(dir / "m.bin", h);
  EXPECT_EQ(load_handle(dir / "m.bin"), h);
  EXPECT_TRUE(h.has_tag("RTD"));
  EXPECT_FALSE(h.has_tag("TAPT"));
}

TEST(ModelHandleTest, CorruptionDetected) {
  const ModelHandle h = train_toy(separable_split(), FinetuneConfig{});
  auto bytes = serialize_handle(h);
  auto flipped = bytes;
  flipped[flipped.size() / 2] ^= 0x01;
  EXPECT_THROW(deserialize_handle(flipped), IntegrityError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  EXPECT_THROW(deserialize_handle(truncated), IntegrityError);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(deserialize_handle(bad_magic), IntegrityError);
}

}  // namespace
}  // namespace senti
