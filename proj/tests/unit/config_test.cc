#include "senti/config.h"

#include <gtest/gtest.h>

#include "senti/error.h"

namespace senti {
namespace {

TEST(FinetuneConfigTest, DefaultsMatchPublishedSettings) {
  const FinetuneConfig c = FinetuneConfig::banglabert();
  EXPECT_DOUBLE_EQ(c.learning_rate, 2e-5);
  EXPECT_EQ(c.lr_scheduler, "linear");
  EXPECT_DOUBLE_EQ(c.warmup_ratio, 0.0);
  EXPECT_EQ(c.batch_size, 16);
  EXPECT_EQ(c.epochs, 3);
  EXPECT_DOUBLE_EQ(c.weight_decay, 0.01);
  EXPECT_DOUBLE_EQ(c.token_drop_ratio, 0.2);
  EXPECT_DOUBLE_EQ(c.classifier_dropout, 0.1);
  EXPECT_EQ(c.max_length, 128);
  const FinetuneConfig x = FinetuneConfig::xlmr();
  EXPECT_EQ(x.batch_size, 32);
  EXPECT_EQ(x.epochs, 5);
  EXPECT_DOUBLE_EQ(x.learning_rate, 2e-5);
}

TEST(TaptConfigTest, DefaultsMatchPublishedSettings) {
  const TaptConfig c;
  EXPECT_DOUBLE_EQ(c.lambda_disc, 50.0);
  EXPECT_DOUBLE_EQ(c.mlm_probability, 0.25);
  EXPECT_DOUBLE_EQ(c.learning_rate, 1e-4);
  EXPECT_DOUBLE_EQ(c.warmup_ratio, 0.06);
  EXPECT_EQ(c.batch_size, 64);
  EXPECT_EQ(c.epochs, 100);
  EXPECT_DOUBLE_EQ(c.weight_decay, 0.01);
  EXPECT_DOUBLE_EQ(c.token_drop_ratio, 0.2);
  EXPECT_EQ(c.max_length, 128);
  EXPECT_DOUBLE_EQ(c.total_loss(1.5, 0.1), 1.5 + 50 * 0.1);
}

TEST(FinetuneConfigTest, ValidationCollectsProblems) {
  FinetuneConfig c;
  c.warmup_ratio = -1;
  c.epochs = 0;
  c.token_drop_ratio = 1.0;
  EXPECT_EQ(c.problems().size(), 3u);
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_NO_THROW(FinetuneConfig{}.validate());
  FinetuneConfig sched;
  sched.lr_scheduler = "cosine";
  EXPECT_THROW(sched.validate(), ConfigError);
}

TEST(TaptConfigTest, ValidationRejectsDegenerateMasking) {
  TaptConfig c;
  c.mlm_probability = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.mlm_probability = 0.25;
  c.lambda_disc = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(FinetuneConfigTest, KeyValueRoundTrip) {
  FinetuneConfig c;
  c.learning_rate = 3e-5;
  c.seed = 747;
  c.reset_head = true;
  std::vector<std::string> errors;
  const FinetuneConfig back = FinetuneConfig::from_kv(c.to_kv(), FinetuneConfig{}, "x", errors);
  EXPECT_TRUE(errors.empty());
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_NE(c.hash(), FinetuneConfig{}.hash());
}

TEST(FinetuneConfigTest, FromKvReportsEveryBadKey) {
  std::vector<std::string> errors;
  FinetuneConfig::from_kv({{"epochs", "three"}, {"learnin_rate", "1"}, {"batch_size", "8"}},
                          FinetuneConfig{}, "[finetune]", errors);
  EXPECT_EQ(errors.size(), 2u);
}

TEST(HashTest, CanonicalAndOrderIndependent) {
  KeyValues a = {{"x", "1"}, {"y", "2"}};
  KeyValues b = {{"y", "2"}, {"x", "1"}};
  EXPECT_EQ(hash_kv(a), hash_kv(b));
  EXPECT_EQ(hash_kv(a).size(), 16u);
  EXPECT_EQ(format_double(2e-5), "2e-05");
  EXPECT_EQ(format_double(0.25), "0.25");
}

}  // namespace
}  // namespace senti
