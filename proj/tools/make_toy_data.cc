// Writes a small deterministic corpus for smoke runs:
//   train.tsv dev.tsv dev_test.tsv test.tsv, three external sets with
//   their label mapping files, and toy.ini.
//
// usage: make_toy_data <out_dir> [seed]

#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "senti/keyed_rng.h"
#include "senti/label.h"
#include "senti/tsv.h"

namespace fs = std::filesystem;
using senti::KeyedRng;
using senti::SentimentLabel;

namespace {

const std::array<std::vector<std::string>, senti::kNumLabels> kClassWords = {{
    {"খারাপ", "বাজে", "দুঃখ", "রাগ", "ভয়", "ঘৃণা", "বিরক্ত", "কষ্ট", "হতাশ",
     "জঘন্য"},
    {"আজ", "খবর", "বলেছেন", "সংবাদ", "তথ্য", "জানা", "সময়", "বিষয়", "আলোচনা",
     "প্রকাশ"},
    {"ভালো", "সুন্দর", "চমৎকার", "খুশি", "ভালোবাসা", "দারুণ", "অসাধারণ", "আনন্দ",
     "প্রিয়", "শুভ"},
}};

const std::vector<std::string> kFiller = {
    "এই", "সে", "আমি", "তুমি", "এবং", "কিন্তু", "খুব", "একটি", "এটা", "আমাদের",
    "দেশ", "মানুষ", "ছবি", "খেলা", "গান", "নাটক"};

std::string pick(KeyedRng& rng, const std::vector<std::string>& pool) {
  return pool[rng.below(pool.size())];
}

// One text of 4-8 tokens. With probability `noise` half of the cue words
// come from another class.
std::string make_text(KeyedRng& rng, SentimentLabel label, double noise) {
  const std::size_t cues = 2 + rng.below(2);
  const std::size_t fill = 2 + rng.below(3);
  const bool noisy = rng.bernoulli(noise);
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < cues; ++i) {
    std::size_t cls = senti::index_of(label);
    if (noisy && i % 2 == 0) cls = (cls + 1 + rng.below(2)) % senti::kNumLabels;
    tokens.push_back(pick(rng, kClassWords[cls]));
  }
  for (std::size_t i = 0; i < fill; ++i) {
    tokens.insert(tokens.begin() + rng.below(tokens.size() + 1),
                  pick(rng, kFiller));
  }
  if (rng.bernoulli(0.1)) tokens.push_back("https://t.co/x" + std::to_string(rng.below(1000)));
  if (rng.bernoulli(0.1)) tokens.insert(tokens.begin(), "@user" + std::to_string(rng.below(100)));
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

struct Row {
  std::string id;
  std::string text;
  std::string label;
};

std::vector<Row> make_split(std::uint64_t seed, std::string_view prefix,
                            std::size_t n, double noise, std::uint64_t stream) {
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    KeyedRng rng({seed, stream, i}, senti::RngStream::kSynthetic);
    const auto label = senti::label_at(rng.below(senti::kNumLabels));
    rows.push_back({std::string(prefix) + std::to_string(i + 1),
                    make_text(rng, label, noise),
                    std::string(senti::to_string(label))});
  }
  return rows;
}

void write_rows(const fs::path& path, const std::vector<Row>& rows,
                bool with_labels) {
  std::ostringstream out;
  out << (with_labels ? "id\ttext\tlabel\n" : "id\ttext\n");
  for (const auto& r : rows) {
    out << r.id << '\t' << r.text;
    if (with_labels) out << '\t' << r.label;
    out << '\n';
  }
  senti::tsv::write_atomic(path, out.str());
}

// External rows re-labelled with the corpus' own label spelling.
std::vector<Row> relabel(std::vector<Row> rows,
                         const std::array<std::string, 3>& spelling) {
  for (auto& r : rows) {
    r.label = spelling[senti::index_of(*senti::parse_label(r.label))];
  }
  return rows;
}

constexpr const char* kConfig = R"(# Toy pipeline: finishes in seconds with the toy backend.
[run]
name = toy
backend = toy
tokenizer = hash
vocab_size = 4096
normalizer = nfc
master_seed = 42
eval_split = dev_test

[data]
train = train.tsv
dev = dev.tsv
dev_test = dev_test.tsv
test = test.tsv

[finetune]
epochs = 3
batch_size = 16

[finetune.stage1]
epochs = 2

[tapt]
epochs = 1

[external.emotion]
path = ext_emotion.tsv
classes = 6

[external.abuse]
path = ext_abuse.tsv
classes = 2

[external.news]
path = ext_news.tsv
mapping = ext_news_mapping.tsv
classes = 3

[sweep]
name = toy-sweep
count = 3

[ensemble]
name = toy-ensemble
models = sweep:toy-sweep
split = dev_test
)";

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: make_toy_data <out_dir> [seed]\n";
    return 2;
  }
  const fs::path dir = argv[1];
  const std::uint64_t seed = argc == 3 ? std::stoull(argv[2]) : 7;

  auto train = make_split(seed, "tr", 200, 0.15, 1);
  train.push_back(train[3]);  // an exact duplicate for dedup to remove
  train.back().id = "tr201";
  write_rows(dir / "train.tsv", train, true);
  write_rows(dir / "dev.tsv", make_split(seed, "dv", 60, 0.15, 2), true);
  write_rows(dir / "dev_test.tsv", make_split(seed, "dt", 60, 0.15, 3), true);
  write_rows(dir / "test.tsv", make_split(seed, "te", 60, 0.15, 4), false);

  // Emotion-style: Joy/Surprise/Anger, mapped by the default table.
  write_rows(dir / "ext_emotion.tsv",
             relabel(make_split(seed, "em", 60, 0.1, 5), {"Anger", "Surprise", "Joy"}),
             true);
  // Abuse-style: no neutral class; neutral rows are dropped.
  auto abuse = relabel(make_split(seed, "ab", 60, 0.1, 6),
                       {"Abusive", "", "Non-Abusive"});
  std::erase_if(abuse, [](const Row& r) { return r.label.empty(); });
  write_rows(dir / "ext_abuse.tsv", abuse, true);
  // Already three-class with its own spelling.
  write_rows(dir / "ext_news.tsv",
             relabel(make_split(seed, "nw", 60, 0.1, 7), {"neg", "neu", "pos"}),
             true);
  senti::tsv::write_atomic(dir / "ext_news_mapping.tsv",
                           "# original\tmapped\nneg\tNegative\nneu\tNeutral\n"
                           "pos\tPositive\n");
  senti::tsv::write_atomic(dir / "toy.ini", kConfig);
  std::cout << "wrote toy corpus to " << dir.string() << '\n';
  return 0;
}
