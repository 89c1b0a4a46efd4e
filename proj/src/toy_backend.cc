#include "senti/toy_backend.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "senti/error.h"
#include "senti/keyed_rng.h"

namespace senti {

namespace {

// Row-major [class][vocab] weights followed by one bias per class.
struct LinearModel {
  std::int32_t vocab = 0;
  std::vector<double> weights;
  ClassScores bias{};

  explicit LinearModel(std::int32_t v)
      : vocab(v), weights(kNumLabels * static_cast<std::size_t>(v), 0.0) {}

  double& w(std::size_t c, std::int32_t token) {
    return weights[c * static_cast<std::size_t>(vocab) +
                   static_cast<std::size_t>(token)];
  }
  double w(std::size_t c, std::int32_t token) const {
    return weights[c * static_cast<std::size_t>(vocab) +
                   static_cast<std::size_t>(token)];
  }
};

using SparseFeatures = std::vector<std::pair<std::int32_t, double>>;

std::vector<std::uint8_t> encode_params(const LinearModel& m) {
  std::vector<std::uint8_t> out;
  out.reserve((m.weights.size() + kNumLabels) * 8);
  auto put = [&out](double d) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) {
      out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
    }
  };
  for (double d : m.weights) put(d);
  for (double d : m.bias) put(d);
  return out;
}

std::int32_t handle_vocab(const ModelHandle& h) {
  auto it = h.metadata.find("vocab_size");
  if (it == h.metadata.end()) {
    throw IntegrityError("toy handle '" + h.id + "' lacks vocab_size");
  }
  return std::stoi(it->second);
}

LinearModel decode_params(const ModelHandle& h) {
  if (h.backend != ToyBackend::kName) {
    throw ConfigError("handle '" + h.id + "' was produced by backend '" +
                      h.backend + "', not 'toy'");
  }
  LinearModel m(handle_vocab(h));
  if (h.parameters.size() != (m.weights.size() + kNumLabels) * 8) {
    throw IntegrityError("toy handle '" + h.id + "' has wrong parameter size");
  }
  std::size_t pos = 0;
  auto get = [&h, &pos]() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) {
      bits |= static_cast<std::uint64_t>(h.parameters[pos + i]) << (8 * i);
    }
    pos += 8;
    return std::bit_cast<double>(bits);
  };
  for (double& d : m.weights) d = get();
  for (double& d : m.bias) d = get();
  return m;
}

void check_token(std::int32_t token, std::int32_t vocab) {
  if (token < 0 || token >= vocab) {
    throw VocabMismatchError("token id " + std::to_string(token) +
                             " outside model vocabulary of " +
                             std::to_string(vocab));
  }
}

ClassScores score(const LinearModel& m, const SparseFeatures& x) {
  ClassScores s = m.bias;
  for (const auto& [token, value] : x) {
    for (std::size_t c = 0; c < kNumLabels; ++c) s[c] += m.w(c, token) * value;
  }
  return s;
}

// Content-token counts; with dropout each occurrence is dropped with
// probability p and survivors are scaled by 1 / (1 - p).
SparseFeatures featurize(const TokenSequence& seq, std::int32_t vocab,
                         double dropout, KeyedRng* rng) {
  SparseFeatures x;
  const double keep_scale = 1.0 / (1.0 - dropout);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.special_mask[i]) continue;
    const auto token = seq.tokens[i];
    check_token(token, vocab);
    if (rng && dropout > 0 && rng->bernoulli(dropout)) continue;
    x.emplace_back(token, rng ? keep_scale : 1.0);
  }
  std::sort(x.begin(), x.end());
  SparseFeatures merged;
  for (const auto& f : x) {
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
    } else {
      merged.push_back(f);
    }
  }
  return merged;
}

double scheduled_lr(const FinetuneConfig& cfg, std::size_t step,
                    std::size_t total) {
  const auto warm =
      static_cast<std::size_t>(std::floor(cfg.warmup_ratio * total));
  if (step < warm) {
    return cfg.learning_rate * static_cast<double>(step + 1) /
           static_cast<double>(warm);
  }
  return cfg.learning_rate * static_cast<double>(total - step) /
         static_cast<double>(total - warm);
}

}  // namespace

ModelHandle ToyBackend::train(const FinetuneConfig& config,
                              const EpochSource& data,
                              const ModelHandle* init) {
  config.validate();
  if (data.size() == 0) throw EmptyDatasetError("training split is empty");
  const std::int32_t vocab = data.vocab_size();

  LinearModel model(vocab);
  if (init) {
    model = decode_params(*init);
    if (model.vocab != vocab) {
      throw VocabMismatchError("init handle vocabulary " +
                               std::to_string(model.vocab) +
                               " != tokenizer vocabulary " +
                               std::to_string(vocab));
    }
    if (config.reset_head) model.bias = {};
  }

  const std::size_t n = data.size();
  const auto bs = static_cast<std::size_t>(config.batch_size);
  const std::size_t steps_per_epoch = (n + bs - 1) / bs;
  const std::size_t total = steps_per_epoch * static_cast<std::size_t>(config.epochs);

  LinearModel sum(vocab);
  std::size_t step = 0;
  std::vector<std::size_t> order(n);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    KeyedRng shuffle({config.seed, static_cast<std::uint64_t>(epoch), 0},
                     RngStream::kShuffle);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[shuffle.below(i)]);
    }

    for (std::size_t start = 0; start < n; start += bs) {
      const double lr = scheduled_lr(config, step, total);
      const std::size_t end = std::min(n, start + bs);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t idx = order[k];
        KeyedRng drop({config.seed, static_cast<std::uint64_t>(epoch), idx},
                      RngStream::kFeatureDropout);
        const auto x = featurize(data.sequence(epoch, idx), vocab,
                                 config.classifier_dropout, &drop);
        const std::size_t gold = index_of(data.label(idx));
        const std::size_t pred = index_of(argmax_label(score(model, x)));
        if (pred == gold) continue;
        for (const auto& [token, value] : x) {
          const auto t = static_cast<std::size_t>(token);
          model.weights[gold * static_cast<std::size_t>(vocab) + t] += lr * value;
          model.weights[pred * static_cast<std::size_t>(vocab) + t] -= lr * value;
        }
        model.bias[gold] += lr;
        model.bias[pred] -= lr;
      }
      if (config.weight_decay > 0) {
        const double decay = 1.0 - lr * config.weight_decay;
        for (double& w : model.weights) w *= decay;
      }

      for (std::size_t j = 0; j < model.weights.size(); ++j) {
        sum.weights[j] += model.weights[j];
      }
      for (std::size_t c = 0; c < kNumLabels; ++c) sum.bias[c] += model.bias[c];
      ++step;
    }
  }

  const double inv = 1.0 / static_cast<double>(step);
  for (double& w : sum.weights) w *= inv;
  for (double& b : sum.bias) b *= inv;

  ModelHandle h;
  h.backend = kName;
  h.config_hash = config.hash();
  h.metadata["vocab_size"] = std::to_string(vocab);
  h.metadata["optimizer_steps"] = std::to_string(step);
  h.parameters = encode_params(sum);
  return h;
}

PredictionVector ToyBackend::predict(const ModelHandle& handle,
                                     const EncodedSplit& data) const {
  const LinearModel model = decode_params(handle);
  if (data.vocab_size != model.vocab) {
    throw VocabMismatchError("model '" + handle.id + "' expects vocabulary " +
                             std::to_string(model.vocab) + ", data uses " +
                             std::to_string(data.vocab_size));
  }
  PredictionVector out;
  out.ids = data.ids;
  out.labels.reserve(data.size());
  out.scores.reserve(data.size());
  for (const auto& seq : data.sequences) {
    const auto s = score(model, featurize(seq, model.vocab, 0.0, nullptr));
    out.scores.push_back(s);
    out.labels.push_back(argmax_label(s));
  }
  return out;
}

ModelHandle ToyBackend::pretrain_tapt(const TaptConfig& config,
                                      const MaskedCorpus& corpus) {
  if (!pretraining_) return ModelBackend::pretrain_tapt(config, corpus);
  config.validate();
  if (corpus.sequences.empty()) {
    throw EmptyDatasetError("pre-training corpus is empty");
  }
  LinearModel model(corpus.vocab_size);
  ModelHandle h;
  h.backend = kName;
  h.config_hash = config.hash();
  h.stage_tags = {"TAPT"};
  h.metadata["vocab_size"] = std::to_string(corpus.vocab_size);
  h.metadata["lambda_disc"] = format_double(config.lambda_disc);
  h.metadata["mlm_probability"] = format_double(config.mlm_probability);
  h.metadata["masked_positions"] = std::to_string(corpus.masked_positions);
  h.parameters = encode_params(model);
  return h;
}

}  // namespace senti
