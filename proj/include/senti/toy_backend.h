#ifndef SENTI_TOY_BACKEND_H_
#define SENTI_TOY_BACKEND_H_

#include "senti/backend.h"

namespace senti {

// Averaged linear classifier over bag-of-token-id counts (the ids are
// already hashed by the tokenizer). Training is mistake-driven: every
// misclassified example gets a perceptron update scaled by the learning
// rate of its mini-batch (linear schedule), and each mini-batch ends with
// decoupled weight decay. The returned weights are the average over all
// optimizer steps.
//
// Randomness (example order, classifier dropout on input features) is drawn
// from KeyedRng streams keyed by (seed, epoch, index).
//
// Pre-training is a no-op that returns zero weights tagged "TAPT".
class ToyBackend final : public ModelBackend {
 public:
  static constexpr const char* kName = "toy";

  explicit ToyBackend(bool pretraining = true) : pretraining_(pretraining) {}

  std::string name() const override { return kName; }
  ModelHandle train(const FinetuneConfig& config, const EpochSource& data,
                    const ModelHandle* init) override;
  PredictionVector predict(const ModelHandle& handle,
                           const EncodedSplit& data) const override;
  bool supports_pretraining() const override { return pretraining_; }
  ModelHandle pretrain_tapt(const TaptConfig& config,
                            const MaskedCorpus& corpus) override;

 private:
  bool pretraining_;
};

}  // namespace senti

#endif  // SENTI_TOY_BACKEND_H_
