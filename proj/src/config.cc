#include "senti/config.h"

#include <charconv>
#include <cmath>
#include <functional>

#include "senti/error.h"
#include "senti/hashing.h"

namespace senti {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string canonical_text(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

std::string hash_kv(const KeyValues& kv) {
  return to_hex(fnv1a64(canonical_text(kv)));
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += "; ";
    out += s;
  }
  return out;
}

bool parse_value(std::string_view s, double& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

bool parse_value(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_value(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_value(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

bool parse_value(std::string_view s, std::string& out) {
  out = std::string(s);
  return true;
}

// Applies key/value pairs to fields registered by name.
class FieldBinder {
 public:
  template <typename T>
  void bind(std::string name, T& field) {
    setters_.emplace(std::move(name), [&field](std::string_view v) {
      return parse_value(v, field);
    });
  }

  void apply(const KeyValues& kv, std::string_view where,
             std::vector<std::string>& errors) const {
    for (const auto& [k, v] : kv) {
      auto it = setters_.find(k);
      if (it == setters_.end()) {
        errors.push_back(std::string(where) + ": unknown key '" + k + "'");
      } else if (!it->second(v)) {
        errors.push_back(std::string(where) + ": invalid value '" + v +
                         "' for " + k);
      }
    }
  }

 private:
  std::map<std::string, std::function<bool(std::string_view)>> setters_;
};

void require(bool ok, std::string msg, std::vector<std::string>& out) {
  if (!ok) out.push_back(std::move(msg));
}

}  // namespace

FinetuneConfig FinetuneConfig::xlmr() {
  FinetuneConfig c;
  c.batch_size = 32;
  c.epochs = 5;
  return c;
}

std::vector<std::string> FinetuneConfig::problems() const {
  std::vector<std::string> p;
  require(learning_rate > 0, "learning_rate must be > 0", p);
  require(lr_scheduler == "linear", "lr_scheduler must be 'linear'", p);
  require(warmup_ratio >= 0 && warmup_ratio < 1,
          "warmup_ratio must be in [0, 1)", p);
  require(batch_size >= 1, "batch_size must be >= 1", p);
  require(epochs >= 1, "epochs must be >= 1", p);
  require(weight_decay >= 0 && weight_decay < 1,
          "weight_decay must be in [0, 1)", p);
  require(token_drop_ratio >= 0 && token_drop_ratio < 1,
          "token_drop_ratio must be in [0, 1)", p);
  require(classifier_dropout >= 0 && classifier_dropout < 1,
          "classifier_dropout must be in [0, 1)", p);
  require(max_length >= 3, "max_length must be >= 3", p);
  return p;
}

void FinetuneConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError("invalid fine-tuning config: " + join(p));
}

KeyValues FinetuneConfig::to_kv() const {
  return {
      {"batch_size", std::to_string(batch_size)},
      {"classifier_dropout", format_double(classifier_dropout)},
      {"epochs", std::to_string(epochs)},
      {"learning_rate", format_double(learning_rate)},
      {"lr_scheduler", lr_scheduler},
      {"max_length", std::to_string(max_length)},
      {"reset_head", reset_head ? "true" : "false"},
      {"seed", std::to_string(seed)},
      {"token_drop_ratio", format_double(token_drop_ratio)},
      {"warmup_ratio", format_double(warmup_ratio)},
      {"weight_decay", format_double(weight_decay)},
  };
}

FinetuneConfig FinetuneConfig::from_kv(const KeyValues& kv,
                                       const FinetuneConfig& base,
                                       std::string_view where,
                                       std::vector<std::string>& errors) {
  FinetuneConfig c = base;
  FieldBinder b;
  b.bind("learning_rate", c.learning_rate);
  b.bind("lr_scheduler", c.lr_scheduler);
  b.bind("warmup_ratio", c.warmup_ratio);
  b.bind("batch_size", c.batch_size);
  b.bind("epochs", c.epochs);
  b.bind("weight_decay", c.weight_decay);
  b.bind("token_drop_ratio", c.token_drop_ratio);
  b.bind("classifier_dropout", c.classifier_dropout);
  b.bind("max_length", c.max_length);
  b.bind("seed", c.seed);
  b.bind("reset_head", c.reset_head);
  b.apply(kv, where, errors);
  return c;
}

std::string FinetuneConfig::hash() const { return hash_kv(to_kv()); }

std::vector<std::string> TaptConfig::problems() const {
  std::vector<std::string> p;
  require(lambda_disc > 0, "lambda_disc must be > 0", p);
  require(mlm_probability > 0 && mlm_probability <= 1,
          "mlm_probability must be in (0, 1]", p);
  require(learning_rate > 0, "learning_rate must be > 0", p);
  require(lr_scheduler == "linear", "lr_scheduler must be 'linear'", p);
  require(warmup_ratio >= 0 && warmup_ratio < 1,
          "warmup_ratio must be in [0, 1)", p);
  require(batch_size >= 1, "batch_size must be >= 1", p);
  require(epochs >= 1, "epochs must be >= 1", p);
  require(weight_decay >= 0 && weight_decay < 1,
          "weight_decay must be in [0, 1)", p);
  require(token_drop_ratio >= 0 && token_drop_ratio < 1,
          "token_drop_ratio must be in [0, 1)", p);
  require(max_length >= 3, "max_length must be >= 3", p);
  return p;
}

void TaptConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError("invalid TAPT config: " + join(p));
}

KeyValues TaptConfig::to_kv() const {
  return {
      {"batch_size", std::to_string(batch_size)},
      {"epochs", std::to_string(epochs)},
      {"lambda_disc", format_double(lambda_disc)},
      {"learning_rate", format_double(learning_rate)},
      {"lr_scheduler", lr_scheduler},
      {"max_length", std::to_string(max_length)},
      {"mlm_probability", format_double(mlm_probability)},
      {"seed", std::to_string(seed)},
      {"token_drop_ratio", format_double(token_drop_ratio)},
      {"warmup_ratio", format_double(warmup_ratio)},
      {"weight_decay", format_double(weight_decay)},
  };
}

TaptConfig TaptConfig::from_kv(const KeyValues& kv, const TaptConfig& base,
                               std::string_view where,
                               std::vector<std::string>& errors) {
  TaptConfig c = base;
  FieldBinder b;
  b.bind("lambda_disc", c.lambda_disc);
  b.bind("mlm_probability", c.mlm_probability);
  b.bind("learning_rate", c.learning_rate);
  b.bind("lr_scheduler", c.lr_scheduler);
  b.bind("warmup_ratio", c.warmup_ratio);
  b.bind("batch_size", c.batch_size);
  b.bind("epochs", c.epochs);
  b.bind("weight_decay", c.weight_decay);
  b.bind("token_drop_ratio", c.token_drop_ratio);
  b.bind("max_length", c.max_length);
  b.bind("seed", c.seed);
  b.apply(kv, where, errors);
  return c;
}

std::string TaptConfig::hash() const { return hash_kv(to_kv()); }

}  // namespace senti
