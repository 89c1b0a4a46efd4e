#include "senti/backend.h"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>

#include "json.hpp"
#include "senti/error.h"
#include "senti/hashing.h"
#include "senti/toy_backend.h"
#include "senti/tsv.h"

namespace senti {

EncodedSplit encode_split(const DatasetSplit& split, const Tokenizer& tok,
                          std::size_t max_length) {
  EncodedSplit out;
  out.vocab_size = tok.vocab_size();
  out.ids.reserve(split.size());
  out.sequences.reserve(split.size());
  out.labels.reserve(split.size());
  for (const auto& ex : split.examples) {
    try {
      out.sequences.push_back(encode_truncate(ex.text, tok, max_length));
    } catch (const EmptyTextError&) {
      throw EmptyTextError("example '" + ex.id + "' has no tokens");
    }
    out.ids.push_back(ex.id);
    out.labels.push_back(ex.label);
  }
  return out;
}

SentimentLabel argmax_label(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumLabels; ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return label_at(best);
}

bool ModelHandle::has_tag(std::string_view tag) const {
  return std::find(stage_tags.begin(), stage_tags.end(), tag) !=
         stage_tags.end();
}

namespace {

constexpr char kMagic[8] = {'S', 'E', 'N', 'T', 'I', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

template <typename T>
T get_le(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  if (in.size() - pos < sizeof(T)) {
    throw IntegrityError("model handle truncated");
  }
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<T>(in[pos + i]) << (8 * i);
  }
  pos += sizeof(T);
  return v;
}

std::uint64_t checksum(const std::vector<std::uint8_t>& bytes, std::size_t n) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), n));
}

}  // namespace

std::vector<std::uint8_t> serialize_handle(const ModelHandle& h) {
  nlohmann::json header = {{"id", h.id},
                           {"backend", h.backend},
                           {"config_hash", h.config_hash},
                           {"stage_tags", h.stage_tags},
                           {"metadata", h.metadata}};
  const std::string header_text = header.dump();
  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(header_text.size()));
  out.insert(out.end(), header_text.begin(), header_text.end());
  put_le<std::uint64_t>(out, h.parameters.size());
  out.insert(out.end(), h.parameters.begin(), h.parameters.end());
  put_le<std::uint64_t>(out, checksum(out, out.size()));
  return out;
}

ModelHandle deserialize_handle(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < sizeof(kMagic) + 8 + 8 + 8 ||
      !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw IntegrityError("not a model handle (bad magic)");
  }
  const std::size_t body = bytes.size() - sizeof(std::uint64_t);
  std::size_t tail = body;
  if (get_le<std::uint64_t>(bytes, tail) != checksum(bytes, body)) {
    throw IntegrityError("model handle checksum mismatch (file corrupted)");
  }
  std::size_t pos = sizeof(kMagic);
  const auto version = get_le<std::uint32_t>(bytes, pos);
  if (version != kVersion) {
    throw IntegrityError("unsupported model handle version " +
                         std::to_string(version));
  }
  const auto header_len = get_le<std::uint32_t>(bytes, pos);
  if (body - pos < header_len) throw IntegrityError("model handle truncated");
  const std::string header_text(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                bytes.begin() + static_cast<std::ptrdiff_t>(pos + header_len));
  pos += header_len;
  const auto param_len = get_le<std::uint64_t>(bytes, pos);
  if (body - pos != param_len) throw IntegrityError("model handle length mismatch");

  ModelHandle h;
  try {
    const auto header = nlohmann::json::parse(header_text);
    h.id = header.at("id").get<std::string>();
    h.backend = header.at("backend").get<std::string>();
    h.config_hash = header.at("config_hash").get<std::string>();
    h.stage_tags = header.at("stage_tags").get<std::vector<std::string>>();
    h.metadata =
        header.at("metadata").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IntegrityError(std::string("model handle header invalid: ") + e.what());
  }
  h.parameters.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(body));
  return h;
}

void save_handle(const std::filesystem::path& path, const ModelHandle& h) {
  const auto bytes = serialize_handle(h);
  tsv::write_atomic(path, std::string_view(
                              reinterpret_cast<const char*>(bytes.data()),
                              bytes.size()));
}

ModelHandle load_handle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IntegrityError("cannot open model handle " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return deserialize_handle(bytes);
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  }
}

ModelHandle ModelBackend::pretrain_tapt(const TaptConfig&, const MaskedCorpus&) {
  throw CapabilityError("backend '" + name() +
                        "' does not support pre-training");
}

BackendRegistry::BackendRegistry() {
  factories_.emplace(ToyBackend::kName,
                     [] { return std::make_unique<ToyBackend>(); });
}

BackendRegistry& BackendRegistry::global() {
  static BackendRegistry registry;
  return registry;
}

void BackendRegistry::add(std::string name, Factory factory) {
  factories_.insert_or_assign(std::move(name), std::move(factory));
}

std::unique_ptr<ModelBackend> BackendRegistry::create(
    std::string_view name) const {
  auto it = factories_.find(name);
  if (it == factories_.end()) {
    throw ConfigError("unknown backend '" + std::string(name) + "'");
  }
  return it->second();
}

std::vector<std::string> BackendRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : factories_) out.push_back(k);
  return out;
}

}  // namespace senti
