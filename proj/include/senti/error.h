#ifndef SENTI_ERROR_H_
#define SENTI_ERROR_H_

#include <stdexcept>
#include <string>

namespace senti {

// Base class for every error raised by the pipeline. Messages name the
// offending file, row, field or label so they can be surfaced verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SENTI_DEFINE_ERROR(Name)      \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

SENTI_DEFINE_ERROR(ParseError);
SENTI_DEFINE_ERROR(DuplicateIdError);
SENTI_DEFINE_ERROR(UnknownLabelError);
SENTI_DEFINE_ERROR(NormalizationError);
SENTI_DEFINE_ERROR(EmptyTextError);
SENTI_DEFINE_ERROR(EmptyDatasetError);
SENTI_DEFINE_ERROR(VocabMismatchError);
SENTI_DEFINE_ERROR(ConfigError);
SENTI_DEFINE_ERROR(LeakageError);
SENTI_DEFINE_ERROR(CapabilityError);
SENTI_DEFINE_ERROR(MisalignedPredictionsError);
SENTI_DEFINE_ERROR(EmptyMatrixError);
SENTI_DEFINE_ERROR(IntegrityError);
SENTI_DEFINE_ERROR(PluginError);

#undef SENTI_DEFINE_ERROR

// Rethrows the exception currently being handled with `prefix` prepended to
// its message, preserving its senti error type. Must be called from inside
// a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  }
#define SENTI_RETHROW(Name) \
  catch (const Name& e) { throw Name(prefix + e.what()); }
  SENTI_RETHROW(ParseError)
  SENTI_RETHROW(DuplicateIdError)
  SENTI_RETHROW(UnknownLabelError)
  SENTI_RETHROW(NormalizationError)
  SENTI_RETHROW(EmptyTextError)
  SENTI_RETHROW(EmptyDatasetError)
  SENTI_RETHROW(VocabMismatchError)
  SENTI_RETHROW(ConfigError)
  SENTI_RETHROW(LeakageError)
  SENTI_RETHROW(CapabilityError)
  SENTI_RETHROW(MisalignedPredictionsError)
  SENTI_RETHROW(EmptyMatrixError)
  SENTI_RETHROW(IntegrityError)
  SENTI_RETHROW(PluginError)
#undef SENTI_RETHROW
  catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace senti

#endif  // SENTI_ERROR_H_
