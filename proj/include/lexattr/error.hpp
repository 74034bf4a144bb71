#ifndef LEXATTR_ERROR_HPP_
#define LEXATTR_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lexattr {

// Base class for all library errors. Validation-style failures derive from
// this so callers can distinguish them from genuine std::runtime_error.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// tokenizer
class DuplicateTokenError : public Error { using Error::Error; };
class MissingUnkError : public Error { using Error::Error; };
class LeadingContinuationError : public Error { using Error::Error; };
class EmptyQueryError : public Error { using Error::Error; };

// model
class EmptyInputError : public Error { using Error::Error; };
class OptionCountError : public Error { using Error::Error; };
class MixedKindsError : public Error { using Error::Error; };
class EmptyDatasetError : public Error { using Error::Error; };

// attribution
class ShapeMismatchError : public Error { using Error::Error; };
class ZeroStepsError : public Error { using Error::Error; };

// analytics
class NonpositiveBinError : public Error { using Error::Error; };
class EmptyGroupError : public Error { using Error::Error; };
class RaggedMatrixError : public Error { using Error::Error; };

// ingestion
class BadLabelError : public Error { using Error::Error; };
class EmptySentenceError : public Error { using Error::Error; };
class AnswerRangeError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };

// cli / pipeline
class ConfigError : public Error { using Error::Error; };

// Wraps any error raised inside a pipeline stage with the stage name.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& cause)
      : Error("stage '" + stage + "' failed: " + cause), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace lexattr

#endif  // LEXATTR_ERROR_HPP_
