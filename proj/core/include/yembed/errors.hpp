#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace yembed {

// Error categories map onto the CLI exit codes:
//   UsageError -> 1, DataError -> 2, NumericError -> 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidEncoding : DataError {
  explicit InvalidEncoding(std::size_t offset)
      : DataError("invalid UTF-8 sequence at byte offset " + std::to_string(offset)),
        byte_offset(offset) {}
  std::size_t byte_offset;
};

struct NotSingleGrapheme : DataError {
  using DataError::DataError;
};

struct EmptyCorpus : DataError {
  using DataError::DataError;
};

struct EmptyVocabulary : DataError {
  using DataError::DataError;
};

struct OutOfVocabulary : DataError {
  explicit OutOfVocabulary(const std::string& word)
      : DataError("word not in vocabulary: " + word) {}
};

struct ParseError : DataError {
  ParseError(std::size_t line_number, const std::string& what)
      : DataError("line " + std::to_string(line_number) + ": " + what), line(line_number) {}
  std::size_t line;
};

struct TooFewPairs : DataError {
  using DataError::DataError;
};

struct NoEvaluableQuadruples : DataError {
  using DataError::DataError;
};

struct ZeroVector : NumericError {
  using NumericError::NumericError;
};

struct DegenerateInput : NumericError {
  using NumericError::NumericError;
};

struct NonFiniteLoss : NumericError {
  using NumericError::NumericError;
};

}  // namespace yembed
