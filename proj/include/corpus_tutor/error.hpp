#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace corpus_tutor {

enum class ErrorCode {
  unknown_monad,
  unknown_reference,
  inverted_range,
  unmapped_tense,
  unmapped_opener,
  invalid_spec,
  empty_scope,
  shape_mismatch,
  empty_session,
  no_answers,
  parse_error,
  schema_mismatch,
  write_failure,
  unknown_session,
  out_of_order,
  invalid_token,
  forbidden,
  invalid_argument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace corpus_tutor
