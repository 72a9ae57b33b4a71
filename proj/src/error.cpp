#include "corpus_tutor/error.hpp"

namespace corpus_tutor {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_monad: return "unknown-monad";
    case ErrorCode::unknown_reference: return "unknown-reference";
    case ErrorCode::inverted_range: return "inverted-range";
    case ErrorCode::unmapped_tense: return "unmapped-tense";
    case ErrorCode::unmapped_opener: return "unmapped-opener";
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::empty_scope: return "empty-scope";
    case ErrorCode::shape_mismatch: return "shape-mismatch";
    case ErrorCode::empty_session: return "empty-session";
    case ErrorCode::no_answers: return "no-answers";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::schema_mismatch: return "schema-mismatch";
    case ErrorCode::write_failure: return "write-failure";
    case ErrorCode::unknown_session: return "unknown-session";
    case ErrorCode::out_of_order: return "out-of-order";
    case ErrorCode::invalid_token: return "invalid-token";
    case ErrorCode::forbidden: return "forbidden";
    case ErrorCode::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace corpus_tutor
