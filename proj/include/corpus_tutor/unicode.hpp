#pragma once

#include <string>
#include <string_view>

namespace corpus_tutor {

/// Returns `text` in Unicode normalization form C. Invalid UTF-8 sequences
/// are replaced with U+FFFD.
std::string to_nfc(std::string_view text);

bool is_valid_utf8(std::string_view text);

/// Strips ASCII and Unicode white space from both ends.
std::string_view trim(std::string_view text);

/// NFC of the trimmed text; the comparison key for typed answers.
std::string normalize_answer(std::string_view text);

/// Number of bytes in the UTF-8 sequence starting with `lead`, or 1 for a
/// stray continuation byte.
std::size_t utf8_sequence_length(unsigned char lead);

}  // namespace corpus_tutor
