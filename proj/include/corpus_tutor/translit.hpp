#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

namespace corpus_tutor {

/// Grapheme-sequence to romanization mapping applied by longest match.
/// Keys are stored in NFC; values may be empty (silent letters).
class TranslitTable {
 public:
  /// Parses `grapheme<TAB>romanization` lines. Blank lines and lines starting
  /// with `#` are skipped. Throws parse_error on a line without a tab, an
  /// empty key, or a key that repeats an earlier one.
  static TranslitTable parse(std::string_view text);

  /// Throws invalid_argument on an empty or duplicate key.
  void add(std::string_view grapheme, std::string_view romanization);

  std::size_t size() const { return map_.size(); }
  std::size_t max_key_bytes() const { return max_key_; }
  const std::string* find(std::string_view key) const;

 private:
  std::unordered_map<std::string, std::string> map_;
  std::size_t max_key_ = 0;
};

struct TranslitResult {
  std::string text;
  /// False when some code point had no table entry and passed through.
  bool complete = true;
};

/// Left-to-right longest-match replacement over the NFC form of `surface`.
/// Spaces and tabs between words pass through without clearing `complete`.
TranslitResult transliterate(std::string_view surface,
                             const TranslitTable& table);

}  // namespace corpus_tutor
