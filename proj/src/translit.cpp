#include "corpus_tutor/translit.hpp"

#include <algorithm>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/unicode.hpp"

namespace corpus_tutor {

TranslitTable TranslitTable::parse(std::string_view text) {
  TranslitTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::parse_error,
                  "translit table line " + std::to_string(line_no) +
                      ": expected grapheme<TAB>romanization");
    }
    try {
      table.add(line.substr(0, tab), line.substr(tab + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::parse_error, "translit table line " +
                                              std::to_string(line_no) + ": " +
                                              e.what());
    }
    if (eol == text.size()) break;
  }
  return table;
}

void TranslitTable::add(std::string_view grapheme,
                        std::string_view romanization) {
  if (grapheme.empty()) {
    throw Error(ErrorCode::invalid_argument, "empty grapheme key");
  }
  std::string key = to_nfc(grapheme);
  if (map_.contains(key)) {
    throw Error(ErrorCode::invalid_argument,
                "duplicate grapheme key '" + key + "'");
  }
  max_key_ = std::max(max_key_, key.size());
  map_.emplace(std::move(key), std::string(romanization));
}

const std::string* TranslitTable::find(std::string_view key) const {
  auto it = map_.find(std::string(key));
  return it == map_.end() ? nullptr : &it->second;
}

TranslitResult transliterate(std::string_view surface,
                             const TranslitTable& table) {
  const std::string text = to_nfc(surface);
  TranslitResult result;
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t longest = std::min(table.max_key_bytes(), text.size() - i);
    bool matched = false;
    for (std::size_t n = longest; n > 0; --n) {
      // only try cuts that end on a code point boundary
      if (i + n < text.size() &&
          (static_cast<unsigned char>(text[i + n]) & 0xC0) == 0x80) {
        continue;
      }
      if (const std::string* value = table.find(std::string_view(text).substr(i, n))) {
        result.text += *value;
        i += n;
        matched = true;
        break;
      }
    }
    if (!matched && (text[i] == ' ' || text[i] == '\t')) {
      result.text += text[i++];  // word separators are not graphemes
    } else if (!matched) {
      const std::size_t n = std::min(
          utf8_sequence_length(static_cast<unsigned char>(text[i])),
          text.size() - i);
      result.text.append(text, i, n);
      result.complete = false;
      i += n;
    }
  }
  return result;
}

}  // namespace corpus_tutor
