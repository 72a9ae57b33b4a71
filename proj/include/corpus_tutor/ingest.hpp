#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_tutor/corpus.hpp"
#include "corpus_tutor/translit.hpp"

namespace corpus_tutor {

struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 when the problem has no single line
  std::string rule;
  std::string message;
};

struct IngestReport {
  std::size_t word_count = 0;
  std::size_t phrase_count = 0;
  std::size_t clause_count = 0;
  std::size_t sentence_count = 0;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
};

struct IngestResult {
  std::optional<Corpus> corpus;  // present iff report.ok()
  IngestReport report;
};

/// Parses the corpus interchange format:
///
///   #corpus v1 books=<comma-separated canonical book order>
///   W monad book chapter verse surface translit lexeme gloss pos stem tense
///     person gender number state verb_class(+-joined) phrase_id
///   P phrase_id clause_id first_monad last_monad phrase_type function
///   C clause_id sentence_id first_monad last_monad label ctc tab_depth mother
///   S sentence_id first_monad last_monad
///
/// Fields are tab-separated and `-` marks an absent optional field. Text
/// fields are normalized to NFC. A word with translit `-` gets one derived
/// from `table` when given. Every problem is collected into the report; no
/// corpus is produced when any error was found.
IngestResult parse_corpus(std::string_view contents,
                          const TranslitTable* table = nullptr);

/// Writes a corpus back in the interchange format, records grouped by layer
/// (W, P, C, S) in monad order.
std::string serialize_corpus(const Corpus& corpus);

/// Diagnostics as tab-separated text: a `counts` line followed by one
/// `error|warning<TAB>line<TAB>rule<TAB>message` line per diagnostic.
std::string format_report(const IngestReport& report);

}  // namespace corpus_tutor
