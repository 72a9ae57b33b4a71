#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpus_tutor/enums.hpp"

namespace corpus_tutor {

/// 1-based global word position.
using Monad = std::uint32_t;

struct MonadRange {
  Monad first = 0;
  Monad last = 0;

  bool contains(Monad m) const { return first <= m && m <= last; }
  bool contains(const MonadRange& r) const {
    return first <= r.first && r.last <= last;
  }
  bool intersects(const MonadRange& r) const {
    return first <= r.last && r.first <= last;
  }
  std::size_t size() const { return last >= first ? last - first + 1 : 0; }

  friend bool operator==(const MonadRange&, const MonadRange&) = default;
};

struct VerseRef {
  std::string book;
  int chapter = 1;
  int verse = 1;

  /// Parses "Joshua 24:29"; the book may contain spaces ("1 Samuel 3:4").
  static std::optional<VerseRef> parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const VerseRef&, const VerseRef&) = default;
};

struct Word {
  Monad monad = 0;
  VerseRef verse;
  std::string surface;
  std::string translit;
  std::string lexeme_id;
  std::string gloss;
  Pos pos = Pos::particle;
  std::optional<Stem> stem;
  std::optional<Tense> tense;
  std::optional<int> person;
  std::optional<Gender> gender;
  std::optional<GrammaticalNumber> number;
  std::optional<State> state;
  std::set<std::string> verb_class;
  std::string phrase_id;
};

struct Phrase {
  std::string id;
  std::string clause_id;
  MonadRange span;
  PhraseType phrase_type;
  PhraseFunction function;
};

struct ClauseAtom {
  std::string id;
  std::string sentence_id;
  MonadRange span;
  ClauseLabel label;
  std::string ctc;
  int tab_depth = 0;
  std::optional<std::string> mother_id;
};

struct Sentence {
  std::string id;
  MonadRange span;
  std::vector<std::string> clause_ids;
};

struct LexemeEntry {
  std::string lexeme_id;
  std::string citation_form;
  std::string gloss;
  std::size_t frequency = 0;
  std::size_t rank = 0;
};

/// Lexemes in rank order (index 0 is rank 1).
using Lexicon = std::vector<LexemeEntry>;

/// Raw layers of a corpus before indexing. Ingest fills this and validates it
/// with validate_corpus() before a Corpus is built from it.
struct CorpusData {
  std::vector<std::string> book_order;
  std::vector<Word> words;
  std::vector<Phrase> phrases;
  std::vector<ClauseAtom> clauses;
  std::vector<Sentence> sentences;
};

/// A violated model invariant. `object` names the offending item
/// ("word 12", "clause c4") so ingest can map it back to a source line.
struct ModelIssue {
  std::string rule;
  std::string object_kind;
  std::string object_id;
  std::string message;
};

/// Checks every corpus invariant: unique monads, membership of each layer in
/// the next, disjoint spans, spans covering exactly their members, clause
/// spans partitioning sentences, verb features, ctc shape, mother references.
/// Sentence clause lists are derived from clause records and need not be
/// filled in.
std::vector<ModelIssue> validate_corpus(const CorpusData& data);

/// Ordered feature list for one word, as shown in the hover pane.
class FeatureBundle {
 public:
  void add(std::string name, std::string value) {
    entries_.emplace_back(std::move(name), std::move(value));
  }
  /// Value of a named feature; throws if the name is not present.
  const std::string& at(std::string_view name) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

class Corpus;

/// A clause atom with the words it spans.
struct ClauseSlice {
  const ClauseAtom* clause = nullptr;
  std::span<const Word> words;
};

/// Immutable, indexed corpus. All member functions are const and safe for
/// concurrent use.
class Corpus {
 public:
  /// Builds the indexes. `data` must have passed validate_corpus().
  explicit Corpus(CorpusData data);

  const std::vector<std::string>& book_order() const { return books_; }
  std::span<const Word> words() const { return words_; }
  const std::vector<Phrase>& phrases() const { return phrases_; }
  const std::vector<ClauseAtom>& clauses() const { return clauses_; }
  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Lexicon& lexicon() const { return lexicon_; }

  const Word* find_word(Monad monad) const;
  const Phrase* find_phrase(std::string_view id) const;
  const ClauseAtom* find_clause(std::string_view id) const;
  const Sentence* find_sentence(std::string_view id) const;
  const LexemeEntry* find_lexeme(std::string_view lexeme_id) const;

  const Phrase& phrase_of(const Word& word) const;
  const ClauseAtom& clause_of(const Word& word) const;
  const Sentence& sentence_of(const Word& word) const;

  /// Words covered by a span; the span must lie inside the corpus.
  std::span<const Word> words_in(const MonadRange& span) const;
  /// Phrases of a clause in monad order.
  std::vector<const Phrase*> phrases_of(const ClauseAtom& clause) const;

  /// Position of a verse in canonical order: (book index, chapter, verse).
  /// Throws unknown_reference for a book missing from the header.
  std::tuple<std::size_t, int, int> verse_key(const VerseRef& ref) const;
  bool has_verse(const VerseRef& ref) const;

  /// Every stored feature of the word at `monad`, plus its phrase type and
  /// function, clause label and ctc, and sentence id.
  FeatureBundle feature_bundle(Monad monad) const;

  /// Clause atoms intersecting the verse range [from, to], in monad order.
  std::vector<ClauseSlice> text_slice(const VerseRef& from,
                                      const VerseRef& to) const;

 private:
  std::vector<std::string> books_;
  std::vector<Word> words_;
  std::vector<Phrase> phrases_;
  std::vector<ClauseAtom> clauses_;
  std::vector<Sentence> sentences_;
  Lexicon lexicon_;

  std::unordered_map<std::string, std::size_t> book_index_;
  std::unordered_map<std::string, std::size_t> phrase_index_;
  std::unordered_map<std::string, std::size_t> clause_index_;
  std::unordered_map<std::string, std::size_t> sentence_index_;
  std::unordered_map<std::string, std::size_t> lexeme_index_;
  std::set<std::tuple<std::size_t, int, int>> verses_;
};

/// Lexemes ranked by descending token count; ties go to the smaller citation
/// form by code point. Citation form is the lexeme id and the gloss is the
/// gloss of the first occurrence.
Lexicon compute_frequency_ranks(std::span<const Word> words);
Lexicon compute_frequency_ranks(const Corpus& corpus);

}  // namespace corpus_tutor
