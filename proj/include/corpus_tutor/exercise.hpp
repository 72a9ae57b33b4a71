#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "corpus_tutor/corpus.hpp"

namespace corpus_tutor {

enum class ExerciseKind {
  vocabulary,
  typing,
  verb_parsing,
  noun_parsing,
  pos_id,
  clause_id_drill,
  translation_gloss,
};

template <>
struct EnumNames<ExerciseKind> {
  static constexpr std::array<std::string_view, 7> names{
      "vocabulary", "typing",          "verb_parsing",     "noun_parsing",
      "pos_id",     "clause_id_drill", "translation_gloss"};
};

/// Word-level features a parsing question can ask for.
enum class Feature { stem, tense, person, gender, number, state, pos, clause_label };

template <>
struct EnumNames<Feature> {
  static constexpr std::array<std::string_view, 8> names{
      "stem", "tense", "person", "gender", "number", "state", "pos",
      "clause_label"};
};

enum class ScriptMode { source, transliteration };

template <>
struct EnumNames<ScriptMode> {
  static constexpr std::array<std::string_view, 2> names{"source",
                                                         "transliteration"};
};

struct VerseScope {
  VerseRef from;
  VerseRef to;
  friend bool operator==(const VerseScope&, const VerseScope&) = default;
};

/// Inclusive frequency-rank band.
struct RankScope {
  std::size_t lo = 1;
  std::size_t hi = 1;
  friend bool operator==(const RankScope&, const RankScope&) = default;
};

/// monostate means the whole corpus.
using Scope = std::variant<std::monostate, VerseScope, RankScope>;

struct ExerciseSpec {
  std::string name;
  ExerciseKind kind = ExerciseKind::vocabulary;
  Scope scope;
  std::size_t question_count = 5;
  /// Keeps only words carrying at least one of these verb-class tags.
  std::set<std::string> verb_class_filter;
  /// In asking order. Empty means the default set for the kind.
  std::vector<Feature> asked_features;
  /// 0 for a typed answer, otherwise options per question (at least 2).
  std::size_t choices = 4;
  ScriptMode script = ScriptMode::source;

  /// Reads `key=value` lines (`#` comments, blank lines allowed). Keys:
  /// name, kind, questions, choices, ranks (lo-hi), from, to (verse
  /// references), verb_class and asked (comma lists), script. Throws
  /// invalid_spec on unknown keys, bad values or an invalid combination.
  static ExerciseSpec parse(std::string_view text);
  /// Canonical key=value text; parse(serialize()) == *this.
  std::string serialize() const;

  /// Asked features after defaults are applied.
  std::vector<Feature> effective_features() const;
  /// Throws invalid_spec when the fields do not fit together.
  void validate() const;

  friend bool operator==(const ExerciseSpec&, const ExerciseSpec&) = default;
};

/// One answer slot of a question. Parsing questions have one field per asked
/// feature; the other kinds have a single field named after what is asked
/// (gloss, surface, pos, clause_label).
struct AnswerField {
  std::string name;
  std::string expected;
  /// Multiple-choice options in display order; empty for typed answers.
  std::vector<std::string> options;
  /// True when the answer is free text compared after normalization.
  bool text = false;
};

struct Question {
  /// "<index>@m:<monad>" for word and clause targets, "<index>@l:<lexeme>"
  /// for lexeme targets.
  std::string id;
  std::string prompt;
  /// Verse of the target, for display next to the prompt.
  std::string context;
  std::vector<AnswerField> fields;
};

struct Exercise {
  ExerciseSpec spec;
  std::uint64_t seed = 0;
  std::vector<Question> questions;
};

/// Identity of a drill target across exercises: "m:<monad>" or
/// "l:<lexeme>", the part of a question id after the '@'.
std::string item_key(std::string_view question_id);

struct ItemStats {
  std::size_t right = 0;
  std::size_t wrong = 0;
  /// Answers given since this item was last missed; empty if never missed.
  std::optional<std::size_t> items_since_last_error;
};

using ItemHistory = std::map<std::string, ItemStats, std::less<>>;

/// Builds per-item stats from one learner's answers in chronological order.
ItemHistory build_history(
    const std::vector<std::pair<std::string, bool>>& answers);

/// Tailoring weight: 1 + 2*wrong/(right+wrong+1) + 1/(1+items since the
/// last error), the last term only for items missed at least once. Items
/// without history weigh 1.5.
double adaptive_weight(const ItemStats* stats);

/// Deterministic in (spec, corpus, seed, history). Without a history every
/// candidate is equally likely; with one, candidates are drawn by
/// adaptive_weight. Throws invalid_spec or empty_scope.
Exercise generate(const ExerciseSpec& spec, const Corpus& corpus,
                  std::uint64_t seed, const ItemHistory* history = nullptr);

/// Text form of an exercise, used for byte-level comparisons.
std::string render_exercise(const Exercise& exercise);

struct FeatureResult {
  std::string name;
  bool correct = false;
  std::string expected;
  std::string got;
};

struct Feedback {
  bool overall = false;
  std::vector<FeatureResult> per_feature;
  double elapsed = 0;
};

/// A learner's answer: field name to value.
using Submission = std::map<std::string, std::string, std::less<>>;

/// Compares each field with its key. Text fields match after NFC and
/// trimming; feature fields must equal the canonical value after trimming.
/// Throws shape_mismatch when the submitted names differ from the question's
/// fields and invalid_argument for a non-positive elapsed time.
Feedback check(const Question& question, const Submission& submission,
               double elapsed);

/// The answer key as a submission; check() of it is always correct.
Submission answer_key(const Question& question);

}  // namespace corpus_tutor
