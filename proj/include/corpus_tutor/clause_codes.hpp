#pragma once

// Clause-type codes and clause-atom labels.
//
// A code concatenates up to three digits: the clause opener (waw 4,
// relative 1), the clause's own verb form, and, for waw clauses, the verb
// form of the mother clause it continues. Verb-form digits are 0 for a
// verbless clause, 2 for qatal and 7 for yiqtol/wayyiqtol; further forms can
// be mapped through TenseDigitTable::extend.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "corpus_tutor/corpus.hpp"

namespace corpus_tutor {

enum class Opener { waw, relative, none };

template <>
struct EnumNames<Opener> {
  static constexpr std::array<std::string_view, 3> names{"waw", "relative",
                                                         "none"};
};

/// nullopt stands for a verbless (nominal) clause.
using ClauseTense = std::optional<Tense>;

class TenseDigitTable {
 public:
  /// {nominal: 0, qatal: 2, yiqtol: 7, wayyiqtol: 7}.
  static const TenseDigitTable& standard();

  /// Reads extension lines `tense=digit` (e.g. `imperative=5`); `#` starts
  /// a comment. Throws parse_error on malformed lines.
  static TenseDigitTable with_extensions(std::string_view config);

  void extend(Tense tense, char digit);
  /// Throws unmapped_tense for forms outside the table.
  char digit(ClauseTense tense) const;

 private:
  std::map<Tense, char> digits_;
};

/// Clause-type code for a clause. `mother` is required for waw openers and
/// ignored for relative clauses. Throws unmapped_tense / unmapped_opener.
std::string derive_ctc(Opener opener, ClauseTense own,
                       std::optional<ClauseTense> mother = std::nullopt,
                       const TenseDigitTable& digits =
                           TenseDigitTable::standard());

/// Way0/WayX for wayyiqtol without/with subject; WXQt, XQt, xQt0 for qatal
/// with conjunction and subject, subject only, or no subject; NmCl for a
/// verbless clause. Other combinations map to other("<tense>").
ClauseLabel derive_clause_label(bool has_explicit_subject,
                                ClauseTense own_tense, bool has_conjunction);

/// Corpus conventions used to read clause features off phrase annotations.
struct ClauseFeatureRules {
  std::string relative_function = "Rela";
  std::string conjunction_function = "Conj";
  std::set<std::string> waw_lexemes{"W"};
  /// Mother form assumed for a waw clause whose mother lies before the start
  /// of the corpus (a narrative chain continues from earlier text).
  Tense narrative_default = Tense::wayyiqtol;
};

struct ClauseFeatures {
  Opener opener = Opener::none;
  ClauseTense own_tense;
  /// Set for waw clauses only.
  std::optional<ClauseTense> mother_tense;
  bool has_explicit_subject = false;
  bool has_conjunction = false;
};

/// Reads opener, predicate verb form, mother form and subject presence from
/// the clause's phrases and words.
ClauseFeatures clause_features(const Corpus& corpus, const ClauseAtom& clause,
                               const ClauseFeatureRules& rules = {});

/// Verb form of the clause predicate, nullopt when the clause has no verb.
ClauseTense clause_tense(const Corpus& corpus, const ClauseAtom& clause);

}  // namespace corpus_tutor
