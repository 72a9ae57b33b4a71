#include "corpus_tutor/clause_codes.hpp"

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/unicode.hpp"

namespace corpus_tutor {

const TenseDigitTable& TenseDigitTable::standard() {
  static const TenseDigitTable table = [] {
    TenseDigitTable t;
    t.digits_ = {{Tense::qatal, '2'},
                 {Tense::yiqtol, '7'},
                 {Tense::wayyiqtol, '7'}};
    return t;
  }();
  return table;
}

TenseDigitTable TenseDigitTable::with_extensions(std::string_view config) {
  TenseDigitTable table = standard();
  std::size_t line_no = 0;
  while (!config.empty()) {
    const std::size_t eol = config.find('\n');
    std::string_view line = trim(config.substr(0, eol));
    config = eol == std::string_view::npos ? std::string_view{}
                                           : config.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    auto tense = eq == std::string_view::npos
                     ? std::nullopt
                     : parse_enum<Tense>(trim(line.substr(0, eq)));
    std::string_view digit =
        eq == std::string_view::npos ? "" : trim(line.substr(eq + 1));
    if (!tense || digit.size() != 1 || digit[0] < '0' || digit[0] > '9') {
      throw Error(ErrorCode::parse_error,
                  "tense digit line " + std::to_string(line_no) +
                      ": expected <tense>=<digit>");
    }
    table.extend(*tense, digit[0]);
  }
  return table;
}

void TenseDigitTable::extend(Tense tense, char digit) {
  digits_[tense] = digit;
}

char TenseDigitTable::digit(ClauseTense tense) const {
  if (!tense) return '0';
  auto it = digits_.find(*tense);
  if (it == digits_.end()) {
    throw Error(ErrorCode::unmapped_tense,
                "no clause-type digit for verb form " +
                    std::string(to_string(*tense)));
  }
  return it->second;
}

std::string derive_ctc(Opener opener, ClauseTense own,
                       std::optional<ClauseTense> mother,
                       const TenseDigitTable& digits) {
  switch (opener) {
    case Opener::relative:
      return std::string{'1', digits.digit(own)};
    case Opener::waw:
      if (!mother) {
        throw Error(ErrorCode::invalid_argument,
                    "a waw clause needs the verb form of its mother clause");
      }
      return std::string{'4', digits.digit(own), digits.digit(*mother)};
    case Opener::none:
      break;
  }
  throw Error(ErrorCode::unmapped_opener,
              "clause-type codes are defined for waw and relative openers");
}

ClauseLabel derive_clause_label(bool has_explicit_subject,
                                ClauseTense own_tense, bool has_conjunction) {
  if (!own_tense) return LabelKind::NmCl;
  switch (*own_tense) {
    case Tense::wayyiqtol:
      return has_explicit_subject ? LabelKind::WayX : LabelKind::Way0;
    case Tense::qatal:
      if (!has_explicit_subject) return LabelKind::xQt0;
      return has_conjunction ? LabelKind::WXQt : LabelKind::XQt;
    default:
      return ClauseLabel::other(std::string(to_string(*own_tense)));
  }
}

ClauseTense clause_tense(const Corpus& corpus, const ClauseAtom& clause) {
  const Word* first_verb = nullptr;
  for (const Phrase* phrase : corpus.phrases_of(clause)) {
    for (const Word& w : corpus.words_in(phrase->span)) {
      if (w.pos != Pos::verb) continue;
      if (phrase->function == FunctionKind::Pred) return w.tense;
      if (first_verb == nullptr) first_verb = &w;
    }
  }
  if (first_verb != nullptr) return first_verb->tense;
  return std::nullopt;
}

ClauseFeatures clause_features(const Corpus& corpus, const ClauseAtom& clause,
                               const ClauseFeatureRules& rules) {
  ClauseFeatures f;
  const auto phrases = corpus.phrases_of(clause);
  if (!phrases.empty()) {
    const Phrase& opener = *phrases.front();
    const auto words = corpus.words_in(opener.span);
    const std::string function = opener.function.str();
    if (function == rules.relative_function) {
      f.opener = Opener::relative;
    } else if (function == rules.conjunction_function && !words.empty() &&
               rules.waw_lexemes.contains(words.front().lexeme_id)) {
      f.opener = Opener::waw;
    }
  }
  for (const Phrase* p : phrases) {
    const std::string function = p->function.str();
    if (p->function == FunctionKind::Subj) f.has_explicit_subject = true;
    if (function == rules.conjunction_function) f.has_conjunction = true;
  }
  f.own_tense = clause_tense(corpus, clause);
  if (f.opener == Opener::waw) {
    const ClauseAtom* mother =
        clause.mother_id ? corpus.find_clause(*clause.mother_id) : nullptr;
    f.mother_tense = mother ? clause_tense(corpus, *mother)
                            : ClauseTense(rules.narrative_default);
  }
  return f;
}

}  // namespace corpus_tutor
