#include "corpus_tutor/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "corpus_tutor/error.hpp"

namespace corpus_tutor {

namespace {

template <class T>
std::string opt_str(const std::optional<T>& value) {
  if (!value) return "-";
  if constexpr (std::is_same_v<T, int>) {
    return std::to_string(*value);
  } else if constexpr (std::is_enum_v<T>) {
    return std::string(to_string(*value));
  } else {
    return value->str();
  }
}

std::string join_classes(const std::set<std::string>& classes) {
  if (classes.empty()) return "-";
  std::string out;
  for (const auto& c : classes) {
    if (!out.empty()) out += '+';
    out += c;
  }
  return out;
}

bool valid_span(const MonadRange& span) {
  return span.first >= 1 && span.first <= span.last;
}

// Reports pairs of overlapping spans among items sorted by first monad.
template <class T>
void check_disjoint(std::vector<const T*> items, const char* kind,
                    std::vector<ModelIssue>& issues) {
  std::sort(items.begin(), items.end(), [](const T* a, const T* b) {
    return a->span.first < b->span.first;
  });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (items[i]->span.first <= items[i - 1]->span.last) {
      issues.push_back({"overlap", kind, items[i]->id,
                        std::string(kind) + " " + items[i]->id +
                            " overlaps " + items[i - 1]->id});
    }
  }
}

}  // namespace

std::optional<VerseRef> VerseRef::parse(std::string_view text) {
  const std::size_t space = text.rfind(' ');
  if (space == std::string_view::npos || space == 0) return std::nullopt;
  std::string_view book = text.substr(0, space);
  std::string_view cv = text.substr(space + 1);
  const std::size_t colon = cv.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  VerseRef ref;
  ref.book = std::string(book);
  auto parse_int = [](std::string_view s, int& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  };
  if (!parse_int(cv.substr(0, colon), ref.chapter) ||
      !parse_int(cv.substr(colon + 1), ref.verse) || ref.chapter < 1 ||
      ref.verse < 1) {
    return std::nullopt;
  }
  return ref;
}

std::string VerseRef::str() const {
  return book + " " + std::to_string(chapter) + ":" + std::to_string(verse);
}

const std::string& FeatureBundle::at(std::string_view name) const {
  for (const auto& [key, value] : entries_) {
    if (key == name) return value;
  }
  throw Error(ErrorCode::invalid_argument,
              "no feature '" + std::string(name) + "' in bundle");
}

std::vector<ModelIssue> validate_corpus(const CorpusData& data) {
  std::vector<ModelIssue> issues;
  const std::unordered_set<std::string> books(data.book_order.begin(),
                                              data.book_order.end());

  std::unordered_map<std::string, const Phrase*> phrases;
  std::unordered_map<std::string, const ClauseAtom*> clauses;
  std::unordered_map<std::string, const Sentence*> sentences;
  for (const auto& p : data.phrases) {
    if (!phrases.emplace(p.id, &p).second) {
      issues.push_back({"duplicate-id", "phrase", p.id,
                        "phrase id " + p.id + " defined twice"});
    }
  }
  for (const auto& c : data.clauses) {
    if (!clauses.emplace(c.id, &c).second) {
      issues.push_back({"duplicate-id", "clause", c.id,
                        "clause id " + c.id + " defined twice"});
    }
  }
  for (const auto& s : data.sentences) {
    if (!sentences.emplace(s.id, &s).second) {
      issues.push_back({"duplicate-id", "sentence", s.id,
                        "sentence id " + s.id + " defined twice"});
    }
  }

  // words
  std::unordered_set<Monad> monads;
  std::unordered_map<std::string, std::size_t> words_per_phrase;
  for (const auto& w : data.words) {
    const std::string id = std::to_string(w.monad);
    if (w.monad < 1) {
      issues.push_back({"bad-monad", "word", id, "monad must be positive"});
    }
    if (!monads.insert(w.monad).second) {
      issues.push_back({"duplicate-monad", "word", id,
                        "monad " + id + " occurs more than once"});
      continue;
    }
    if (w.verse.book.empty() || !books.contains(w.verse.book)) {
      issues.push_back({"unknown-book", "word", id,
                        "book '" + w.verse.book +
                            "' is not in the header book order"});
    }
    if (w.verse.chapter < 1 || w.verse.verse < 1) {
      issues.push_back(
          {"bad-verse", "word", id, "chapter and verse must be positive"});
    }
    const bool is_verb = w.pos == Pos::verb;
    const bool has_verb_features = w.stem.has_value() && w.tense.has_value();
    if (is_verb && !has_verb_features) {
      issues.push_back(
          {"verb-features", "word", id, "verb lacks stem or tense"});
    } else if (!is_verb && (w.stem.has_value() || w.tense.has_value())) {
      issues.push_back(
          {"verb-features", "word", id, "non-verb carries a stem or tense"});
    }
    if (w.person && (*w.person < 1 || *w.person > 3)) {
      issues.push_back({"bad-person", "word", id, "person must be 1, 2 or 3"});
    }
    if (!w.surface.empty() && w.translit.empty()) {
      issues.push_back({"translit-missing", "word", id,
                        "word has a surface form but no transliteration"});
    }
    auto p = phrases.find(w.phrase_id);
    if (p == phrases.end()) {
      issues.push_back({"unknown-phrase", "word", id,
                        "word references unknown phrase " + w.phrase_id});
      continue;
    }
    if (!p->second->span.contains(w.monad)) {
      issues.push_back({"span-mismatch", "word", id,
                        "monad " + id + " lies outside phrase " +
                            w.phrase_id + " span"});
      continue;
    }
    ++words_per_phrase[w.phrase_id];
  }

  // phrases
  std::unordered_map<std::string, std::size_t> monads_per_clause;
  std::vector<const Phrase*> phrase_ptrs;
  for (const auto& p : data.phrases) {
    if (!valid_span(p.span)) {
      issues.push_back({"empty-span", "phrase", p.id,
                        "phrase " + p.id + " has an empty span"});
      continue;
    }
    phrase_ptrs.push_back(&p);
    if (words_per_phrase[p.id] != p.span.size()) {
      issues.push_back({"span-mismatch", "phrase", p.id,
                        "phrase " + p.id + " span is not covered exactly by "
                        "its words"});
    }
    auto c = clauses.find(p.clause_id);
    if (c == clauses.end()) {
      issues.push_back({"unknown-clause", "phrase", p.id,
                        "phrase references unknown clause " + p.clause_id});
      continue;
    }
    if (!c->second->span.contains(p.span)) {
      issues.push_back({"span-outside", "phrase", p.id,
                        "phrase " + p.id + " lies outside clause " +
                            p.clause_id});
      continue;
    }
    monads_per_clause[p.clause_id] += p.span.size();
  }
  check_disjoint(phrase_ptrs, "phrase", issues);

  // clauses
  std::unordered_map<std::string, std::size_t> monads_per_sentence;
  std::vector<const ClauseAtom*> clause_ptrs;
  for (const auto& c : data.clauses) {
    if (!valid_span(c.span)) {
      issues.push_back({"empty-span", "clause", c.id,
                        "clause " + c.id + " has an empty span"});
      continue;
    }
    clause_ptrs.push_back(&c);
    if (monads_per_clause[c.id] != c.span.size()) {
      issues.push_back({"span-mismatch", "clause", c.id,
                        "clause " + c.id + " span is not covered exactly by "
                        "its phrases"});
    }
    const bool digits = !c.ctc.empty() &&
                        std::all_of(c.ctc.begin(), c.ctc.end(), [](char ch) {
                          return ch >= '0' && ch <= '9';
                        });
    const bool main_code = c.ctc.size() == 3 && c.ctc[0] == '4';
    const bool relative_code = c.ctc.size() == 2 && c.ctc[0] == '1';
    if (!digits || !(main_code || relative_code)) {
      issues.push_back({"bad-ctc", "clause", c.id,
                        "clause type code '" + c.ctc +
                            "' is neither 4xx nor 1x"});
    }
    if (c.tab_depth < 0) {
      issues.push_back({"bad-tab-depth", "clause", c.id,
                        "tab depth must be non-negative"});
    }
    if (c.mother_id) {
      auto m = clauses.find(*c.mother_id);
      if (m == clauses.end()) {
        issues.push_back({"bad-mother", "clause", c.id,
                          "mother clause " + *c.mother_id + " does not exist"});
      } else if (m->second->span.first >= c.span.first) {
        issues.push_back({"bad-mother", "clause", c.id,
                          "mother clause " + *c.mother_id +
                              " does not precede " + c.id});
      }
    }
    auto s = sentences.find(c.sentence_id);
    if (s == sentences.end()) {
      issues.push_back({"unknown-sentence", "clause", c.id,
                        "clause references unknown sentence " +
                            c.sentence_id});
      continue;
    }
    if (!s->second->span.contains(c.span)) {
      issues.push_back({"span-outside", "clause", c.id,
                        "clause " + c.id + " lies outside sentence " +
                            c.sentence_id});
      continue;
    }
    monads_per_sentence[c.sentence_id] += c.span.size();
  }
  check_disjoint(clause_ptrs, "clause", issues);

  // sentences
  std::vector<const Sentence*> sentence_ptrs;
  for (const auto& s : data.sentences) {
    if (!valid_span(s.span)) {
      issues.push_back({"empty-span", "sentence", s.id,
                        "sentence " + s.id + " has an empty span"});
      continue;
    }
    sentence_ptrs.push_back(&s);
    if (monads_per_sentence[s.id] != s.span.size()) {
      issues.push_back({"partition", "sentence", s.id,
                        "clauses do not partition sentence " + s.id});
    }
  }
  check_disjoint(sentence_ptrs, "sentence", issues);
  return issues;
}

Corpus::Corpus(CorpusData data)
    : books_(std::move(data.book_order)),
      words_(std::move(data.words)),
      phrases_(std::move(data.phrases)),
      clauses_(std::move(data.clauses)),
      sentences_(std::move(data.sentences)) {
  auto by_first = [](const auto& a, const auto& b) {
    return a.span.first < b.span.first;
  };
  std::sort(words_.begin(), words_.end(),
            [](const Word& a, const Word& b) { return a.monad < b.monad; });
  std::sort(phrases_.begin(), phrases_.end(), by_first);
  std::sort(clauses_.begin(), clauses_.end(), by_first);
  std::sort(sentences_.begin(), sentences_.end(), by_first);

  for (std::size_t i = 0; i < books_.size(); ++i) book_index_[books_[i]] = i;
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    phrase_index_[phrases_[i].id] = i;
  }
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    clause_index_[clauses_[i].id] = i;
  }
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    sentence_index_[sentences_[i].id] = i;
    sentences_[i].clause_ids.clear();
  }
  for (const auto& c : clauses_) {
    auto it = sentence_index_.find(c.sentence_id);
    if (it != sentence_index_.end()) {
      sentences_[it->second].clause_ids.push_back(c.id);
    }
  }
  for (const auto& w : words_) {
    auto it = book_index_.find(w.verse.book);
    if (it != book_index_.end()) {
      verses_.emplace(it->second, w.verse.chapter, w.verse.verse);
    }
  }
  lexicon_ = compute_frequency_ranks(words_);
  for (std::size_t i = 0; i < lexicon_.size(); ++i) {
    lexeme_index_[lexicon_[i].lexeme_id] = i;
  }
}

const Word* Corpus::find_word(Monad monad) const {
  auto it = std::lower_bound(
      words_.begin(), words_.end(), monad,
      [](const Word& w, Monad m) { return w.monad < m; });
  if (it == words_.end() || it->monad != monad) return nullptr;
  return &*it;
}

const Phrase* Corpus::find_phrase(std::string_view id) const {
  auto it = phrase_index_.find(std::string(id));
  return it == phrase_index_.end() ? nullptr : &phrases_[it->second];
}

const ClauseAtom* Corpus::find_clause(std::string_view id) const {
  auto it = clause_index_.find(std::string(id));
  return it == clause_index_.end() ? nullptr : &clauses_[it->second];
}

const Sentence* Corpus::find_sentence(std::string_view id) const {
  auto it = sentence_index_.find(std::string(id));
  return it == sentence_index_.end() ? nullptr : &sentences_[it->second];
}

const LexemeEntry* Corpus::find_lexeme(std::string_view lexeme_id) const {
  auto it = lexeme_index_.find(std::string(lexeme_id));
  return it == lexeme_index_.end() ? nullptr : &lexicon_[it->second];
}

const Phrase& Corpus::phrase_of(const Word& word) const {
  return phrases_.at(phrase_index_.at(word.phrase_id));
}

const ClauseAtom& Corpus::clause_of(const Word& word) const {
  return clauses_.at(clause_index_.at(phrase_of(word).clause_id));
}

const Sentence& Corpus::sentence_of(const Word& word) const {
  return sentences_.at(sentence_index_.at(clause_of(word).sentence_id));
}

std::span<const Word> Corpus::words_in(const MonadRange& span) const {
  auto lo = std::lower_bound(
      words_.begin(), words_.end(), span.first,
      [](const Word& w, Monad m) { return w.monad < m; });
  auto hi = std::upper_bound(
      lo, words_.end(), span.last,
      [](Monad m, const Word& w) { return m < w.monad; });
  return {lo, hi};
}

std::vector<const Phrase*> Corpus::phrases_of(const ClauseAtom& clause) const {
  std::vector<const Phrase*> out;
  auto it = std::lower_bound(
      phrases_.begin(), phrases_.end(), clause.span.first,
      [](const Phrase& p, Monad m) { return p.span.first < m; });
  for (; it != phrases_.end() && it->span.first <= clause.span.last; ++it) {
    if (it->clause_id == clause.id) out.push_back(&*it);
  }
  return out;
}

std::tuple<std::size_t, int, int> Corpus::verse_key(const VerseRef& ref) const {
  auto it = book_index_.find(ref.book);
  if (it == book_index_.end()) {
    throw Error(ErrorCode::unknown_reference,
                "book '" + ref.book + "' is not in the corpus book order");
  }
  return {it->second, ref.chapter, ref.verse};
}

bool Corpus::has_verse(const VerseRef& ref) const {
  auto it = book_index_.find(ref.book);
  return it != book_index_.end() &&
         verses_.contains({it->second, ref.chapter, ref.verse});
}

FeatureBundle Corpus::feature_bundle(Monad monad) const {
  const Word* w = find_word(monad);
  if (w == nullptr) {
    throw Error(ErrorCode::unknown_monad,
                "no word at monad " + std::to_string(monad));
  }
  const Phrase& phrase = phrase_of(*w);
  const ClauseAtom& clause = clause_of(*w);
  const LexemeEntry* lexeme = find_lexeme(w->lexeme_id);

  FeatureBundle b;
  b.add("monad", std::to_string(w->monad));
  b.add("book", w->verse.book);
  b.add("chapter", std::to_string(w->verse.chapter));
  b.add("verse", std::to_string(w->verse.verse));
  b.add("surface", w->surface);
  b.add("translit", w->translit);
  b.add("lexeme_id", w->lexeme_id);
  b.add("gloss", w->gloss);
  b.add("pos", std::string(to_string(w->pos)));
  b.add("stem", opt_str(w->stem));
  b.add("tense", opt_str(w->tense));
  b.add("person", opt_str(w->person));
  b.add("gender", opt_str(w->gender));
  b.add("number", opt_str(w->number));
  b.add("state", opt_str(w->state));
  b.add("verb_class", join_classes(w->verb_class));
  b.add("frequency", lexeme ? std::to_string(lexeme->frequency) : "-");
  b.add("frequency_rank", lexeme ? std::to_string(lexeme->rank) : "-");
  b.add("phrase_id", phrase.id);
  b.add("phrase_type", phrase.phrase_type.str());
  b.add("phrase_function", phrase.function.str());
  b.add("clause_id", clause.id);
  b.add("clause_label", clause.label.str());
  b.add("ctc", clause.ctc);
  b.add("tab_depth", std::to_string(clause.tab_depth));
  b.add("sentence_id", clause.sentence_id);
  return b;
}

std::vector<ClauseSlice> Corpus::text_slice(const VerseRef& from,
                                            const VerseRef& to) const {
  for (const VerseRef* ref : {&from, &to}) {
    if (!has_verse(*ref)) {
      throw Error(ErrorCode::unknown_reference,
                  "verse " + ref->str() + " is not in the corpus");
    }
  }
  const auto lo = verse_key(from);
  const auto hi = verse_key(to);
  if (hi < lo) {
    throw Error(ErrorCode::inverted_range,
                from.str() + " comes after " + to.str());
  }
  std::vector<ClauseSlice> out;
  for (const auto& clause : clauses_) {
    auto words = words_in(clause.span);
    const bool hit = std::any_of(words.begin(), words.end(), [&](const Word& w) {
      const auto key = verse_key(w.verse);
      return lo <= key && key <= hi;
    });
    if (hit) out.push_back({&clause, words});
  }
  return out;
}

Lexicon compute_frequency_ranks(std::span<const Word> words) {
  std::unordered_map<std::string, std::size_t> index;
  Lexicon lexicon;
  for (const auto& w : words) {
    auto [it, inserted] = index.emplace(w.lexeme_id, lexicon.size());
    if (inserted) {
      lexicon.push_back({w.lexeme_id, w.lexeme_id, w.gloss, 0, 0});
    }
    ++lexicon[it->second].frequency;
  }
  std::sort(lexicon.begin(), lexicon.end(),
            [](const LexemeEntry& a, const LexemeEntry& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              return a.citation_form < b.citation_form;
            });
  for (std::size_t i = 0; i < lexicon.size(); ++i) lexicon[i].rank = i + 1;
  return lexicon;
}

Lexicon compute_frequency_ranks(const Corpus& corpus) {
  return compute_frequency_ranks(corpus.words());
}

}  // namespace corpus_tutor
