#include "corpus_tutor/exercise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/random.hpp"
#include "corpus_tutor/unicode.hpp"

namespace corpus_tutor {

namespace {

const std::vector<Feature> kVerbFeatures{Feature::stem, Feature::tense,
                                         Feature::person, Feature::gender,
                                         Feature::number};
const std::vector<Feature> kNounFeatures{Feature::gender, Feature::number,
                                         Feature::state};

[[noreturn]] void bad_spec(const std::string& message) {
  throw Error(ErrorCode::invalid_spec, message);
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  std::size_t n = 0;
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc() || end != value.data() + value.size()) {
    bad_spec(std::string(key) + " must be a non-negative integer");
  }
  return n;
}

VerseRef parse_verse(std::string_view key, std::string_view value) {
  auto ref = VerseRef::parse(value);
  if (!ref) bad_spec(std::string(key) + " must look like 'Book 1:2'");
  return *ref;
}

bool is_nominal(Pos pos) {
  return pos == Pos::noun || pos == Pos::proper_noun || pos == Pos::adjective;
}

template <class T>
std::string opt_name(const std::optional<T>& v) {
  return v ? std::string(to_string(*v)) : "-";
}

std::string feature_value(const Corpus& corpus, const Word& w, Feature f) {
  switch (f) {
    case Feature::stem:
      return w.stem ? w.stem->str() : "-";
    case Feature::tense:
      return opt_name(w.tense);
    case Feature::person:
      return w.person ? std::to_string(*w.person) : "-";
    case Feature::gender:
      return opt_name(w.gender);
    case Feature::number:
      return opt_name(w.number);
    case Feature::state:
      return opt_name(w.state);
    case Feature::pos:
      return std::string(to_string(w.pos));
    case Feature::clause_label:
      return corpus.clause_of(w).label.str();
  }
  return "-";
}

std::string display(const Word& w, ScriptMode script) {
  if (script == ScriptMode::transliteration && !w.translit.empty()) {
    return w.translit;
  }
  return w.surface;
}

std::string clause_text(const Corpus& corpus, const ClauseAtom& clause,
                        ScriptMode script, std::optional<Monad> marked = {}) {
  std::string out;
  for (const Word& w : corpus.words_in(clause.span)) {
    if (!out.empty()) out += ' ';
    if (marked && w.monad == *marked) {
      out += '[' + display(w, script) + ']';
    } else {
      out += display(w, script);
    }
  }
  return out;
}

// Whether a word belongs to the learner-visible population of a kind.
bool kind_accepts(ExerciseKind kind, const Word& w) {
  switch (kind) {
    case ExerciseKind::verb_parsing:
      return w.pos == Pos::verb;
    case ExerciseKind::noun_parsing:
      return is_nominal(w.pos);
    default:
      return true;
  }
}

struct Candidate {
  std::string item;            // "m:12" or "l:MWT["
  const Word* word = nullptr;  // representative word
  const ClauseAtom* clause = nullptr;
};

std::vector<Candidate> candidates(const ExerciseSpec& spec,
                                  const Corpus& corpus) {
  std::function<bool(const Word&)> in_scope = [](const Word&) { return true; };
  if (const auto* v = std::get_if<VerseScope>(&spec.scope)) {
    for (const VerseRef* ref : {&v->from, &v->to}) {
      if (!corpus.has_verse(*ref)) {
        throw Error(ErrorCode::unknown_reference,
                    "verse " + ref->str() + " is not in the corpus");
      }
    }
    const auto lo = corpus.verse_key(v->from);
    const auto hi = corpus.verse_key(v->to);
    if (hi < lo) bad_spec("scope ends before it starts");
    in_scope = [&corpus, lo, hi](const Word& w) {
      const auto k = corpus.verse_key(w.verse);
      return lo <= k && k <= hi;
    };
  } else if (const auto* r = std::get_if<RankScope>(&spec.scope)) {
    in_scope = [&corpus, r](const Word& w) {
      const std::size_t rank = corpus.find_lexeme(w.lexeme_id)->rank;
      return r->lo <= rank && rank <= r->hi;
    };
  }

  std::vector<Candidate> out;
  std::set<std::string, std::less<>> seen;
  for (const Word& w : corpus.words()) {
    if (!kind_accepts(spec.kind, w) || !in_scope(w)) continue;
    if (!spec.verb_class_filter.empty() &&
        std::none_of(w.verb_class.begin(), w.verb_class.end(),
                     [&](const std::string& c) {
                       return spec.verb_class_filter.contains(c);
                     })) {
      continue;
    }
    if (spec.kind == ExerciseKind::vocabulary) {
      if (seen.insert(w.lexeme_id).second) {
        out.push_back({"l:" + w.lexeme_id, &w, nullptr});
      }
    } else if (spec.kind == ExerciseKind::clause_id_drill) {
      const ClauseAtom& clause = corpus.clause_of(w);
      if (seen.insert(clause.id).second) {
        out.push_back({"m:" + std::to_string(clause.span.first),
                       corpus.find_word(clause.span.first), &clause});
      }
    } else {
      out.push_back({"m:" + std::to_string(w.monad), &w, nullptr});
    }
  }
  if (spec.kind == ExerciseKind::vocabulary) {
    std::stable_sort(out.begin(), out.end(),
                     [&](const Candidate& a, const Candidate& b) {
                       return corpus.find_lexeme(a.word->lexeme_id)->rank <
                              corpus.find_lexeme(b.word->lexeme_id)->rank;
                     });
  }
  return out;
}

// Values of `field` attested anywhere in the corpus for the population the
// field belongs to.
std::set<std::string> attested_values(const Corpus& corpus, ExerciseKind kind,
                                      std::string_view field) {
  std::set<std::string> values;
  if (field == "gloss") {
    for (const auto& entry : corpus.lexicon()) values.insert(entry.gloss);
    return values;
  }
  if (field == "clause_label") {
    for (const auto& c : corpus.clauses()) values.insert(c.label.str());
    return values;
  }
  const Feature f = *parse_enum<Feature>(field);
  for (const Word& w : corpus.words()) {
    if (kind_accepts(kind, w)) values.insert(feature_value(corpus, w, f));
  }
  return values;
}

std::vector<std::string> make_options(const std::string& key,
                                      const std::set<std::string>& attested,
                                      std::size_t choices, SeededRandom& rng) {
  std::vector<std::string> pool;
  for (const auto& v : attested) {
    if (v != key) pool.push_back(v);
  }
  const std::size_t k = std::min(choices - 1, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  std::vector<std::string> options{key};
  options.insert(options.end(), pool.begin(), pool.begin() + k);
  for (std::size_t i = options.size(); i > 1; --i) {
    std::swap(options[i - 1], options[rng.below(i)]);
  }
  return options;
}

}  // namespace

ExerciseSpec ExerciseSpec::parse(std::string_view text) {
  ExerciseSpec spec;
  std::set<std::string> keys;
  std::optional<VerseRef> from, to;
  bool choices_given = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{}
                                         : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      bad_spec("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!keys.insert(key).second) bad_spec("key " + key + " given twice");

    if (key == "name") {
      spec.name = to_nfc(value);
    } else if (key == "kind") {
      auto kind = parse_enum<ExerciseKind>(value);
      if (!kind) bad_spec("unknown kind '" + std::string(value) + "'");
      spec.kind = *kind;
    } else if (key == "questions") {
      spec.question_count = parse_count(key, value);
    } else if (key == "choices") {
      spec.choices = parse_count(key, value);
      choices_given = true;
    } else if (key == "ranks") {
      const std::size_t dash = value.find('-');
      if (dash == std::string_view::npos) bad_spec("ranks must be lo-hi");
      spec.scope = RankScope{parse_count(key, trim(value.substr(0, dash))),
                             parse_count(key, trim(value.substr(dash + 1)))};
    } else if (key == "from") {
      from = parse_verse(key, value);
    } else if (key == "to") {
      to = parse_verse(key, value);
    } else if (key == "verb_class") {
      for (auto tag : split_list(value)) spec.verb_class_filter.emplace(tag);
    } else if (key == "asked") {
      for (auto name : split_list(value)) {
        auto f = parse_enum<Feature>(name);
        if (!f) bad_spec("unknown feature '" + std::string(name) + "'");
        spec.asked_features.push_back(*f);
      }
    } else if (key == "script") {
      auto mode = parse_enum<ScriptMode>(value);
      if (!mode) bad_spec("script must be source or transliteration");
      spec.script = *mode;
    } else {
      bad_spec("unknown key '" + key + "'");
    }
  }
  if (!keys.contains("name")) bad_spec("name is required");
  if (!keys.contains("kind")) bad_spec("kind is required");
  if (from.has_value() != to.has_value()) bad_spec("from and to go together");
  if (from) {
    if (keys.contains("ranks")) bad_spec("give either ranks or from/to");
    spec.scope = VerseScope{*from, *to};
  }
  if (!choices_given && spec.kind == ExerciseKind::typing) spec.choices = 0;
  spec.validate();
  return spec;
}

std::string ExerciseSpec::serialize() const {
  std::ostringstream out;
  out << "name=" << name << "\nkind=" << to_string(kind) << '\n';
  if (const auto* v = std::get_if<VerseScope>(&scope)) {
    out << "from=" << v->from.str() << "\nto=" << v->to.str() << '\n';
  } else if (const auto* r = std::get_if<RankScope>(&scope)) {
    out << "ranks=" << r->lo << '-' << r->hi << '\n';
  }
  out << "questions=" << question_count << "\nchoices=" << choices << '\n';
  if (!verb_class_filter.empty()) {
    out << "verb_class=";
    bool first = true;
    for (const auto& tag : verb_class_filter) {
      out << (first ? "" : ",") << tag;
      first = false;
    }
    out << '\n';
  }
  if (!asked_features.empty()) {
    out << "asked=";
    for (std::size_t i = 0; i < asked_features.size(); ++i) {
      out << (i ? "," : "") << to_string(asked_features[i]);
    }
    out << '\n';
  }
  out << "script=" << to_string(script) << '\n';
  return out.str();
}

std::vector<Feature> ExerciseSpec::effective_features() const {
  if (!asked_features.empty()) return asked_features;
  switch (kind) {
    case ExerciseKind::verb_parsing:
      return kVerbFeatures;
    case ExerciseKind::noun_parsing:
      return kNounFeatures;
    case ExerciseKind::pos_id:
      return {Feature::pos};
    case ExerciseKind::clause_id_drill:
      return {Feature::clause_label};
    default:
      return {};
  }
}

void ExerciseSpec::validate() const {
  if (name.empty()) bad_spec("name must not be empty");
  if (name.find_first_of("\t\n\r") != std::string::npos) {
    bad_spec("name must not contain tabs or line breaks");
  }
  if (question_count == 0) bad_spec("questions must be positive");
  if (choices == 1) bad_spec("choices must be 0 or at least 2");
  if (kind == ExerciseKind::typing && choices != 0) {
    bad_spec("typing answers are typed; choices must be 0");
  }
  if ((kind == ExerciseKind::vocabulary ||
       kind == ExerciseKind::translation_gloss) &&
      std::holds_alternative<std::monostate>(scope)) {
    bad_spec(std::string(to_string(kind)) + " needs a rank or verse scope");
  }
  if (const auto* r = std::get_if<RankScope>(&scope)) {
    if (r->lo == 0 || r->hi < r->lo) bad_spec("ranks must satisfy 1 <= lo <= hi");
  }
  std::set<Feature> unique(asked_features.begin(), asked_features.end());
  if (unique.size() != asked_features.size()) bad_spec("asked repeats a feature");
  auto allowed = [&](const std::vector<Feature>& set) {
    for (Feature f : asked_features) {
      if (std::find(set.begin(), set.end(), f) == set.end()) {
        bad_spec(std::string(to_string(f)) + " cannot be asked in " +
                 std::string(to_string(kind)));
      }
    }
  };
  switch (kind) {
    case ExerciseKind::verb_parsing:
      allowed(kVerbFeatures);
      break;
    case ExerciseKind::noun_parsing:
      allowed(kNounFeatures);
      break;
    case ExerciseKind::pos_id:
      allowed({Feature::pos});
      break;
    case ExerciseKind::clause_id_drill:
      allowed({Feature::clause_label});
      break;
    default:
      allowed({});
  }
}

std::string item_key(std::string_view question_id) {
  const std::size_t at = question_id.find('@');
  return std::string(at == std::string_view::npos ? question_id
                                                  : question_id.substr(at + 1));
}

ItemHistory build_history(
    const std::vector<std::pair<std::string, bool>>& answers) {
  ItemHistory history;
  std::map<std::string, std::size_t> last_miss;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const std::string key = item_key(answers[i].first);
    ItemStats& s = history[key];
    if (answers[i].second) {
      ++s.right;
    } else {
      ++s.wrong;
      last_miss[key] = i;
    }
  }
  for (const auto& [key, index] : last_miss) {
    history[key].items_since_last_error = answers.size() - 1 - index;
  }
  return history;
}

double adaptive_weight(const ItemStats* stats) {
  if (stats == nullptr || stats->right + stats->wrong == 0) return 1.5;
  double w = 1.0 + 2.0 * static_cast<double>(stats->wrong) /
                       static_cast<double>(stats->right + stats->wrong + 1);
  if (stats->items_since_last_error) {
    w += 1.0 / (1.0 + static_cast<double>(*stats->items_since_last_error));
  }
  return w;
}

Exercise generate(const ExerciseSpec& spec, const Corpus& corpus,
                  std::uint64_t seed, const ItemHistory* history) {
  spec.validate();
  const std::vector<Candidate> pool = candidates(spec, corpus);
  if (pool.empty()) {
    throw Error(ErrorCode::empty_scope,
                "no " + std::string(to_string(spec.kind)) +
                    " targets in the scope of '" + spec.name + "'");
  }

  // Weighted sampling without replacement: each candidate draws the key
  // log(u)/weight and the largest keys win.
  SeededRandom rng(seed);
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    double weight = 1.0;
    if (history != nullptr) {
      auto it = history->find(pool[i].item);
      weight = adaptive_weight(it == history->end() ? nullptr : &it->second);
    }
    keyed.emplace_back(std::log(rng.open_uniform()) / weight, i);
  }
  const std::size_t n = std::min(spec.question_count, pool.size());
  std::partial_sort(keyed.begin(), keyed.begin() + n, keyed.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first > b.first
                                                : a.second < b.second;
                    });

  const std::vector<Feature> features = spec.effective_features();
  std::map<std::string, std::set<std::string>, std::less<>> attested;
  auto attested_for = [&](const std::string& field)
      -> const std::set<std::string>& {
    auto it = attested.find(field);
    if (it == attested.end()) {
      it = attested.emplace(field, attested_values(corpus, spec.kind, field))
               .first;
    }
    return it->second;
  };

  Exercise exercise{spec, seed, {}};
  for (std::size_t q = 0; q < n; ++q) {
    const Candidate& c = pool[keyed[q].second];
    const Word& w = *c.word;
    Question question;
    question.id = std::to_string(q + 1) + "@" + c.item;
    question.context = w.verse.str();

    switch (spec.kind) {
      case ExerciseKind::vocabulary:
        question.prompt = display(w, spec.script);
        question.fields.push_back({"gloss", w.gloss, {}, true});
        break;
      case ExerciseKind::translation_gloss:
        question.prompt =
            clause_text(corpus, corpus.clause_of(w), spec.script, w.monad);
        question.fields.push_back({"gloss", w.gloss, {}, true});
        break;
      case ExerciseKind::typing:
        question.prompt = w.translit.empty() ? w.gloss : w.translit;
        question.fields.push_back({"surface", w.surface, {}, true});
        break;
      case ExerciseKind::clause_id_drill:
        question.prompt = clause_text(corpus, *c.clause, spec.script);
        question.fields.push_back({"clause_label", c.clause->label.str(), {}, false});
        break;
      default:
        question.prompt = display(w, spec.script);
        for (Feature f : features) {
          question.fields.push_back({std::string(to_string(f)),
                                     feature_value(corpus, w, f), {}, false});
        }
    }
    if (spec.choices >= 2) {
      for (AnswerField& field : question.fields) {
        field.options = make_options(field.expected, attested_for(field.name),
                                     spec.choices, rng);
      }
    }
    exercise.questions.push_back(std::move(question));
  }
  return exercise;
}

std::string render_exercise(const Exercise& exercise) {
  std::ostringstream out;
  out << "exercise\t" << exercise.spec.name << '\t' << exercise.seed << '\n';
  for (const Question& q : exercise.questions) {
    out << "question\t" << q.id << '\t' << q.prompt << '\t' << q.context
        << '\n';
    for (const AnswerField& f : q.fields) {
      out << "field\t" << f.name << '\t' << f.expected << '\t'
          << (f.text ? "text" : "feature") << '\t';
      for (std::size_t i = 0; i < f.options.size(); ++i) {
        out << (i ? "|" : "") << f.options[i];
      }
      out << '\n';
    }
  }
  return out.str();
}

Feedback check(const Question& question, const Submission& submission,
               double elapsed) {
  if (!(elapsed > 0) || !std::isfinite(elapsed)) {
    throw Error(ErrorCode::invalid_argument, "elapsed time must be positive");
  }
  bool shape_ok = submission.size() == question.fields.size();
  for (const AnswerField& f : question.fields) {
    shape_ok = shape_ok && submission.contains(f.name);
  }
  if (!shape_ok) {
    std::string names;
    for (const AnswerField& f : question.fields) {
      names += (names.empty() ? "" : ", ") + f.name;
    }
    throw Error(ErrorCode::shape_mismatch,
                "question " + question.id + " expects answers for: " + names);
  }

  Feedback feedback{true, {}, elapsed};
  for (const AnswerField& f : question.fields) {
    const std::string& raw = submission.find(f.name)->second;
    const bool ok = f.text ? normalize_answer(raw) == normalize_answer(f.expected)
                           : trim(raw) == f.expected;
    feedback.per_feature.push_back(
        {f.name, ok, f.expected, std::string(trim(raw))});
    feedback.overall = feedback.overall && ok;
  }
  return feedback;
}

Submission answer_key(const Question& question) {
  Submission s;
  for (const AnswerField& f : question.fields) s.emplace(f.name, f.expected);
  return s;
}

}  // namespace corpus_tutor
