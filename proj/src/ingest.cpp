#include "corpus_tutor/ingest.hpp"

#include <charconv>
#include <map>
#include <sstream>
#include <unordered_set>

#include "corpus_tutor/unicode.hpp"

namespace corpus_tutor {

namespace {

constexpr std::string_view kHeaderPrefix = "#corpus v1 books=";

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(line.substr(pos));
      return out;
    }
    out.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

// Collects the problems of one record; parsing continues past bad fields so
// every problem on the line is reported.
class LineParser {
 public:
  LineParser(std::size_t line, std::vector<Diagnostic>& errors)
      : line_(line), errors_(errors) {}

  bool failed() const { return failed_; }

  void error(std::string rule, std::string message) {
    errors_.push_back({line_, std::move(rule), std::move(message)});
    failed_ = true;
  }

  long integer(std::string_view field, std::string_view name, long min) {
    long value = 0;
    auto [p, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || p != field.data() + field.size() || value < min) {
      error("syntax", std::string(name) + " '" + std::string(field) +
                          "' is not an integer >= " + std::to_string(min));
      return min;
    }
    return value;
  }

  MonadRange span(std::string_view first, std::string_view last) {
    MonadRange r;
    r.first = static_cast<Monad>(integer(first, "first_monad", 1));
    r.last = static_cast<Monad>(integer(last, "last_monad", 1));
    if (r.last < r.first) {
      error("empty-span", "last_monad precedes first_monad");
    }
    return r;
  }

  std::string text(std::string_view field, std::string_view name) {
    if (!is_valid_utf8(field)) {
      error("encoding", std::string(name) + " is not valid UTF-8");
      return {};
    }
    return to_nfc(field);
  }

  std::string id(std::string_view field, std::string_view name) {
    if (field.empty() || field == "-") {
      error("syntax", std::string(name) + " must not be empty");
    }
    return text(field, name);
  }

  template <class E>
  E required_enum(std::string_view field, std::string_view name) {
    if (auto v = parse_enum<E>(field)) return *v;
    error("bad-value", "unknown " + std::string(name) + " '" +
                           std::string(field) + "'");
    return E{};
  }

  template <class E>
  std::optional<E> optional_enum(std::string_view field,
                                 std::string_view name) {
    if (field == "-") return std::nullopt;
    return required_enum<E>(field, name);
  }

 private:
  std::size_t line_;
  std::vector<Diagnostic>& errors_;
  bool failed_ = false;
};

std::string key_of(std::string_view kind, std::string_view id) {
  return std::string(kind) + '\x1f' + std::string(id);
}

template <class T>
std::string opt_field(const std::optional<T>& value) {
  if (!value) return "-";
  if constexpr (std::is_same_v<T, int>) {
    return std::to_string(*value);
  } else if constexpr (std::is_enum_v<T>) {
    return std::string(to_string(*value));
  } else {
    return value->str();
  }
}

}  // namespace

IngestResult parse_corpus(std::string_view contents,
                          const TranslitTable* table) {
  IngestResult result;
  IngestReport& report = result.report;
  CorpusData data;
  std::map<std::string, std::size_t> lines_of;  // object key -> line
  std::unordered_set<Monad> seen_monads;
  std::unordered_set<std::string> seen_ids[3];  // P, C, S
  bool header_ok = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line_no == 1) {
      if (!line.starts_with(kHeaderPrefix)) {
        report.errors.push_back(
            {1, "header", "first line must be '#corpus v1 books=<order>'"});
      } else {
        const auto books = split(line.substr(kHeaderPrefix.size()), ',');
        std::unordered_set<std::string> unique;
        header_ok = true;
        for (auto b : books) {
          if (b.empty() || !unique.insert(std::string(b)).second) {
            report.errors.push_back(
                {1, "header", "book order has an empty or repeated name"});
            header_ok = false;
            break;
          }
          data.book_order.push_back(to_nfc(b));
        }
      }
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    const auto f = split(line, '\t');
    LineParser p(line_no, report.errors);
    auto expect_fields = [&](std::size_t n) {
      if (f.size() != n) {
        p.error("syntax", "record " + std::string(f[0]) + " needs " +
                              std::to_string(n) + " fields, found " +
                              std::to_string(f.size()));
        return false;
      }
      return true;
    };

    if (f[0] == "W") {
      if (!expect_fields(18)) continue;
      Word w;
      w.monad = static_cast<Monad>(p.integer(f[1], "monad", 1));
      w.verse.book = p.text(f[2], "book");
      w.verse.chapter = static_cast<int>(p.integer(f[3], "chapter", 1));
      w.verse.verse = static_cast<int>(p.integer(f[4], "verse", 1));
      w.surface = p.text(f[5], "surface");
      w.translit = f[6] == "-" ? std::string() : p.text(f[6], "translit");
      w.lexeme_id = p.id(f[7], "lexeme_id");
      w.gloss = p.text(f[8], "gloss");
      w.pos = p.required_enum<Pos>(f[9], "pos");
      if (f[10] != "-") w.stem = Stem::parse(p.text(f[10], "stem"));
      w.tense = p.optional_enum<Tense>(f[11], "tense");
      if (f[12] != "-") {
        w.person = static_cast<int>(p.integer(f[12], "person", 1));
      }
      w.gender = p.optional_enum<Gender>(f[13], "gender");
      w.number = p.optional_enum<GrammaticalNumber>(f[14], "number");
      w.state = p.optional_enum<State>(f[15], "state");
      if (f[16] != "-") {
        for (auto tag : split(f[16], '+')) {
          if (tag.empty()) {
            p.error("syntax", "empty verb_class tag");
          } else {
            w.verb_class.insert(p.text(tag, "verb_class"));
          }
        }
      }
      w.phrase_id = p.id(f[17], "phrase_id");
      if (p.failed()) continue;
      if (!seen_monads.insert(w.monad).second) {
        p.error("duplicate-monad", "monad " + std::to_string(w.monad) +
                                       " already used on line " +
                                       std::to_string(lines_of[key_of(
                                           "word", std::to_string(w.monad))]));
        continue;
      }
      if (f[6] == "-" && table != nullptr && !w.surface.empty()) {
        auto t = transliterate(w.surface, *table);
        w.translit = std::move(t.text);
        if (!t.complete) {
          report.warnings.push_back(
              {line_no, "translit-incomplete",
               "some graphemes of '" + w.surface + "' have no table entry"});
        }
      }
      lines_of[key_of("word", std::to_string(w.monad))] = line_no;
      data.words.push_back(std::move(w));
    } else if (f[0] == "P") {
      if (!expect_fields(7)) continue;
      Phrase ph;
      ph.id = p.id(f[1], "phrase_id");
      ph.clause_id = p.id(f[2], "clause_id");
      ph.span = p.span(f[3], f[4]);
      ph.phrase_type = PhraseType::parse(p.text(f[5], "phrase_type"));
      ph.function = PhraseFunction::parse(p.text(f[6], "function"));
      if (p.failed()) continue;
      if (!seen_ids[0].insert(ph.id).second) {
        p.error("duplicate-id", "phrase id " + ph.id + " already defined");
        continue;
      }
      lines_of[key_of("phrase", ph.id)] = line_no;
      data.phrases.push_back(std::move(ph));
    } else if (f[0] == "C") {
      if (!expect_fields(9)) continue;
      ClauseAtom c;
      c.id = p.id(f[1], "clause_id");
      c.sentence_id = p.id(f[2], "sentence_id");
      c.span = p.span(f[3], f[4]);
      c.label = ClauseLabel::parse(p.text(f[5], "label"));
      c.ctc = p.text(f[6], "ctc");
      c.tab_depth = static_cast<int>(p.integer(f[7], "tab_depth", 0));
      if (f[8] != "-") c.mother_id = p.text(f[8], "mother_id");
      if (p.failed()) continue;
      if (!seen_ids[1].insert(c.id).second) {
        p.error("duplicate-id", "clause id " + c.id + " already defined");
        continue;
      }
      lines_of[key_of("clause", c.id)] = line_no;
      data.clauses.push_back(std::move(c));
    } else if (f[0] == "S") {
      if (!expect_fields(4)) continue;
      Sentence s;
      s.id = p.id(f[1], "sentence_id");
      s.span = p.span(f[2], f[3]);
      if (p.failed()) continue;
      if (!seen_ids[2].insert(s.id).second) {
        p.error("duplicate-id", "sentence id " + s.id + " already defined");
        continue;
      }
      lines_of[key_of("sentence", s.id)] = line_no;
      data.sentences.push_back(std::move(s));
    } else {
      p.error("syntax", "unknown record type '" + std::string(f[0]) + "'");
    }
  }
  if (line_no == 0) {
    report.errors.push_back(
        {1, "header", "first line must be '#corpus v1 books=<order>'"});
  }

  for (auto& issue : validate_corpus(data)) {
    if (!header_ok && issue.rule == "unknown-book") continue;
    auto it = lines_of.find(key_of(issue.object_kind, issue.object_id));
    report.errors.push_back({it == lines_of.end() ? 0 : it->second,
                             std::move(issue.rule), std::move(issue.message)});
  }
  std::stable_sort(report.errors.begin(), report.errors.end(),
                   [](const Diagnostic& a, const Diagnostic& b) {
                     return a.line < b.line;
                   });

  report.word_count = data.words.size();
  report.phrase_count = data.phrases.size();
  report.clause_count = data.clauses.size();
  report.sentence_count = data.sentences.size();
  if (report.ok()) result.corpus.emplace(std::move(data));
  return result;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::ostringstream out;
  out << kHeaderPrefix;
  for (std::size_t i = 0; i < corpus.book_order().size(); ++i) {
    out << (i ? "," : "") << corpus.book_order()[i];
  }
  out << '\n';
  for (const Word& w : corpus.words()) {
    std::string classes;
    for (const auto& c : w.verb_class) {
      classes += (classes.empty() ? "" : "+") + c;
    }
    out << "W\t" << w.monad << '\t' << w.verse.book << '\t' << w.verse.chapter
        << '\t' << w.verse.verse << '\t' << w.surface << '\t'
        << (w.translit.empty() ? "-" : w.translit) << '\t' << w.lexeme_id
        << '\t' << w.gloss << '\t' << to_string(w.pos) << '\t'
        << opt_field(w.stem) << '\t' << opt_field(w.tense) << '\t'
        << opt_field(w.person) << '\t' << opt_field(w.gender) << '\t'
        << opt_field(w.number) << '\t' << opt_field(w.state) << '\t'
        << (classes.empty() ? "-" : classes) << '\t' << w.phrase_id << '\n';
  }
  for (const Phrase& p : corpus.phrases()) {
    out << "P\t" << p.id << '\t' << p.clause_id << '\t' << p.span.first
        << '\t' << p.span.last << '\t' << p.phrase_type.str() << '\t'
        << p.function.str() << '\n';
  }
  for (const ClauseAtom& c : corpus.clauses()) {
    out << "C\t" << c.id << '\t' << c.sentence_id << '\t' << c.span.first
        << '\t' << c.span.last << '\t' << c.label.str() << '\t' << c.ctc
        << '\t' << c.tab_depth << '\t' << c.mother_id.value_or("-") << '\n';
  }
  for (const Sentence& s : corpus.sentences()) {
    out << "S\t" << s.id << '\t' << s.span.first << '\t' << s.span.last
        << '\n';
  }
  return out.str();
}

std::string format_report(const IngestReport& report) {
  std::ostringstream out;
  out << "counts\twords=" << report.word_count
      << "\tphrases=" << report.phrase_count
      << "\tclauses=" << report.clause_count
      << "\tsentences=" << report.sentence_count << '\n';
  for (const auto& d : report.errors) {
    out << "error\t" << d.line << '\t' << d.rule << '\t' << d.message << '\n';
  }
  for (const auto& d : report.warnings) {
    out << "warning\t" << d.line << '\t' << d.rule << '\t' << d.message
        << '\n';
  }
  return out.str();
}

}  // namespace corpus_tutor
