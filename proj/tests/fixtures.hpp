#pragma once

// Shared test data: the shipped Joshua sample and seeded synthetic corpora.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpus_tutor/ingest.hpp"
#include "corpus_tutor/journey.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return CORPUS_TUTOR_DATA_DIR; }

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string sample_text() {
  return read_file(data_dir() / "joshua24.tsv");
}

inline corpus_tutor::TranslitTable hebrew_table() {
  return corpus_tutor::TranslitTable::parse(
      read_file(data_dir() / "hebrew_translit.tsv"));
}

inline corpus_tutor::Corpus load(const std::string& text) {
  auto result = corpus_tutor::parse_corpus(text);
  if (!result.corpus) {
    throw std::runtime_error("fixture corpus rejected:\n" +
                             corpus_tutor::format_report(result.report));
  }
  return std::move(*result.corpus);
}

inline const corpus_tutor::Corpus& sample() {
  static const corpus_tutor::Corpus corpus = load(sample_text());
  return corpus;
}

struct SyntheticLexeme {
  std::string id;
  std::string gloss;
  std::size_t count = 1;
  bool verb = false;
};

/// Builds a corpus in the interchange format whose lexeme token counts are
/// exactly the given ones. Tokens are shuffled with `seed`; verbs get random
/// stems, tenses and verb classes, other words random nominal features.
/// Verses hold 1-12 words; a verse splits into one or two clauses and each
/// clause into phrases of up to three words.
inline std::string synthetic_corpus(const std::vector<SyntheticLexeme>& lexemes,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
  };
  std::vector<const SyntheticLexeme*> tokens;
  for (const auto& lex : lexemes) {
    for (std::size_t i = 0; i < lex.count; ++i) tokens.push_back(&lex);
  }
  for (std::size_t i = tokens.size(); i > 1; --i) {
    std::swap(tokens[i - 1], tokens[pick(i)]);
  }

  static const char* stems[] = {"qal", "niphal", "piel", "hiphil", "hithpael"};
  static const char* tenses[] = {"qatal", "yiqtol", "wayyiqtol", "participle"};
  static const char* classes[] = {"strong", "hollow", "III-he", "I-nun",
                                  "I-guttural"};
  static const char* genders[] = {"m", "f"};
  static const char* numbers[] = {"sg", "pl", "dual"};
  static const char* states[] = {"absolute", "construct"};
  static const char* nominal_pos[] = {"noun", "adjective", "noun",
                                      "proper_noun"};

  std::ostringstream words, phrases, clauses, sentences;
  std::size_t monad = 1, chapter = 1, verse = 1;
  std::size_t phrase_no = 0, clause_no = 0, sentence_no = 0;
  std::size_t t = 0;
  while (t < tokens.size()) {
    const std::size_t verse_len = std::min(1 + pick(12), tokens.size() - t);
    const std::size_t split = verse_len >= 4 && pick(2) ? verse_len / 2 : verse_len;
    const std::size_t sentence_first = monad;
    ++sentence_no;
    for (std::size_t part = 0; part < 2; ++part) {
      const std::size_t len = part == 0 ? split : verse_len - split;
      if (len == 0) continue;
      ++clause_no;
      const std::size_t clause_first = monad;
      std::size_t left = len;
      while (left > 0) {
        const std::size_t plen = std::min(left, 1 + pick(3));
        ++phrase_no;
        const std::size_t phrase_first = monad;
        for (std::size_t k = 0; k < plen; ++k, ++t, ++monad) {
          const SyntheticLexeme& lex = *tokens[t];
          const std::string surface = "w" + lex.id;
          words << "W\t" << monad << "\tGenesis\t" << chapter << '\t' << verse
                << '\t' << surface << '\t' << surface << '\t' << lex.id << '\t'
                << lex.gloss << '\t';
          if (lex.verb) {
            std::set<std::string> tags{classes[pick(5)]};
            if (pick(3) == 0) tags.insert(classes[pick(5)]);
            std::string cls;
            for (const auto& tag : tags) cls += (cls.empty() ? "" : "+") + tag;
            words << "verb\t" << stems[pick(5)] << '\t' << tenses[pick(4)]
                  << '\t' << (1 + pick(3)) << '\t' << genders[pick(2)] << '\t'
                  << numbers[pick(2)] << "\t-\t" << cls;
          } else {
            words << nominal_pos[pick(4)] << "\t-\t-\t-\t" << genders[pick(2)]
                  << '\t' << numbers[pick(3)] << '\t' << states[pick(2)]
                  << "\t-";
          }
          words << "\tp" << phrase_no << '\n';
        }
        phrases << "P\tp" << phrase_no << "\tc" << clause_no << '\t'
                << phrase_first << '\t' << monad - 1 << "\tNP\tSubj\n";
        left -= plen;
      }
      clauses << "C\tc" << clause_no << "\ts" << sentence_no << '\t'
              << clause_first << '\t' << monad - 1 << '\t'
              << (part == 0 ? "Way0\t477" : "NmCl\t10") << "\t" << part
              << '\t' << (part == 0 ? "-" : "c" + std::to_string(clause_no - 1))
              << '\n';
    }
    sentences << "S\ts" << sentence_no << '\t' << sentence_first << '\t'
              << monad - 1 << '\n';
    if (++verse > 30) {
      verse = 1;
      ++chapter;
    }
  }
  return "#corpus v1 books=Genesis,Exodus\n" + words.str() + phrases.str() +
         clauses.str() + sentences.str();
}

/// `n` lexemes named L0000.. with pseudo-random counts in [1, 9] (plenty of
/// ties), roughly one in five a verb.
inline std::vector<SyntheticLexeme> numbered_lexemes(std::size_t n,
                                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SyntheticLexeme> out;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "L%04zu", i);
    out.push_back({id, "gloss" + std::to_string(i), 1 + rng() % 9,
                   rng() % 5 == 0});
  }
  return out;
}

/// Events for `users` users (u01, u02, ...) in sessions of 1-8 answers,
/// starting 2016-09-01 and advancing by up to a day per session. About one
/// session in three is graded. Answers take 0.5-30 s.
inline std::vector<corpus_tutor::PracticeEvent> random_events(
    std::size_t count, std::size_t users, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<corpus_tutor::PracticeEvent> out;
  corpus_tutor::Timestamp clock = 1472688000;  // 2016-09-01T00:00:00Z
  std::size_t session_no = 0;
  static const char* names[] = {"Vocabulary 281-300", "Verbs", "Test2A Part Of Speech",
                                "Test2B Nouns", "English"};
  while (out.size() < count) {
    char user[32];
    std::snprintf(user, sizeof user, "u%02zu", 1 + rng() % users);
    const std::string session = "ses-" + std::to_string(++session_no);
    const std::string exercise = names[rng() % 5];
    const auto mode = rng() % 3 == 0 ? corpus_tutor::FinishMode::grade_task
                                     : corpus_tutor::FinishMode::save_outcome;
    const std::size_t len = std::min<std::size_t>(1 + rng() % 8, count - out.size());
    clock += static_cast<corpus_tutor::Timestamp>(rng() % 86400);
    for (std::size_t i = 0; i < len; ++i) {
      corpus_tutor::PracticeEvent e;
      e.user_id = user;
      e.session_id = session;
      e.exercise_name = exercise;
      e.question_id = std::to_string(i + 1) + "@m:" + std::to_string(1 + rng() % 54);
      e.elapsed_ms = 500 + static_cast<std::int64_t>(rng() % 29500);
      e.started_at = clock;
      clock += e.elapsed_ms / 1000 + 1;
      e.correct = rng() % 4 != 0;
      e.per_feature = {{"stem", e.correct || rng() % 2}, {"tense", e.correct}};
      e.mode = mode;
      out.push_back(std::move(e));
    }
  }
  return out;
}

/// The six vocabulary sessions of the sample logbook, five answers each,
/// for `user`; session ids are ses-1..ses-6.
inline std::vector<corpus_tutor::PracticeEvent> logbook_events(
    const std::string& user) {
  const char* starts[] = {"2016-03-01T13:32:00Z", "2016-03-01T13:34:00Z",
                          "2016-03-01T13:35:00Z", "2016-03-01T13:36:00Z",
                          "2016-03-01T13:37:00Z", "2016-03-01T13:39:00Z"};
  const std::int64_t ms[] = {65000, 32000, 41000, 57000, 51000, 46000};
  const int wrong[] = {0, 1, 0, 1, 1, 0};
  std::vector<corpus_tutor::PracticeEvent> events;
  for (int s = 0; s < 6; ++s) {
    for (int q = 0; q < 5; ++q) {
      corpus_tutor::PracticeEvent e;
      e.user_id = user;
      e.session_id = "ses-" + std::to_string(s + 1);
      e.exercise_name = "Vocabulary 281-300.3et";
      e.question_id = std::to_string(q) + "@l:L" + std::to_string(281 + q);
      e.started_at = *corpus_tutor::parse_timestamp(starts[s]);
      e.elapsed_ms = ms[s] / 5;
      e.correct = q >= wrong[s];
      e.per_feature = {{"gloss", e.correct}};
      events.push_back(std::move(e));
    }
  }
  return events;
}

/// Exact export of logbook_events() as the learner's logbook.
inline const char* kLogbookExport =
    "Filename\tStart at\tDuration (min:sec)\tSeconds per right\tCorrect\t"
    "Wrong\tCorrect per minute\tAccuracy\tProficiency\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:39\t00:46\t9.2\t5\t0\t1.3\t5\t1.3\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:37\t00:51\t12.8\t4\t1\t0.94\t5\t0.75\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:36\t00:57\t14.3\t4\t1\t0.84\t5\t0.67\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:35\t00:41\t8.2\t5\t0\t1.46\t5\t1.46\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:34\t00:32\t8\t4\t1\t1.5\t5\t1.2\n"
    "Vocabulary 281-300.3et\t2016-03-01 13:32\t01:05\t13\t5\t0\t0.92\t5\t0.92\n";

}  // namespace fixtures
