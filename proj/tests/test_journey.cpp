#include <algorithm>
#include <random>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/journey.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace corpus_tutor;

namespace {

SessionSummary raw(double seconds, std::size_t c, std::size_t w) {
  SessionSummary s;
  s.duration_ms = static_cast<std::int64_t>(seconds * 1000 + 0.5);
  s.correct = c;
  s.wrong = w;
  fill_derived(s);
  return s;
}

Timestamp at(const char* text) { return *parse_timestamp(text); }

PracticeEvent answer(std::string user, std::string session, std::string exercise,
                     const char* when, double seconds, bool correct,
                     FinishMode mode = FinishMode::save_outcome) {
  PracticeEvent e;
  e.user_id = std::move(user);
  e.session_id = std::move(session);
  e.exercise_name = std::move(exercise);
  e.question_id = "1@m:1";
  e.started_at = at(when);
  e.elapsed_ms = static_cast<std::int64_t>(seconds * 1000 + 0.5);
  e.correct = correct;
  e.mode = mode;
  return e;
}

}  // namespace

TEST_CASE("session rows of the vocabulary logbook") {
  struct Row {
    double d;
    std::size_t c, w;
    const char *spr, *cpm, *acc, *prof;
  };
  const Row rows[] = {{46, 5, 0, "9.2", "1.3", "5", "1.3"},
                      {51, 4, 1, "12.8", "0.94", "5", "0.75"},
                      {57, 4, 1, "14.3", "0.84", "5", "0.67"},
                      {41, 5, 0, "8.2", "1.46", "5", "1.46"},
                      {32, 4, 1, "8", "1.5", "5", "1.2"},
                      {65, 5, 0, "13", "0.92", "5", "0.92"}};
  for (const Row& r : rows) {
    CAPTURE(r.d);
    const SessionSummary s = raw(r.d, r.c, r.w);
    CHECK(format_decimal(*s.seconds_per_right, 1) == r.spr);
    CHECK(format_decimal(s.correct_per_minute, 2) == r.cpm);
    CHECK(format_decimal(s.accuracy, 2) == r.acc);
    CHECK(format_decimal(s.proficiency, 2) == r.prof);
  }
  CHECK(*raw(51, 4, 1).seconds_per_right == 12.75);
}

TEST_CASE("progress rows recomputed from seconds-per-right") {
  // seconds per right, right, wrong, right per minute, accuracy, proficiency
  struct Row {
    double spr;
    std::size_t c, w;
    const char *cpm, *acc, *prof;
  };
  const Row rows[] = {
      {6.4, 212, 28, "0.04", "8.57", "0.03"},  {9.2, 141, 27, "0.04", "6.22", "0.03"},
      {9.4, 159, 33, "0.03", "5.82", "0.03"},  {10.1, 145, 59, "0.03", "3.46", "0.02"},
      {10.6, 136, 44, "0.03", "4.09", "0.02"}, {10.8, 150, 36, "0.03", "5.17", "0.02"},
      {12.3, 128, 70, "0.02", "2.83", "0.02"}, {12.4, 137, 37, "0.03", "4.7", "0.02"},
      {14.2, 124, 26, "0.03", "5.77", "0.02"}, {14.7, 110, 40, "0.03", "3.75", "0.02"},
      {30.6, 58, 32, "0.02", "2.81", "0.01"},
  };
  for (const Row& r : rows) {
    CAPTURE(r.c);
    const SessionSummary s = raw(r.spr * static_cast<double>(r.c), r.c, r.w);
    CHECK(format_decimal(*s.seconds_per_right, 1) == format_decimal(r.spr, 1));
    CHECK(format_decimal(s.correct_per_minute, 2) == r.cpm);
    CHECK(format_decimal(s.accuracy, 2) == r.acc);
    CHECK(format_decimal(s.proficiency, 2) == r.prof);
  }
}

TEST_CASE("derived column properties") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t c = rng() % 50, w = rng() % 50;
    if (c + w == 0) continue;
    const SessionSummary s = raw(1 + static_cast<double>(rng() % 100000) / 10, c, w);
    CHECK(s.proficiency <= s.correct_per_minute);
    CHECK((s.proficiency == s.correct_per_minute) == (w == 0 || c == 0));
    if (w > 0) CHECK(s.accuracy >= 1);
    if (w == 0) CHECK(s.accuracy == static_cast<double>(c));
    CHECK(s.seconds_per_right.has_value() == (c > 0));
  }
}

TEST_CASE("session_stats") {
  const std::vector<PracticeEvent> events{
      answer("u1", "s", "V", "2016-03-01T13:39:10Z", 10, true),
      answer("u1", "s", "V", "2016-03-01T13:39:00Z", 20.5, false),
      answer("u1", "s", "V", "2016-03-01T13:39:31Z", 20.5, true)};
  const SessionSummary s = session_stats(events);
  CHECK(s.started_at == at("2016-03-01T13:39:00Z"));
  CHECK(s.duration_ms == 51000);
  CHECK(s.correct == 2);
  CHECK(s.wrong == 1);
  CHECK(format_decimal(*s.seconds_per_right, 1) == "25.5");
  try {
    session_stats({});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_session);
  }
}

TEST_CASE("display formats") {
  CHECK(format_decimal(12.75, 1) == "12.8");
  CHECK(format_decimal(8.0, 1) == "8");
  CHECK(format_decimal(1.005, 2) == "1.01");
  CHECK(format_decimal(0.125, 2) == "0.13");
  CHECK(format_decimal(0.004, 2) == "0");
  CHECK(format_decimal(3420.65, 2) == "3420.65");
  CHECK(format_hms(41000) == "00:00:41");
  CHECK(format_hms((100 * 3600 + 18 * 60 + 45) * 1000LL) == "100:18:45");
  CHECK(format_hms(499) == "00:00:00");
  CHECK(format_mmss(65000) == "01:05");
  CHECK(format_mmss(46000) == "00:46");
  CHECK(format_timestamp(at("2016-03-01T13:39:00Z")) == "2016-03-01T13:39:00Z");
  CHECK(at("2016-09-05") == at("2016-09-05T00:00:00Z"));
  CHECK_FALSE(parse_timestamp("2016-02-30"));
  CHECK_FALSE(parse_timestamp("2016-9-5"));
  CHECK_FALSE(parse_timestamp("2016-09-05T25:00:00Z"));
}

TEST_CASE("percent and grades") {
  CHECK(percent(5, 0) == 100);
  CHECK(percent(1, 1) == 50);
  CHECK(percent(88, 12) == 88.0);
  try {
    percent(0, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_answers);
  }

  const GradeScale& g = GradeScale::standard();
  CHECK(g.grade(93.75) == "A");
  CHECK(g.grade(88.57) == "B+");
  CHECK(g.grade(81.14) == "B-");
  CHECK(g.grade(68.18) == "D+");
  CHECK(g.grade(35.71) == "F");
  CHECK(g.grade(80) == "B-");
  CHECK(g.grade(91.67) == "A-");
  CHECK(g.grade(100) == "A");
  CHECK(g.grade(0) == "F");
  CHECK(g.grade(59.999) == "F");

  // the table rows reproduce from integer counts
  CHECK(format_decimal(percent(62, 8), 2) == "88.57");
  CHECK(format_decimal(percent(15, 7), 2) == "68.18");
  CHECK(format_decimal(percent(45, 3), 2) == "93.75");
  CHECK(format_decimal(percent(66, 6), 2) == "91.67");
  CHECK(format_decimal(percent(20, 36), 2) == "35.71");

  SUBCASE("monotone on the ladder") {
    std::optional<std::size_t> previous;
    for (int i = 0; i <= 10000; ++i) {
      const auto idx = g.ladder_index(g.grade(i / 100.0));
      REQUIRE(idx);
      if (previous) CHECK(*idx <= *previous);
      previous = idx;
    }
  }

  SUBCASE("custom scales") {
    const GradeScale pf = GradeScale::parse("pass=50, fail=0");
    CHECK(pf.grade(50) == "pass");
    CHECK(pf.grade(49.9) == "fail");
    for (const char* bad : {"A=90", "A=90,B=95,F=0", "A=x,F=0", "A=90,A=80,F=0", ""}) {
      CAPTURE(bad);
      CHECK_THROWS_AS(GradeScale::parse(bad), Error);
    }
  }
}

TEST_CASE("points and totals") {
  PointsConfig config;
  auto one = [&](double seconds, bool correct) {
    return event_points(answer("u", "s", "x", "2016-01-01", seconds, correct), config);
  };
  CHECK(one(10, true) == 10);
  CHECK(one(2, true) == 20);
  CHECK(one(5, true) == 20);
  CHECK(one(20, true) == 5);
  CHECK(one(2, false) == 0);

  std::vector<PracticeEvent> events;
  for (int i = 0; i < 5; ++i) {
    events.push_back(answer("u1", "s", "x", "2016-03-01T13:35:00Z", 8.2, true));
  }
  events.push_back(answer("u2", "t", "x", "2016-03-02T10:00:00Z", 3, false));
  const UserTotals t = user_totals(events, "u1");
  CHECK(format_hms(t.total_time_ms) == "00:00:41");
  CHECK(t.correct == 5);
  CHECK(t.total_points == doctest::Approx(5 * 10 * 10 / 8.2));
  CHECK(user_totals(events, "u1", {at("2016-03-02"), std::nullopt}).correct == 0);
  CHECK_FALSE(meets_practice_requirement(t));
  UserTotals long_haul{"u9", 0, 100LL * 3600 * 1000, 0, 0};
  CHECK(meets_practice_requirement(long_haul));
  long_haul.total_time_ms -= 1;
  CHECK_FALSE(meets_practice_requirement(long_haul));
}

TEST_CASE("ranking") {
  std::vector<PracticeEvent> events;
  for (int i = 0; i < 10; ++i) events.push_back(answer("u1", "a", "x", "2016-01-01", 10, true));
  for (int i = 0; i < 5; ++i) events.push_back(answer("u2", "b", "x", "2016-01-01", 10, true));
  auto rows = ranking(events);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].user_id == "u1");
  CHECK(rows[0].rank == 1);
  CHECK(rows[0].total_points == 100);
  CHECK(rows[1].user_id == "u2");
  CHECK(rows[1].rank == 2);

  events.push_back(answer("u0", "c", "x", "2016-01-01", 10, true));
  for (int i = 0; i < 4; ++i) events.push_back(answer("u0", "c", "x", "2016-01-01", 10, true));
  rows = ranking(events);
  CHECK(rows[1].user_id == "u0");  // ties with u2 on 50, smaller id first
  CHECK(rows[2].user_id == "u2");
  CHECK(rows[2].rank == 3);
  CHECK(render_ranking(rows) ==
        "Rank\tUser\tTotal Point\tTime\n"
        "1\tu1\t100\t00:01:40\n"
        "2\tu0\t50\t00:00:50\n"
        "3\tu2\t50\t00:00:50\n");

  SUBCASE("independent of input order") {
    auto sample = fixtures::random_events(400, 12, 3);
    // points are summed per user in log order, so shuffle whole users'
    // blocks by stable-sorting on a permuted user order
    const std::string reference = render_ranking(ranking(sample));
    std::mt19937_64 rng(8);
    for (int round = 0; round < 10; ++round) {
      std::vector<std::string> order;
      for (const auto& e : sample) {
        if (std::find(order.begin(), order.end(), e.user_id) == order.end()) {
          order.push_back(e.user_id);
        }
      }
      std::shuffle(order.begin(), order.end(), rng);
      auto permuted = sample;
      std::stable_sort(permuted.begin(), permuted.end(), [&](const auto& a, const auto& b) {
        return std::find(order.begin(), order.end(), a.user_id) <
               std::find(order.begin(), order.end(), b.user_id);
      });
      CHECK(render_ranking(ranking(permuted)) == reference);
    }
  }
}

TEST_CASE("logbook") {
  std::vector<PracticeEvent> events;
  const char* starts[] = {"2016-03-01T13:32:00Z", "2016-03-01T13:34:00Z",
                          "2016-03-01T13:35:00Z", "2016-03-01T13:36:00Z",
                          "2016-03-01T13:37:00Z", "2016-03-01T13:39:00Z"};
  const double seconds[] = {65, 32, 41, 57, 51, 46};
  const int wrong[] = {0, 1, 0, 1, 1, 0};
  for (int s = 0; s < 6; ++s) {
    for (int q = 0; q < 5; ++q) {
      events.push_back(answer("u1", "ses-" + std::to_string(s),
                              "Vocabulary 281-300.3et", starts[s], seconds[s] / 5,
                              q >= wrong[s]));
    }
  }
  events.push_back(answer("u2", "other", "Verbs", "2016-03-01T13:33:00Z", 3, true));

  const auto rows = logbook(events, "u1");
  REQUIRE(rows.size() == 6);
  CHECK(render_logbook(rows) ==
        "Filename\tStart at\tDuration (min:sec)\tSeconds per right\tCorrect\t"
        "Wrong\tCorrect per minute\tAccuracy\tProficiency\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:39\t00:46\t9.2\t5\t0\t1.3\t5\t1.3\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:37\t00:51\t12.8\t4\t1\t0.94\t5\t0.75\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:36\t00:57\t14.3\t4\t1\t0.84\t5\t0.67\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:35\t00:41\t8.2\t5\t0\t1.46\t5\t1.46\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:34\t00:32\t8\t4\t1\t1.5\t5\t1.2\n"
        "Vocabulary 281-300.3et\t2016-03-01 13:32\t01:05\t13\t5\t0\t0.92\t5\t0.92\n");

  CHECK(logbook(events, "u1", {at("2016-03-02"), std::nullopt}).empty());
  CHECK(logbook(events, "nobody").empty());
  const auto middle =
      logbook(events, "u1", {at("2016-03-01T13:35:00Z"), at("2016-03-01T13:37:00Z")});
  REQUIRE(middle.size() == 2);
  CHECK(middle[0].started_at == at("2016-03-01T13:36:00Z"));

  SUBCASE("range filter matches a linear scan") {
    const auto sample = fixtures::random_events(600, 3, 21);
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
      const Timestamp a = sample.front().started_at +
                          static_cast<Timestamp>(rng() % (40LL * 86400));
      const TimeRange range{a, a + static_cast<Timestamp>(rng() % (20LL * 86400))};
      const auto rows = logbook(sample, "u02", range);
      std::set<std::string> expected;
      for (const auto& s : logbook(sample, "u02")) {
        if (range.contains(s.started_at)) expected.insert(s.session_id);
      }
      std::set<std::string> got;
      for (const auto& r : rows) got.insert(r.session_id);
      CHECK(got == expected);
      CHECK(std::is_sorted(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
        return x.started_at > y.started_at;
      }));
    }
  }
}

TEST_CASE("class report") {
  const auto g = FinishMode::grade_task;
  std::vector<PracticeEvent> events;
  // week 1: 80% (B-); week 2 adds nothing graded (B- steady);
  // week 3 pushes to 85% (B, improved); week 4 drops to 75% (C, worsened)
  for (int i = 0; i < 10; ++i) {
    events.push_back(answer("u1", "a", "T", "2016-09-05T10:00:00Z", 60, i < 8, g));
  }
  events.push_back(answer("u1", "b", "T", "2016-09-12T10:00:00Z", 600, false));
  for (int i = 0; i < 10; ++i) {
    events.push_back(answer("u1", "c", "T", "2016-09-19T10:00:00Z", 60, i < 9, g));
  }
  for (int i = 0; i < 20; ++i) {
    events.push_back(answer("u1", "d", "T", "2016-09-26T23:59:59Z", 60, i < 13, g));
  }
  events.push_back(answer("u2", "e", "T", "2016-09-27T00:00:00Z", 60, true, g));
  const std::vector<Timestamp> weeks{at("2016-09-05"), at("2016-09-12"),
                                     at("2016-09-19"), at("2016-09-26")};
  const ClassReport report = class_report(events, {}, weeks);
  REQUIRE(report.rows.size() == 2);
  const auto& cells = report.rows[0].second;
  CHECK(cells[0].grade == "B-");
  CHECK(cells[1].grade == "B-");
  CHECK(cells[1].trend == Trend::steady);
  CHECK(cells[2].grade == "B");
  CHECK(cells[2].trend == Trend::improved);
  CHECK(cells[3].grade == "C");
  CHECK(cells[3].trend == Trend::worsened);
  CHECK(render_class(report) ==
        "User\t2016-09-05\t2016-09-12\t2016-09-19\t2016-09-26\n"
        "u1\tB- 00:10:00\tB- 00:20:00\t*B* 00:30:00\t_C_ 00:50:00\n"
        "u2\t- 00:00:00\t- 00:00:00\t- 00:00:00\t- 00:00:00\n");

  CHECK_THROWS_AS(class_report(events, {}, {weeks[1], weeks[0]}), Error);

  SUBCASE("cumulative time never decreases") {
    const auto sample = fixtures::random_events(2000, 6, 17);
    std::vector<Timestamp> ends;
    for (int k = 0; k < 12; ++k) ends.push_back(at("2016-09-04") + k * 7 * 86400);
    for (const auto& [user, row] : class_report(sample, {}, ends).rows) {
      for (std::size_t k = 1; k < row.size(); ++k) {
        CHECK(row[k - 1].cumulative_ms <= row[k].cumulative_ms);
      }
    }
  }
}

TEST_CASE("task and test reports") {
  std::vector<PracticeEvent> events;
  auto add = [&](const std::string& task, int right, int wrong, FinishMode mode) {
    for (int i = 0; i < right + wrong; ++i) {
      events.push_back(answer("s3", task + std::to_string(i / 5), task,
                              "2016-10-01T09:00:00Z", 5, i < right, mode));
    }
  };
  const auto save = FinishMode::save_outcome;
  const auto graded = FinishMode::grade_task;
  add("English", 2724, 633, save);
  add("Verb_class", 20, 36, save);
  add("Test2A Part Of Speech-5 Questions", 62, 8, graded);
  add("Test2B Nouns-10 Questions", 45, 3, graded);
  add("Test2C RegularVerb-10 Questions", 40, 10, graded);
  add("Test2D Irregular Verb-10 Questions", 66, 6, graded);
  add("Test2E Translation-5 Questions", 15, 7, graded);
  add("Test2E Translation-5 Questions", 1, 1, save);  // practice, not graded

  const auto tasks = task_report(events, "s3");
  CHECK(render_tasks({tasks[0], tasks.back()}) ==
        "English\t3357\t81.14\tB-\n"
        "Verb_class\t56\t35.71\tF\n");

  CHECK(render_tasks(test_report(events, "s3", "Test2")) ==
        "Test2A Part Of Speech-5 Questions\t70\t88.57\tB+\n"
        "Test2B Nouns-10 Questions\t48\t93.75\tA\n"
        "Test2C RegularVerb-10 Questions\t50\t80\tB-\n"
        "Test2D Irregular Verb-10 Questions\t72\t91.67\tA-\n"
        "Test2E Translation-5 Questions\t22\t68.18\tD+\n");
  CHECK(test_report(events, "someone", "Test2").empty());
}

TEST_CASE("incremental aggregates match recomputation") {
  const auto events = fixtures::random_events(3000, 9, 77);
  Aggregator agg;
  std::string last_session;
  for (const auto& e : events) {
    PracticeEvent provisional = e;
    provisional.mode = FinishMode::save_outcome;
    agg.add_event(provisional);
  }
  for (const auto& e : events) {
    if (e.session_id != last_session) agg.finish_session(e.session_id, e.mode);
    last_session = e.session_id;
  }
  CHECK(agg.event_count() == events.size());
  CHECK(render_ranking(agg.ranking()) == render_ranking(ranking(events)));
  for (const auto& t : agg.totals()) {
    CHECK(t == user_totals(events, t.user_id));
    CHECK(agg.logbook(t.user_id) == logbook(events, t.user_id));
    CHECK(render_tasks(agg.task_report(t.user_id)) ==
          render_tasks(task_report(events, t.user_id)));
  }
}
