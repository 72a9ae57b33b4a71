#include "corpus_tutor/journey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <set>
#include <sstream>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/unicode.hpp"

namespace corpus_tutor {

namespace {

constexpr Timestamp kDay = 24 * 60 * 60;

std::string two_digits(std::int64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%02lld", static_cast<long long>(v));
  return buf;
}

std::string grade_or_dash(const std::string& g) { return g.empty() ? "-" : g; }

}  // namespace

std::string format_timestamp(Timestamp t) {
  const std::time_t tt = static_cast<std::time_t>(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char tail = 0;
  const std::string str(text);
  int n = 0;
  if (str.size() == 10) {
    if (std::sscanf(str.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &n) != 3 ||
        n != 10) {
      return std::nullopt;
    }
  } else if (str.size() == 20) {
    if (std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c%n", &y, &mo, &d,
                    &h, &mi, &s, &tail, &n) != 7 ||
        tail != 'Z' || n != 20) {
      return std::nullopt;
    }
  } else {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59 ||
      h < 0 || mi < 0 || s < 0) {
    return std::nullopt;
  }
  std::tm tm{};
  tm.tm_year = y - 1900;
  tm.tm_mon = mo - 1;
  tm.tm_mday = d;
  tm.tm_hour = h;
  tm.tm_min = mi;
  tm.tm_sec = s;
  const Timestamp t = timegm(&tm);
  // reject dates such as February 30 that timegm would roll over
  if (format_timestamp(t).substr(0, 10) != str.substr(0, 10)) return std::nullopt;
  return t;
}

void fill_derived(SessionSummary& s) {
  const double d = static_cast<double>(s.duration_ms) / 1000.0;
  const double c = static_cast<double>(s.correct);
  const double w = static_cast<double>(s.wrong);
  const double f = c / (c + w);
  s.seconds_per_right = s.correct > 0 ? std::optional<double>(d / c) : std::nullopt;
  s.correct_per_minute = f / (d / 60.0);
  s.accuracy = s.wrong > 0 ? (c + w) / w : c + w;
  s.proficiency = s.correct_per_minute * f;
}

SessionSummary session_stats(std::span<const PracticeEvent> events) {
  if (events.empty()) {
    throw Error(ErrorCode::empty_session, "a session needs at least one answer");
  }
  SessionSummary s;
  s.session_id = events.front().session_id;
  s.user_id = events.front().user_id;
  s.exercise_name = events.front().exercise_name;
  s.started_at = events.front().started_at;
  s.mode = events.front().mode;
  for (const PracticeEvent& e : events) {
    s.started_at = std::min(s.started_at, e.started_at);
    s.duration_ms += e.elapsed_ms;
    ++(e.correct ? s.correct : s.wrong);
  }
  fill_derived(s);
  return s;
}

std::string format_decimal(double value, int decimals) {
  if (!std::isfinite(value)) return "-";
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::abs(value) * scale;
  // the small relative nudge keeps values such as 1.005 (stored as
  // 1.00499999...) rounding up as written
  const double rounded = std::floor(scaled + 0.5 + scaled * 1e-12);
  const auto units = static_cast<std::int64_t>(rounded);
  const bool negative = value < 0 && units != 0;
  std::int64_t div = 1;
  for (int i = 0; i < decimals; ++i) div *= 10;
  const std::int64_t whole = units / div;
  const std::int64_t frac = units % div;
  std::string out = (negative ? "-" : "") + std::to_string(whole);
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, static_cast<std::size_t>(decimals) - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.' + digits;
  }
  return out;
}

std::string format_hms(std::int64_t ms) {
  const std::int64_t s = (ms + 500) / 1000;
  return two_digits(s / 3600) + ':' + two_digits(s / 60 % 60) + ':' +
         two_digits(s % 60);
}

std::string format_mmss(std::int64_t ms) {
  const std::int64_t s = (ms + 500) / 1000;
  return two_digits(s / 60) + ':' + two_digits(s % 60);
}

double percent(std::size_t correct, std::size_t wrong) {
  if (correct + wrong == 0) {
    throw Error(ErrorCode::no_answers, "no answers to grade");
  }
  return 100.0 * static_cast<double>(correct) /
         static_cast<double>(correct + wrong);
}

const GradeScale& GradeScale::standard() {
  static const GradeScale scale = parse(
      "A=93,A-=90,B+=87,B=83,B-=80,C+=77,C=73,C-=70,D+=67,D=63,D-=60,F=0");
  return scale;
}

GradeScale GradeScale::parse(std::string_view text) {
  GradeScale scale;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.rfind('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::invalid_argument,
                  "grade scale entries look like B+=87");
    }
    const std::string letter(trim(item.substr(0, eq)));
    const std::string number(trim(item.substr(eq + 1)));
    char* end = nullptr;
    const double min = std::strtod(number.c_str(), &end);
    if (number.empty() || *end != '\0' || !(min >= 0 && min <= 100)) {
      throw Error(ErrorCode::invalid_argument,
                  "grade threshold '" + number + "' is not in [0, 100]");
    }
    if (!scale.steps_.empty() && !(min < scale.steps_.back().second)) {
      throw Error(ErrorCode::invalid_argument,
                  "grade thresholds must strictly decrease");
    }
    if (scale.ladder_index(letter)) {
      throw Error(ErrorCode::invalid_argument, "grade " + letter + " repeats");
    }
    scale.steps_.emplace_back(letter, min);
  }
  if (scale.steps_.empty() || scale.steps_.back().second != 0) {
    throw Error(ErrorCode::invalid_argument,
                "the lowest grade must start at 0");
  }
  return scale;
}

const std::string& GradeScale::grade(double percentage) const {
  for (const auto& [letter, min] : steps_) {
    if (percentage >= min) return letter;
  }
  return steps_.back().first;
}

std::optional<std::size_t> GradeScale::ladder_index(std::string_view letter) const {
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (steps_[i].first == letter) return i;
  }
  return std::nullopt;
}

double event_points(const PracticeEvent& e, const PointsConfig& config) {
  if (!e.correct) return 0;
  return config.points_per_answer *
         std::min(config.cap, config.reference_seconds / e.elapsed_seconds());
}

std::vector<SessionSummary> logbook(std::span<const PracticeEvent> events,
                                    std::string_view user,
                                    const TimeRange& range) {
  std::map<std::string, std::vector<PracticeEvent>> by_session;
  for (const PracticeEvent& e : events) {
    if (e.user_id == user) by_session[e.session_id].push_back(e);
  }
  std::vector<SessionSummary> rows;
  for (const auto& [id, session] : by_session) {
    SessionSummary s = session_stats(session);
    if (range.contains(s.started_at)) rows.push_back(std::move(s));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SessionSummary& a, const SessionSummary& b) {
                     return a.started_at > b.started_at;
                   });
  return rows;
}

UserTotals user_totals(std::span<const PracticeEvent> events,
                       std::string_view user, const TimeRange& range,
                       const PointsConfig& config) {
  UserTotals t;
  t.user_id = std::string(user);
  for (const PracticeEvent& e : events) {
    if (e.user_id != user || !range.contains(e.started_at)) continue;
    t.total_points += event_points(e, config);
    t.total_time_ms += e.elapsed_ms;
    ++(e.correct ? t.correct : t.wrong);
  }
  return t;
}

bool meets_practice_requirement(const UserTotals& totals, double hours) {
  return static_cast<double>(totals.total_time_ms) >= hours * 3600.0 * 1000.0;
}

std::vector<RankRow> ranking_from_totals(std::vector<UserTotals> totals) {
  std::sort(totals.begin(), totals.end(),
            [](const UserTotals& a, const UserTotals& b) {
              if (a.total_points != b.total_points) {
                return a.total_points > b.total_points;
              }
              return a.user_id < b.user_id;
            });
  std::vector<RankRow> rows;
  for (const UserTotals& t : totals) {
    rows.push_back({rows.size() + 1, t.user_id, t.total_points, t.total_time_ms});
  }
  return rows;
}

std::vector<RankRow> ranking(std::span<const PracticeEvent> events,
                             const PointsConfig& config) {
  std::map<std::string, UserTotals> totals;
  for (const PracticeEvent& e : events) {
    UserTotals& t = totals[e.user_id];
    t.user_id = e.user_id;
    t.total_points += event_points(e, config);
    t.total_time_ms += e.elapsed_ms;
    ++(e.correct ? t.correct : t.wrong);
  }
  std::vector<UserTotals> list;
  for (auto& [user, t] : totals) list.push_back(std::move(t));
  return ranking_from_totals(std::move(list));
}

ClassReport class_report(std::span<const PracticeEvent> events,
                         std::vector<std::string> users,
                         std::vector<Timestamp> week_ends,
                         const GradeScale& scale) {
  for (std::size_t i = 1; i < week_ends.size(); ++i) {
    if (week_ends[i] <= week_ends[i - 1]) {
      throw Error(ErrorCode::invalid_argument,
                  "week boundaries must be strictly increasing");
    }
  }
  if (users.empty()) {
    std::set<std::string> all;
    for (const PracticeEvent& e : events) all.insert(e.user_id);
    users.assign(all.begin(), all.end());
  }
  ClassReport report;
  report.week_ends = week_ends;
  for (const std::string& user : users) {
    std::vector<ClassCell> cells;
    for (std::size_t k = 0; k < week_ends.size(); ++k) {
      const Timestamp cutoff = week_ends[k] + kDay;
      std::size_t c = 0, w = 0;
      ClassCell cell;
      for (const PracticeEvent& e : events) {
        if (e.user_id != user || e.started_at >= cutoff) continue;
        cell.cumulative_ms += e.elapsed_ms;
        if (e.mode == FinishMode::grade_task) ++(e.correct ? c : w);
      }
      if (c + w > 0) cell.grade = scale.grade(percent(c, w));
      if (k > 0 && !cell.grade.empty() && !cells.back().grade.empty()) {
        const auto now = scale.ladder_index(cell.grade);
        const auto before = scale.ladder_index(cells.back().grade);
        if (*now < *before) cell.trend = Trend::improved;
        if (*now > *before) cell.trend = Trend::worsened;
      }
      cells.push_back(std::move(cell));
    }
    report.rows.emplace_back(user, std::move(cells));
  }
  return report;
}

namespace {

std::vector<TaskRow> grouped(std::span<const PracticeEvent> events,
                             std::string_view user, bool graded_only,
                             std::string_view prefix, const GradeScale& scale) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const PracticeEvent& e : events) {
    if (e.user_id != user) continue;
    if (graded_only && e.mode != FinishMode::grade_task) continue;
    if (!e.exercise_name.starts_with(prefix)) continue;
    auto& [c, w] = counts[e.exercise_name];
    ++(e.correct ? c : w);
  }
  std::vector<TaskRow> rows;
  for (const auto& [task, cw] : counts) {
    const double p = percent(cw.first, cw.second);
    rows.push_back({task, cw.first + cw.second, p, scale.grade(p)});
  }
  return rows;
}

}  // namespace

std::vector<TaskRow> task_report(std::span<const PracticeEvent> events,
                                 std::string_view user,
                                 const GradeScale& scale) {
  return grouped(events, user, false, "", scale);
}

std::vector<TaskRow> test_report(std::span<const PracticeEvent> events,
                                 std::string_view user, std::string_view test_id,
                                 const GradeScale& scale) {
  return grouped(events, user, true, test_id, scale);
}

std::string render_logbook(const std::vector<SessionSummary>& rows) {
  std::ostringstream out;
  out << "Filename\tStart at\tDuration (min:sec)\tSeconds per right\tCorrect\t"
         "Wrong\tCorrect per minute\tAccuracy\tProficiency\n";
  for (const SessionSummary& s : rows) {
    // "2016-03-01T13:39:00Z" -> "2016-03-01 13:39"
    std::string start = format_timestamp(s.started_at).substr(0, 16);
    start[10] = ' ';
    out << s.exercise_name << '\t' << start << '\t' << format_mmss(s.duration_ms)
        << '\t'
        << (s.seconds_per_right ? format_decimal(*s.seconds_per_right, 1) : "-")
        << '\t' << s.correct << '\t' << s.wrong << '\t'
        << format_decimal(s.correct_per_minute, 2) << '\t'
        << format_decimal(s.accuracy, 2) << '\t'
        << format_decimal(s.proficiency, 2) << '\n';
  }
  return out.str();
}

std::string render_ranking(const std::vector<RankRow>& rows) {
  std::ostringstream out;
  out << "Rank\tUser\tTotal Point\tTime\n";
  for (const RankRow& r : rows) {
    out << r.rank << '\t' << r.user_id << '\t'
        << format_decimal(r.total_points, 2) << '\t'
        << format_hms(r.total_time_ms) << '\n';
  }
  return out.str();
}

std::string render_class(const ClassReport& report) {
  std::ostringstream out;
  out << "User";
  for (Timestamp t : report.week_ends) {
    out << '\t' << format_timestamp(t).substr(0, 10);
  }
  out << '\n';
  for (const auto& [user, cells] : report.rows) {
    out << user;
    for (const ClassCell& cell : cells) {
      std::string g = grade_or_dash(cell.grade);
      if (cell.trend == Trend::improved) g = '*' + g + '*';
      if (cell.trend == Trend::worsened) g = '_' + g + '_';
      out << '\t' << g << ' ' << format_hms(cell.cumulative_ms);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_tasks(const std::vector<TaskRow>& rows) {
  std::ostringstream out;
  for (const TaskRow& r : rows) {
    out << r.task << '\t' << r.answered << '\t'
        << format_decimal(r.percentage, 2) << '\t' << r.grade << '\n';
  }
  return out.str();
}

void Aggregator::add_event(const PracticeEvent& e) {
  ++events_;
  auto it = sessions_.find(e.session_id);
  if (it == sessions_.end()) {
    SessionSummary s;
    s.session_id = e.session_id;
    s.user_id = e.user_id;
    s.exercise_name = e.exercise_name;
    s.started_at = e.started_at;
    s.mode = e.mode;
    it = sessions_.emplace(e.session_id, std::move(s)).first;
  }
  SessionSummary& s = it->second;
  s.started_at = std::min(s.started_at, e.started_at);
  s.duration_ms += e.elapsed_ms;
  ++(e.correct ? s.correct : s.wrong);

  auto u = users_.find(e.user_id);
  if (u == users_.end()) {
    u = users_.emplace(e.user_id, UserTotals{e.user_id}).first;
  }
  u->second.total_points += event_points(e, config_);
  u->second.total_time_ms += e.elapsed_ms;
  ++(e.correct ? u->second.correct : u->second.wrong);
}

void Aggregator::finish_session(std::string_view session_id, FinishMode mode) {
  auto it = sessions_.find(session_id);
  if (it != sessions_.end()) it->second.mode = mode;
}

std::vector<SessionSummary> Aggregator::logbook(std::string_view user,
                                                const TimeRange& range) const {
  std::vector<SessionSummary> rows;
  for (const auto& [id, s] : sessions_) {
    if (s.user_id != user || !range.contains(s.started_at)) continue;
    SessionSummary row = s;
    fill_derived(row);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const SessionSummary& a, const SessionSummary& b) {
                     return a.started_at > b.started_at;
                   });
  return rows;
}

std::vector<UserTotals> Aggregator::totals() const {
  std::vector<UserTotals> out;
  for (const auto& [user, t] : users_) out.push_back(t);
  return out;
}

std::vector<RankRow> Aggregator::ranking() const {
  return ranking_from_totals(totals());
}

std::vector<TaskRow> Aggregator::task_report(std::string_view user,
                                             const GradeScale& scale) const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (const auto& [id, s] : sessions_) {
    if (s.user_id != user) continue;
    auto& [c, w] = counts[s.exercise_name];
    c += s.correct;
    w += s.wrong;
  }
  std::vector<TaskRow> rows;
  for (const auto& [task, cw] : counts) {
    const double p = percent(cw.first, cw.second);
    rows.push_back({task, cw.first + cw.second, p, scale.grade(p)});
  }
  return rows;
}

}  // namespace corpus_tutor
