#pragma once

// Learner statistics: session rows, totals, ranking, grades and the
// facilitator reports. Everything here is a pure function of event lists,
// except Aggregator, which maintains the same figures incrementally.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpus_tutor/enums.hpp"

namespace corpus_tutor {

enum class FinishMode { save_outcome, grade_task };

template <>
struct EnumNames<FinishMode> {
  static constexpr std::array<std::string_view, 2> names{"save_outcome",
                                                         "grade_task"};
};

/// Seconds since 1970-01-01T00:00:00Z.
using Timestamp = std::int64_t;

/// "2016-03-01T13:39:00Z".
std::string format_timestamp(Timestamp t);
/// Accepts "YYYY-MM-DDTHH:MM:SSZ" and a bare "YYYY-MM-DD" (midnight UTC).
std::optional<Timestamp> parse_timestamp(std::string_view text);

struct PracticeEvent {
  std::string user_id;
  std::string session_id;
  std::string exercise_name;
  std::string question_id;
  Timestamp started_at = 0;
  /// Whole milliseconds, so that sums are exact.
  std::int64_t elapsed_ms = 0;
  bool correct = false;
  std::vector<std::pair<std::string, bool>> per_feature;
  FinishMode mode = FinishMode::save_outcome;

  double elapsed_seconds() const { return static_cast<double>(elapsed_ms) / 1000.0; }
  friend bool operator==(const PracticeEvent&, const PracticeEvent&) = default;
};

struct SessionSummary {
  std::string session_id;
  std::string user_id;
  std::string exercise_name;
  Timestamp started_at = 0;
  std::int64_t duration_ms = 0;
  std::size_t correct = 0;
  std::size_t wrong = 0;
  FinishMode mode = FinishMode::save_outcome;
  std::optional<double> seconds_per_right;
  double correct_per_minute = 0;
  double accuracy = 0;
  double proficiency = 0;

  friend bool operator==(const SessionSummary&, const SessionSummary&) = default;
};

/// Derived columns of a session row from its raw inputs. With f = c/(c+w)
/// and d in seconds: seconds_per_right = d/c, correct_per_minute = f/(d/60),
/// accuracy = (c+w)/w (c+w when w = 0), proficiency = correct_per_minute * f.
void fill_derived(SessionSummary& s);

/// Summary of the events of one session. Throws empty_session.
SessionSummary session_stats(std::span<const PracticeEvent> events);

/// Half-up rounding to `decimals` places with trailing zeros removed:
/// 12.75 -> "12.8" (1 place), 1.5 -> "1.5", 8.0 -> "8".
std::string format_decimal(double value, int decimals);
/// "hh:mm:ss"; hours grow past 99 when needed.
std::string format_hms(std::int64_t ms);
/// "mm:ss" with minutes growing past 59.
std::string format_mmss(std::int64_t ms);

/// 100 * correct / (correct + wrong). Throws no_answers when both are 0.
double percent(std::size_t correct, std::size_t wrong);

class GradeScale {
 public:
  /// A 93, A- 90, B+ 87, B 83, B- 80, C+ 77, C 73, C- 70, D+ 67, D 63,
  /// D- 60, otherwise F.
  static const GradeScale& standard();
  /// "A=95,B=85,F=0": letter=minimum percentage pairs. The lowest threshold
  /// must be 0 and thresholds must strictly decrease. Throws invalid_argument.
  static GradeScale parse(std::string_view text);

  const std::string& grade(double percentage) const;
  /// Position on the ladder, 0 for the best grade; nullopt if unknown.
  std::optional<std::size_t> ladder_index(std::string_view letter) const;
  const std::vector<std::pair<std::string, double>>& thresholds() const {
    return steps_;
  }

 private:
  std::vector<std::pair<std::string, double>> steps_;
};

struct PointsConfig {
  double points_per_answer = 10;
  double reference_seconds = 10;
  double cap = 2;
};

/// points_per_answer * min(cap, reference_seconds / elapsed) for a correct
/// answer, 0 otherwise.
double event_points(const PracticeEvent& e, const PointsConfig& config);

/// Half-open time range on event start times.
struct TimeRange {
  std::optional<Timestamp> from;
  std::optional<Timestamp> to;
  bool contains(Timestamp t) const {
    return (!from || *from <= t) && (!to || t < *to);
  }
};

/// Session rows of `user` that start inside `range`, newest first. Events
/// must be in log order.
std::vector<SessionSummary> logbook(std::span<const PracticeEvent> events,
                                    std::string_view user,
                                    const TimeRange& range = {});

struct UserTotals {
  std::string user_id;
  double total_points = 0;
  std::int64_t total_time_ms = 0;
  std::size_t correct = 0;
  std::size_t wrong = 0;

  friend bool operator==(const UserTotals&, const UserTotals&) = default;
};

/// Totals over events of `user` inside `range`; points are summed in event
/// order.
UserTotals user_totals(std::span<const PracticeEvent> events,
                       std::string_view user, const TimeRange& range = {},
                       const PointsConfig& config = {});

/// Whether the practice-time requirement (100 hours by default) is met.
bool meets_practice_requirement(const UserTotals& totals, double hours = 100);

struct RankRow {
  std::size_t rank = 0;
  std::string user_id;
  double total_points = 0;
  std::int64_t total_time_ms = 0;
};

/// Every user by descending points, ties by ascending user id; ranks are
/// 1, 2, 3, ... without gaps or repeats.
std::vector<RankRow> ranking(std::span<const PracticeEvent> events,
                             const PointsConfig& config = {});
std::vector<RankRow> ranking_from_totals(std::vector<UserTotals> totals);

enum class Trend { steady, improved, worsened };

struct ClassCell {
  /// Empty when the user has no graded answers yet.
  std::string grade;
  std::int64_t cumulative_ms = 0;
  Trend trend = Trend::steady;
};

struct ClassReport {
  /// Last day of each week, midnight UTC.
  std::vector<Timestamp> week_ends;
  std::vector<std::pair<std::string, std::vector<ClassCell>>> rows;
};

/// Per user and week: grade over graded answers started before the end of
/// the week's last day, cumulative practice time over all answers up to the
/// same point, and the grade trend against the previous week. `users` empty
/// means every user in the events. Throws invalid_argument when week_ends
/// are not strictly increasing.
ClassReport class_report(std::span<const PracticeEvent> events,
                         std::vector<std::string> users,
                         std::vector<Timestamp> week_ends,
                         const GradeScale& scale = GradeScale::standard());

struct TaskRow {
  std::string task;
  std::size_t answered = 0;
  double percentage = 0;
  std::string grade;
};

/// Answers of `user` grouped by exercise name, all finishing modes.
std::vector<TaskRow> task_report(std::span<const PracticeEvent> events,
                                 std::string_view user,
                                 const GradeScale& scale = GradeScale::standard());
/// Graded answers of `user` to exercises whose name starts with `test_id`.
std::vector<TaskRow> test_report(std::span<const PracticeEvent> events,
                                 std::string_view user, std::string_view test_id,
                                 const GradeScale& scale = GradeScale::standard());

// Tab-separated exports.
std::string render_logbook(const std::vector<SessionSummary>& rows);
std::string render_ranking(const std::vector<RankRow>& rows);
std::string render_class(const ClassReport& report);
std::string render_tasks(const std::vector<TaskRow>& rows);

/// Keeps sessions and user totals up to date one event at a time. Fed the
/// same log in the same order, it yields exactly what the pure functions
/// compute from a snapshot.
class Aggregator {
 public:
  explicit Aggregator(PointsConfig config = {}) : config_(config) {}

  void add_event(const PracticeEvent& e);
  void finish_session(std::string_view session_id, FinishMode mode);

  std::vector<SessionSummary> logbook(std::string_view user,
                                      const TimeRange& range = {}) const;
  std::vector<UserTotals> totals() const;
  std::vector<RankRow> ranking() const;
  std::vector<TaskRow> task_report(
      std::string_view user,
      const GradeScale& scale = GradeScale::standard()) const;
  std::size_t event_count() const { return events_; }

 private:
  PointsConfig config_;
  std::map<std::string, SessionSummary, std::less<>> sessions_;
  std::map<std::string, UserTotals, std::less<>> users_;
  std::size_t events_ = 0;
};

}  // namespace corpus_tutor
