#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "corpus_tutor/corpus.hpp"
#include "corpus_tutor/event_log.hpp"
#include "corpus_tutor/exercise.hpp"
#include "corpus_tutor/journey.hpp"

namespace corpus_tutor {

enum class Role { learner, facilitator };

template <>
struct EnumNames<Role> {
  static constexpr std::array<std::string_view, 2> names{"learner",
                                                         "facilitator"};
};

struct Principal {
  std::string user_id;
  Role role = Role::learner;
};

/// Bearer tokens and the principal each one stands for.
class TokenStore {
 public:
  /// `token<TAB>user_id<TAB>role` lines; blank lines and `#` comments are
  /// skipped. Throws parse_error.
  static TokenStore parse(std::string_view text);

  void add(std::string token, Principal principal);
  /// Throws invalid_token for an unknown token.
  const Principal& authenticate(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, Principal> tokens_;
};

struct ServiceConfig {
  PointsConfig points;
  GradeScale scale = GradeScale::standard();
  /// Wall clock for event start times.
  std::function<Timestamp()> now;
  /// Monotonic milliseconds, used to time answers when the client does not
  /// report an elapsed time.
  std::function<std::int64_t()> steady_ms;
};

struct SessionInfo {
  std::string session_id;
  std::string user_id;
  std::string exercise_name;
  std::uint64_t seed = 0;
  std::size_t question_count = 0;
};

/// A question as shown to the learner: the key is left out.
struct IssuedQuestion {
  Question question;
  std::size_t index = 0;
  std::size_t total = 0;
};

struct FinishResult {
  std::string session_id;
  FinishMode mode = FinishMode::save_outcome;
  /// The session's logbook row; empty when nothing was answered.
  std::optional<SessionSummary> summary;
};

/// Exercise lifecycle and statistics over one event log. Authorization is
/// checked against the principal passed to each call. Sessions live in
/// memory; answers and finishes are appended to the log before a call
/// returns.
class TutorService {
 public:
  TutorService(const Corpus& corpus, EventLog& log, ServiceConfig config = {});
  ~TutorService();

  TutorService(const TutorService&) = delete;
  TutorService& operator=(const TutorService&) = delete;

  /// Generates the exercise, weighting items by the caller's answer
  /// history. Throws invalid_spec or empty_scope.
  SessionInfo create_session(const Principal& who, const ExerciseSpec& spec,
                             std::uint64_t seed);
  /// The current question, issued again until it is answered; nullopt once
  /// all questions are answered.
  std::optional<IssuedQuestion> next(const Principal& who,
                                     std::string_view session_id);
  /// Checks the answer to the current question and logs it. `elapsed`
  /// overrides the measured time (seconds). Throws out_of_order when the
  /// question is not the one issued or the session is finished.
  Feedback answer(const Principal& who, std::string_view session_id,
                  std::string_view question_id, const Submission& submission,
                  std::optional<double> elapsed = std::nullopt);
  FinishResult finish(const Principal& who, std::string_view session_id,
                      FinishMode mode);

  /// Learners may only read their own logbook and task report.
  std::vector<SessionSummary> logbook(const Principal& who,
                                      std::string_view user,
                                      const TimeRange& range = {}) const;
  std::vector<RankRow> ranking(const Principal& who) const;
  /// Facilitators only.
  ClassReport class_report(const Principal& who,
                           std::vector<Timestamp> week_ends,
                           std::vector<std::string> users = {}) const;
  /// All exercises of `user`, or only graded answers to exercises whose name
  /// starts with `test_id` when one is given.
  std::vector<TaskRow> tasks(const Principal& who, std::string_view user,
                             std::optional<std::string> test_id = {}) const;

  const Corpus& corpus() const { return corpus_; }
  const ServiceConfig& config() const { return config_; }

 private:
  struct Session;

  std::shared_ptr<Session> find(const Principal& who,
                                std::string_view session_id) const;
  void require_self_or_facilitator(const Principal& who,
                                   std::string_view user) const;

  const Corpus& corpus_;
  EventLog& log_;
  ServiceConfig config_;

  mutable std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::atomic<std::uint64_t> next_session_{1};

  mutable std::mutex aggregate_mutex_;
  Aggregator aggregate_;
  std::size_t subscription_ = 0;
};

}  // namespace corpus_tutor
