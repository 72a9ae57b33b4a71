#include "corpus_tutor/service.hpp"

#include <chrono>
#include <cmath>
#include <ctime>

#include "corpus_tutor/error.hpp"

namespace corpus_tutor {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

// Number N of a session id "ses-N", 0 for any other id.
std::uint64_t session_number(std::string_view id) {
  constexpr std::string_view prefix = "ses-";
  if (id.substr(0, prefix.size()) != prefix || id.size() == prefix.size()) return 0;
  std::uint64_t n = 0;
  for (char c : id.substr(prefix.size())) {
    if (c < '0' || c > '9') return 0;
    n = n * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return n;
}

}  // namespace

TokenStore TokenStore::parse(std::string_view text) {
  TokenStore store;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_tabs(line);
    const auto role = fields.size() == 3 ? parse_enum<Role>(fields[2]) : std::nullopt;
    if (!role || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorCode::parse_error,
                  "token file line " + std::to_string(line_no) +
                      ": expected token, user and learner|facilitator");
    }
    store.add(std::string(fields[0]), Principal{std::string(fields[1]), *role});
  }
  return store;
}

void TokenStore::add(std::string token, Principal principal) {
  tokens_.insert_or_assign(std::move(token), std::move(principal));
}

const Principal& TokenStore::authenticate(std::string_view token) const {
  auto it = tokens_.find(std::string(token));
  if (it == tokens_.end()) throw Error(ErrorCode::invalid_token, "unknown token");
  return it->second;
}

struct TutorService::Session {
  std::mutex mutex;
  SessionInfo info;
  Exercise exercise;
  std::size_t cursor = 0;
  bool issued = false;
  Timestamp issued_at = 0;
  std::int64_t issued_steady_ms = 0;
  bool finished = false;
};

TutorService::TutorService(const Corpus& corpus, EventLog& log,
                           ServiceConfig config)
    : corpus_(corpus), log_(log), config_(std::move(config)),
      aggregate_(config_.points) {
  if (!config_.now) {
    config_.now = [] { return static_cast<Timestamp>(std::time(nullptr)); };
  }
  if (!config_.steady_ms) {
    config_.steady_ms = [] {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now().time_since_epoch())
          .count();
    };
  }
  // Replays the log, so session numbering resumes after the highest id seen.
  subscription_ = log_.subscribe([this](const LogEntry& entry) {
    std::string_view session_id;
    {
      std::lock_guard lock(aggregate_mutex_);
      if (const auto* r = std::get_if<EventRecord>(&entry)) {
        aggregate_.add_event(r->event);
        session_id = r->event.session_id;
      } else {
        const auto& f = std::get<FinishRecord>(entry);
        aggregate_.finish_session(f.session_id, f.mode);
        session_id = f.session_id;
      }
    }
    const std::uint64_t after = session_number(session_id) + 1;
    std::uint64_t current = next_session_.load();
    while (current < after && !next_session_.compare_exchange_weak(current, after)) {
    }
  });
}

TutorService::~TutorService() { log_.unsubscribe(subscription_); }

SessionInfo TutorService::create_session(const Principal& who,
                                         const ExerciseSpec& spec,
                                         std::uint64_t seed) {
  LogFilter mine;
  mine.user = who.user_id;
  std::vector<std::pair<std::string, bool>> answers;
  for (const EventRecord& r : log_.snapshot(mine).events) {
    answers.emplace_back(r.event.question_id, r.event.correct);
  }
  const ItemHistory history = build_history(answers);

  auto session = std::make_shared<Session>();
  session->exercise = generate(spec, corpus_, seed, &history);
  session->info.session_id = "ses-" + std::to_string(next_session_++);
  session->info.user_id = who.user_id;
  session->info.exercise_name = spec.name;
  session->info.seed = seed;
  session->info.question_count = session->exercise.questions.size();

  std::unique_lock lock(sessions_mutex_);
  sessions_.emplace(session->info.session_id, session);
  return session->info;
}

std::shared_ptr<TutorService::Session> TutorService::find(
    const Principal& who, std::string_view session_id) const {
  std::shared_ptr<Session> session;
  {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(std::string(session_id));
    if (it == sessions_.end()) {
      throw Error(ErrorCode::unknown_session,
                  "no session " + std::string(session_id));
    }
    session = it->second;
  }
  if (session->info.user_id != who.user_id) {
    throw Error(ErrorCode::forbidden, "session belongs to another user");
  }
  return session;
}

std::optional<IssuedQuestion> TutorService::next(const Principal& who,
                                                 std::string_view session_id) {
  auto session = find(who, session_id);
  std::lock_guard lock(session->mutex);
  if (session->finished) {
    throw Error(ErrorCode::out_of_order, "session is finished");
  }
  const auto& questions = session->exercise.questions;
  if (session->cursor >= questions.size()) return std::nullopt;
  if (!session->issued) {
    session->issued = true;
    session->issued_at = config_.now();
    session->issued_steady_ms = config_.steady_ms();
  }
  IssuedQuestion out{questions[session->cursor], session->cursor,
                     questions.size()};
  for (AnswerField& f : out.question.fields) f.expected.clear();
  return out;
}

Feedback TutorService::answer(const Principal& who, std::string_view session_id,
                              std::string_view question_id,
                              const Submission& submission,
                              std::optional<double> elapsed) {
  auto session = find(who, session_id);
  std::lock_guard lock(session->mutex);
  if (session->finished) {
    throw Error(ErrorCode::out_of_order, "session is finished");
  }
  const auto& questions = session->exercise.questions;
  if (!session->issued || session->cursor >= questions.size() ||
      questions[session->cursor].id != question_id) {
    throw Error(ErrorCode::out_of_order,
                "question " + std::string(question_id) + " is not the one issued");
  }
  std::int64_t elapsed_ms = 0;
  if (elapsed) {
    if (!std::isfinite(*elapsed) || *elapsed <= 0) {
      throw Error(ErrorCode::invalid_argument, "elapsed must be positive");
    }
    elapsed_ms = std::max<std::int64_t>(1, std::llround(*elapsed * 1000.0));
  } else {
    elapsed_ms = std::max<std::int64_t>(
        1, config_.steady_ms() - session->issued_steady_ms);
  }

  const Question& q = questions[session->cursor];
  Feedback feedback =
      check(q, submission, static_cast<double>(elapsed_ms) / 1000.0);

  PracticeEvent e;
  e.user_id = session->info.user_id;
  e.session_id = session->info.session_id;
  e.exercise_name = session->info.exercise_name;
  e.question_id = q.id;
  e.started_at = session->issued_at;
  e.elapsed_ms = elapsed_ms;
  e.correct = feedback.overall;
  for (const FeatureResult& r : feedback.per_feature) {
    e.per_feature.emplace_back(r.name, r.correct);
  }
  log_.append_event(e);

  ++session->cursor;
  session->issued = false;
  return feedback;
}

FinishResult TutorService::finish(const Principal& who,
                                  std::string_view session_id, FinishMode mode) {
  auto session = find(who, session_id);
  std::lock_guard lock(session->mutex);
  if (session->finished) {
    throw Error(ErrorCode::out_of_order, "session is already finished");
  }
  log_.append_finish(session->info.user_id, session->info.session_id, mode,
                     config_.now());
  session->finished = true;

  FinishResult result{session->info.session_id, mode, std::nullopt};
  std::lock_guard agg(aggregate_mutex_);
  for (SessionSummary& row : aggregate_.logbook(session->info.user_id)) {
    if (row.session_id == session->info.session_id) {
      result.summary = std::move(row);
      break;
    }
  }
  return result;
}

void TutorService::require_self_or_facilitator(const Principal& who,
                                               std::string_view user) const {
  if (who.role != Role::facilitator && who.user_id != user) {
    throw Error(ErrorCode::forbidden, "learners may only read their own records");
  }
}

std::vector<SessionSummary> TutorService::logbook(const Principal& who,
                                                  std::string_view user,
                                                  const TimeRange& range) const {
  require_self_or_facilitator(who, user);
  std::lock_guard lock(aggregate_mutex_);
  return aggregate_.logbook(user, range);
}

std::vector<RankRow> TutorService::ranking(const Principal&) const {
  std::lock_guard lock(aggregate_mutex_);
  return aggregate_.ranking();
}

ClassReport TutorService::class_report(const Principal& who,
                                       std::vector<Timestamp> week_ends,
                                       std::vector<std::string> users) const {
  if (who.role != Role::facilitator) {
    throw Error(ErrorCode::forbidden, "class reports are for facilitators");
  }
  const auto events = log_.snapshot().practice();
  return corpus_tutor::class_report(events, std::move(users),
                                    std::move(week_ends), config_.scale);
}

std::vector<TaskRow> TutorService::tasks(const Principal& who,
                                         std::string_view user,
                                         std::optional<std::string> test_id) const {
  require_self_or_facilitator(who, user);
  if (!test_id) {
    std::lock_guard lock(aggregate_mutex_);
    return aggregate_.task_report(user, config_.scale);
  }
  LogFilter mine;
  mine.user = std::string(user);
  const auto events = log_.snapshot(mine).practice();
  return test_report(events, user, *test_id, config_.scale);
}

}  // namespace corpus_tutor
