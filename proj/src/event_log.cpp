#include "corpus_tutor/event_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "corpus_tutor/error.hpp"

namespace corpus_tutor {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const std::size_t tab = line.find('\t');
    out.push_back(line.substr(0, tab));
    if (tab == std::string_view::npos) break;
    line.remove_prefix(tab + 1);
  }
  return out;
}

[[noreturn]] void bad_line(const std::string& why) {
  throw Error(ErrorCode::parse_error, "event log: " + why);
}

template <class T>
T number(std::string_view field, const char* name) {
  T value{};
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size()) {
    bad_line(std::string(name) + " '" + std::string(field) + "' is not a number");
  }
  return value;
}

std::string_view id_field(std::string_view field, const char* name) {
  if (field.empty()) bad_line(std::string(name) + " is empty");
  return field;
}

FinishMode mode_field(std::string_view field) {
  auto mode = parse_enum<FinishMode>(field);
  if (!mode) bad_line("unknown mode '" + std::string(field) + "'");
  return *mode;
}

Timestamp time_field(std::string_view field) {
  auto t = parse_timestamp(field);
  if (!t) bad_line("bad timestamp '" + std::string(field) + "'");
  return *t;
}

void check_schema(std::string_view field) {
  const int version = number<int>(field, "schema_version");
  if (version != kSchemaVersion) {
    throw Error(ErrorCode::schema_mismatch,
                "event log record has schema version " + std::to_string(version) +
                    ", expected " + std::to_string(kSchemaVersion));
  }
}

// Milliseconds as seconds with three decimals: 8200 -> "8.200".
std::string seconds_text(std::int64_t ms) {
  std::string frac = std::to_string(ms % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(ms / 1000) + '.' + frac;
}

std::int64_t parse_seconds(std::string_view field) {
  const std::size_t dot = field.find('.');
  const auto whole = number<std::int64_t>(field.substr(0, dot), "elapsed_s");
  std::int64_t ms = 0;
  if (dot != std::string_view::npos) {
    std::string_view frac = field.substr(dot + 1);
    if (frac.empty() || frac.size() > 3) bad_line("elapsed_s needs 1-3 decimals");
    ms = number<std::int64_t>(frac, "elapsed_s");
    for (std::size_t i = frac.size(); i < 3; ++i) ms *= 10;
  }
  return whole * 1000 + ms;
}

bool storable(std::string_view text) {
  return !text.empty() && text.find_first_of("\t\n\r") == std::string_view::npos;
}

void validate(const PracticeEvent& e) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::invalid_argument, what);
  };
  require(storable(e.user_id), "user_id must be non-empty without tabs or line breaks");
  require(storable(e.session_id), "session_id must be non-empty without tabs or line breaks");
  require(storable(e.exercise_name),
          "exercise_name must be non-empty without tabs or line breaks");
  require(storable(e.question_id), "question_id must be non-empty without tabs or line breaks");
  require(e.elapsed_ms > 0, "elapsed must be positive");
  for (const auto& [name, ok] : e.per_feature) {
    require(storable(name) && name.find_first_of(",=") == std::string::npos,
            "feature names must not contain ',' or '='");
  }
}

}  // namespace

std::string format_log_line(const LogEntry& entry) {
  std::ostringstream out;
  if (const auto* r = std::get_if<EventRecord>(&entry)) {
    const PracticeEvent& e = r->event;
    out << r->seq << '\t' << r->schema_version << '\t' << e.user_id << '\t'
        << e.session_id << '\t' << e.exercise_name << '\t' << e.question_id
        << '\t' << format_timestamp(e.started_at) << '\t'
        << seconds_text(e.elapsed_ms) << '\t' << (e.correct ? 1 : 0) << '\t';
    if (e.per_feature.empty()) out << '-';
    for (std::size_t i = 0; i < e.per_feature.size(); ++i) {
      out << (i ? "," : "") << e.per_feature[i].first << '='
          << (e.per_feature[i].second ? 1 : 0);
    }
    out << '\t' << to_string(e.mode);
  } else {
    const auto& f = std::get<FinishRecord>(entry);
    out << "F\t" << f.seq << '\t' << f.schema_version << '\t' << f.user_id
        << '\t' << f.session_id << '\t' << to_string(f.mode) << '\t'
        << format_timestamp(f.finished_at);
  }
  return out.str();
}

LogEntry parse_log_line(std::string_view line) {
  const auto f = split_tabs(line);
  if (f[0] == "F") {
    if (f.size() != 7) bad_line("finish record needs 7 fields");
    check_schema(f[2]);
    FinishRecord r;
    r.seq = number<std::uint64_t>(f[1], "seq");
    r.user_id = id_field(f[3], "user_id");
    r.session_id = id_field(f[4], "session_id");
    r.mode = mode_field(f[5]);
    r.finished_at = time_field(f[6]);
    return r;
  }
  if (f.size() != 11) bad_line("answer record needs 11 fields");
  check_schema(f[1]);
  EventRecord r;
  r.seq = number<std::uint64_t>(f[0], "seq");
  PracticeEvent& e = r.event;
  e.user_id = id_field(f[2], "user_id");
  e.session_id = id_field(f[3], "session_id");
  e.exercise_name = id_field(f[4], "exercise_name");
  e.question_id = id_field(f[5], "question_id");
  e.started_at = time_field(f[6]);
  e.elapsed_ms = parse_seconds(f[7]);
  if (f[8] != "0" && f[8] != "1") bad_line("correct must be 0 or 1");
  e.correct = f[8] == "1";
  if (f[9] != "-") {
    std::string_view list = f[9];
    while (true) {
      const std::size_t comma = list.find(',');
      const std::string_view item = list.substr(0, comma);
      const std::size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0 ||
          (item.substr(eq + 1) != "0" && item.substr(eq + 1) != "1")) {
        bad_line("per_feature items look like stem=1");
      }
      e.per_feature.emplace_back(std::string(item.substr(0, eq)),
                                 item.substr(eq + 1) == "1");
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
  }
  e.mode = mode_field(f[10]);
  return r;
}

bool LogFilter::matches(const PracticeEvent& e) const {
  return (!user || e.user_id == *user) &&
         (!exercise || e.exercise_name == *exercise) &&
         (!session || e.session_id == *session) && time.contains(e.started_at);
}

std::vector<PracticeEvent> Snapshot::practice() const {
  std::vector<PracticeEvent> out;
  out.reserve(events.size());
  for (const EventRecord& r : events) out.push_back(r.event);
  return out;
}

EventLog::EventLog() = default;

EventLog::EventLog(std::filesystem::path path, Sync sync)
    : path_(std::move(path)), sync_(sync) {
  std::string contents;
  if (std::filesystem::exists(*path_)) {
    std::ifstream in(*path_, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    contents = ss.str();
  }
  const std::size_t end = contents.rfind('\n') == std::string::npos
                              ? 0
                              : contents.rfind('\n') + 1;
  truncated_ = contents.size() - end;

  std::size_t pos = 0, line_no = 0;
  while (pos < end) {
    const std::size_t eol = contents.find('\n', pos);
    const std::string_view line(contents.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    LogEntry entry;
    try {
      entry = parse_log_line(line);
    } catch (const Error& e) {
      throw Error(e.code(), path_->string() + ":" + std::to_string(line_no) +
                                ": " + e.what());
    }
    const std::uint64_t seq = std::visit([](const auto& r) { return r.seq; }, entry);
    if (seq <= last_seq_) {
      throw Error(ErrorCode::parse_error,
                  path_->string() + ":" + std::to_string(line_no) +
                      ": sequence numbers must increase");
    }
    last_seq_ = seq;
    if (const auto* f = std::get_if<FinishRecord>(&entry)) {
      finished_[f->session_id] = f->mode;
    }
    entries_.push_back(std::move(entry));
  }

  fd_ = ::open(path_->c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::write_failure,
                "cannot open " + path_->string() + ": " + std::strerror(errno));
  }
  if (truncated_ > 0) {
    if (::ftruncate(fd_, static_cast<off_t>(end)) != 0) {
      throw Error(ErrorCode::write_failure,
                  "cannot truncate torn tail of " + path_->string());
    }
    ::fsync(fd_);
  }
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLog::write_line(const std::string& line) {
  if (fd_ < 0) return;
  const off_t before = ::lseek(fd_, 0, SEEK_END);
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      const std::string why = std::strerror(errno);
      if (before >= 0) {
        // drop a partial line so the file stays parseable
        [[maybe_unused]] const int rc = ::ftruncate(fd_, before);
      }
      throw Error(ErrorCode::write_failure, "event log write failed: " + why);
    }
    done += static_cast<std::size_t>(n);
  }
  if (sync_ == Sync::always && ::fdatasync(fd_) != 0) {
    throw Error(ErrorCode::write_failure,
                std::string("event log sync failed: ") + std::strerror(errno));
  }
}

std::uint64_t EventLog::append(LogEntry entry) {
  std::unique_lock lock(mutex_);
  const std::uint64_t seq = last_seq_ + 1;
  std::visit([seq](auto& r) { r.seq = seq; }, entry);
  write_line(format_log_line(entry) + '\n');
  last_seq_ = seq;
  if (const auto* f = std::get_if<FinishRecord>(&entry)) {
    finished_[f->session_id] = f->mode;
  }
  entries_.push_back(std::move(entry));
  for (const auto& [id, listener] : listeners_) listener(entries_.back());
  return seq;
}

std::uint64_t EventLog::append_event(const PracticeEvent& event) {
  validate(event);
  return append(EventRecord{0, kSchemaVersion, event});
}

std::uint64_t EventLog::append_finish(std::string_view user,
                                      std::string_view session, FinishMode mode,
                                      Timestamp finished_at) {
  if (!storable(user) || !storable(session)) {
    throw Error(ErrorCode::invalid_argument,
                "user and session must be non-empty without tabs or line breaks");
  }
  return append(FinishRecord{0, kSchemaVersion, std::string(user),
                             std::string(session), mode, finished_at});
}

Snapshot EventLog::snapshot(const LogFilter& filter) const {
  std::shared_lock lock(mutex_);
  Snapshot snap;
  snap.last_seq = last_seq_;
  for (const LogEntry& entry : entries_) {
    const auto* r = std::get_if<EventRecord>(&entry);
    if (r == nullptr || !filter.matches(r->event)) continue;
    EventRecord copy = *r;
    auto it = finished_.find(r->event.session_id);
    copy.event.mode = it == finished_.end() ? FinishMode::save_outcome : it->second;
    snap.events.push_back(std::move(copy));
  }
  return snap;
}

std::optional<FinishMode> EventLog::finished_mode(std::string_view session) const {
  std::shared_lock lock(mutex_);
  auto it = finished_.find(std::string(session));
  if (it == finished_.end()) return std::nullopt;
  return it->second;
}

std::size_t EventLog::subscribe(std::function<void(const LogEntry&)> listener) {
  std::unique_lock lock(mutex_);
  for (const LogEntry& entry : entries_) listener(entry);
  listeners_.emplace_back(++last_listener_, std::move(listener));
  return last_listener_;
}

void EventLog::unsubscribe(std::size_t id) {
  std::unique_lock lock(mutex_);
  std::erase_if(listeners_, [id](const auto& l) { return l.first == id; });
}

std::uint64_t EventLog::last_seq() const {
  std::shared_lock lock(mutex_);
  return last_seq_;
}

}  // namespace corpus_tutor
