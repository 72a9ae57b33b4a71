#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "corpus_tutor/journey.hpp"

namespace corpus_tutor {

inline constexpr int kSchemaVersion = 1;

/// One accepted answer. Line format (tab-separated):
/// seq schema_version user_id session_id exercise_name question_id
/// started_at elapsed_s correct per_feature mode
struct EventRecord {
  std::uint64_t seq = 0;
  int schema_version = kSchemaVersion;
  PracticeEvent event;
};

/// Closes a session and fixes the finishing mode of all its answers. Line
/// format: F seq schema_version user_id session_id mode finished_at
struct FinishRecord {
  std::uint64_t seq = 0;
  int schema_version = kSchemaVersion;
  std::string user_id;
  std::string session_id;
  FinishMode mode = FinishMode::save_outcome;
  Timestamp finished_at = 0;
};

using LogEntry = std::variant<EventRecord, FinishRecord>;

std::string format_log_line(const LogEntry& entry);
/// Throws parse_error for malformed lines and schema_mismatch for records
/// written under another schema version.
LogEntry parse_log_line(std::string_view line);

struct LogFilter {
  std::optional<std::string> user;
  std::optional<std::string> exercise;
  std::optional<std::string> session;
  TimeRange time;

  bool matches(const PracticeEvent& e) const;
};

struct Snapshot {
  /// Matching answers in sequence order, each carrying the mode its session
  /// was finished with (save_outcome while unfinished).
  std::vector<EventRecord> events;
  /// Highest sequence number in the log when the snapshot was taken.
  std::uint64_t last_seq = 0;

  std::vector<PracticeEvent> practice() const;
};

/// Append-only answer log. Appends are serialized and, with Sync::always,
/// flushed to disk before they return. Reads go through snapshots and never
/// see a partially applied append.
class EventLog {
 public:
  enum class Sync { always, never };

  /// A log kept only in memory.
  EventLog();
  /// Opens or creates the file and replays it. An unterminated last line
  /// (a torn write) is cut off; any other bad line throws parse_error or
  /// schema_mismatch.
  explicit EventLog(std::filesystem::path path, Sync sync = Sync::always);
  ~EventLog();

  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  /// Validates and appends; returns the new sequence number. Throws
  /// invalid_argument for fields that cannot be stored and write_failure
  /// when the file cannot be written.
  std::uint64_t append_event(const PracticeEvent& event);
  std::uint64_t append_finish(std::string_view user, std::string_view session,
                              FinishMode mode, Timestamp finished_at);

  Snapshot snapshot(const LogFilter& filter = {}) const;
  /// Mode a session was finished with, if it was finished.
  std::optional<FinishMode> finished_mode(std::string_view session) const;

  /// Calls `listener` with every entry already in the log and then with each
  /// new one, while the append lock is held, so it sees entries in sequence
  /// order. Returns an id for unsubscribe().
  std::size_t subscribe(std::function<void(const LogEntry&)> listener);
  void unsubscribe(std::size_t id);

  std::uint64_t last_seq() const;
  /// Bytes cut from a torn tail when the file was opened.
  std::size_t truncated_bytes() const { return truncated_; }

 private:
  std::uint64_t append(LogEntry entry);
  void write_line(const std::string& line);

  std::optional<std::filesystem::path> path_;
  Sync sync_ = Sync::always;
  int fd_ = -1;
  std::size_t truncated_ = 0;

  mutable std::shared_mutex mutex_;
  std::vector<LogEntry> entries_;  // in sequence order
  std::unordered_map<std::string, FinishMode> finished_;
  std::uint64_t last_seq_ = 0;
  std::vector<std::pair<std::size_t, std::function<void(const LogEntry&)>>>
      listeners_;
  std::size_t last_listener_ = 0;
};

}  // namespace corpus_tutor
