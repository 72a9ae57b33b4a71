#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/event_log.hpp"
#include "corpus_tutor/exercise.hpp"
#include "corpus_tutor/http_api.hpp"
#include "corpus_tutor/ingest.hpp"
#include "corpus_tutor/journey.hpp"
#include "corpus_tutor/service.hpp"

namespace corpus_tutor {

namespace {

struct CliConfig {
  std::string corpus;
  std::string translit;
  std::string log;
  std::string tokens;
  std::string grades;
  std::string host = "127.0.0.1";
  int port = 8080;
  PointsConfig points;
};

// Thrown for problems with the invocation itself (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Timestamp date_arg(const std::string& text) {
  auto t = parse_timestamp(text);
  if (!t) throw UsageError("bad date: " + text);
  return *t;
}

const std::string& require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
  return value;
}

GradeScale grade_scale(const CliConfig& config) {
  if (config.grades.empty()) return GradeScale::standard();
  try {
    return GradeScale::parse(config.grades);
  } catch (const Error& e) {
    throw UsageError(std::string("--grades: ") + e.what());
  }
}

std::optional<Corpus> load_corpus(const CliConfig& config, std::ostream& err) {
  std::optional<TranslitTable> table;
  if (!config.translit.empty()) table = TranslitTable::parse(read_file(config.translit));
  IngestResult result =
      parse_corpus(read_file(require(config.corpus, "--corpus")), table ? &*table : nullptr);
  if (!result.corpus) err << format_report(result.report);
  return std::move(result.corpus);
}

int cmd_ingest(const std::string& path, const std::string& translit,
               const std::string& report_path, std::ostream& out) {
  std::optional<TranslitTable> table;
  if (!translit.empty()) table = TranslitTable::parse(read_file(translit));
  const IngestResult result = parse_corpus(read_file(path), table ? &*table : nullptr);
  const std::string report = format_report(result.report);
  out << report;
  if (!report_path.empty()) {
    std::ofstream file(report_path, std::ios::binary | std::ios::trunc);
    file << report;
    if (!file) throw Error(ErrorCode::write_failure, "cannot write " + report_path);
  }
  return result.report.ok() ? kExitOk : kExitInvalid;
}

struct DrillOptions {
  std::string spec_path;
  std::uint64_t seed = 0;
  std::string user = "learner";
  std::optional<double> fixed_elapsed;
  std::string mode = "save_outcome";
};

int cmd_drill(const CliConfig& config, const DrillOptions& opts, std::istream& in,
              std::ostream& out, std::ostream& err) {
  const auto mode = parse_enum<FinishMode>(opts.mode);
  if (!mode) throw UsageError("--mode must be save_outcome or grade_task");
  const ExerciseSpec spec = ExerciseSpec::parse(read_file(opts.spec_path));
  const auto corpus = load_corpus(config, err);
  if (!corpus) return kExitInvalid;

  std::unique_ptr<EventLog> log = config.log.empty()
                                      ? std::make_unique<EventLog>()
                                      : std::make_unique<EventLog>(config.log);
  ServiceConfig service_config;
  service_config.points = config.points;
  service_config.scale = grade_scale(config);
  TutorService service(*corpus, *log, service_config);
  const Principal me{opts.user, Role::learner};

  const SessionInfo info = service.create_session(me, spec, opts.seed);
  out << info.exercise_name << " (" << info.session_id << ", " << info.question_count
      << " questions)\n";
  bool stopped = false;
  while (auto q = service.next(me, info.session_id)) {
    out << "\n[" << q->index + 1 << "/" << q->total << "] " << q->question.prompt
        << "   " << q->question.context << '\n';
    Submission submission;
    for (const AnswerField& f : q->question.fields) {
      out << "  " << f.name;
      if (!f.options.empty()) {
        out << " (";
        for (std::size_t i = 0; i < f.options.size(); ++i) {
          out << (i ? " | " : "") << f.options[i];
        }
        out << ")";
      }
      out << ": " << std::flush;
      std::string line;
      if (!std::getline(in, line)) {
        stopped = true;
        break;
      }
      submission[f.name] = line;
    }
    if (stopped) break;
    const Feedback fb =
        service.answer(me, info.session_id, q->question.id, submission, opts.fixed_elapsed);
    if (fb.overall) {
      out << "  correct\n";
    } else {
      for (const FeatureResult& r : fb.per_feature) {
        if (!r.correct) out << "  wrong " << r.name << ": " << r.expected << '\n';
      }
    }
  }
  if (stopped) out << "\ninput ended\n";
  const FinishResult done = service.finish(me, info.session_id, *mode);
  out << '\n';
  if (done.summary) out << render_logbook({*done.summary});
  return kExitOk;
}

std::vector<PracticeEvent> read_log(const CliConfig& config) {
  const std::string& path = require(config.log, "--log");
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::invalid_argument, "no log at " + path);
  }
  return EventLog(path).snapshot().practice();
}

int cmd_serve(const CliConfig& config, std::ostream& out, std::ostream& err) {
  const TokenStore tokens = TokenStore::parse(read_file(require(config.tokens, "--tokens")));
  const auto corpus = load_corpus(config, err);
  if (!corpus) return kExitInvalid;
  EventLog log(require(config.log, "--log"));
  ServiceConfig service_config;
  service_config.points = config.points;
  service_config.scale = grade_scale(config);
  TutorService service(*corpus, log, service_config);
  ApiServer api(service, tokens);

  // Signals are taken by a dedicated thread; the server threads inherit the
  // blocked mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  const int port = api.bind(config.host, config.port);
  if (port < 0) {
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    err << "cannot bind " << config.host << ':' << config.port << '\n';
    return kExitInvalid;
  }
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    api.stop();
  });
  out << "listening on " << config.host << ':' << port << std::endl;
  api.serve();
  // Wakes the waiter if the server stopped on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in,
            std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus-driven language training", "corpus-tutor"};
  app.fallthrough();
  app.require_subcommand(1);

  CliConfig config;
  app.add_option("--corpus", config.corpus, "Corpus file")->envname("CORPUS_TUTOR_CORPUS");
  app.add_option("--translit", config.translit, "Transliteration table")
      ->envname("CORPUS_TUTOR_TRANSLIT");
  app.add_option("--log", config.log, "Event log file")->envname("CORPUS_TUTOR_LOG");
  app.add_option("--tokens", config.tokens, "Token file: token, user, role per line")
      ->envname("CORPUS_TUTOR_TOKENS");
  app.add_option("--grades", config.grades, "Grade scale, e.g. A=90,B=80,F=0")
      ->envname("CORPUS_TUTOR_GRADES");
  app.add_option("--points-per-answer", config.points.points_per_answer)
      ->envname("CORPUS_TUTOR_POINTS_PER_ANSWER")
      ->check(CLI::PositiveNumber);
  app.add_option("--reference-seconds", config.points.reference_seconds)
      ->envname("CORPUS_TUTOR_REFERENCE_SECONDS")
      ->check(CLI::PositiveNumber);
  app.add_option("--points-cap", config.points.cap)
      ->envname("CORPUS_TUTOR_POINTS_CAP")
      ->check(CLI::PositiveNumber);

  std::string ingest_path, ingest_report;
  auto* ingest = app.add_subcommand("ingest", "Parse and validate a corpus file");
  ingest->add_option("corpus", ingest_path, "Corpus file")->required();
  ingest->add_option("--report", ingest_report, "Also write the diagnostics here");

  DrillOptions drill_opts;
  auto* drill = app.add_subcommand("drill", "Practice an exercise in the terminal");
  drill->add_option("--spec", drill_opts.spec_path, "Exercise spec file")->required();
  drill->add_option("--seed", drill_opts.seed, "Generation seed")->required();
  drill->add_option("--user", drill_opts.user, "Learner id")->envname("CORPUS_TUTOR_USER");
  drill->add_option("--fixed-elapsed", drill_opts.fixed_elapsed,
                    "Record this many seconds per answer instead of timing")
      ->check(CLI::PositiveNumber);
  drill->add_option("--mode", drill_opts.mode, "save_outcome or grade_task");

  auto* report = app.add_subcommand("report", "Print a statistics export");
  report->require_subcommand(1);
  std::string report_user, report_from, report_to, report_weeks, report_users, report_test;
  auto* logbook_cmd = report->add_subcommand("logbook", "Session rows of one learner");
  logbook_cmd->add_option("--user", report_user)->required();
  logbook_cmd->add_option("--from", report_from, "First day (YYYY-MM-DD)");
  logbook_cmd->add_option("--to", report_to, "Day after the last one (YYYY-MM-DD)");
  auto* ranking_cmd = report->add_subcommand("ranking", "All learners by points");
  auto* class_cmd = report->add_subcommand("class", "Weekly grades per learner");
  class_cmd->add_option("--weeks", report_weeks, "Comma-separated last days of weeks")
      ->required();
  class_cmd->add_option("--users", report_users, "Comma-separated learners");
  auto* tasks_cmd = report->add_subcommand("tasks", "Per-exercise results of one learner");
  tasks_cmd->add_option("--user", report_user)->required();
  tasks_cmd->add_option("--test", report_test, "Only graded answers to this test");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--port", config.port)
      ->envname("CORPUS_TUTOR_PORT")
      ->check(CLI::Range(1, 65535));
  serve->add_option("--host", config.host)->envname("CORPUS_TUTOR_HOST");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "Run with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_path, config.translit, ingest_report, out);
    if (*drill) return cmd_drill(config, drill_opts, in, out, err);
    if (*serve) return cmd_serve(config, out, err);

    const GradeScale scale = grade_scale(config);
    TimeRange range;
    if (!report_from.empty()) range.from = date_arg(report_from);
    if (!report_to.empty()) range.to = date_arg(report_to);
    std::vector<Timestamp> weeks;
    for (const std::string& day : split_commas(report_weeks)) weeks.push_back(date_arg(day));

    const auto events = read_log(config);
    if (*logbook_cmd) {
      out << render_logbook(logbook(events, report_user, range));
    } else if (*ranking_cmd) {
      out << render_ranking(ranking(events, config.points));
    } else if (*class_cmd) {
      out << render_class(class_report(events, split_commas(report_users), weeks, scale));
    } else if (*tasks_cmd) {
      out << render_tasks(report_test.empty()
                              ? task_report(events, report_user, scale)
                              : test_report(events, report_user, report_test, scale));
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace corpus_tutor
