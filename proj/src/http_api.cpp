#include "corpus_tutor/http_api.hpp"

#include <httplib.h>

#include <json.hpp>
#include <sstream>

namespace corpus_tutor {

namespace {

using Json = nlohmann::ordered_json;

Json envelope() { return Json{{"version", kApiVersion}}; }

Json to_json(const Question& q, std::size_t index, std::size_t total) {
  Json fields = Json::array();
  for (const AnswerField& f : q.fields) {
    fields.push_back({{"name", f.name}, {"options", f.options}, {"text", f.text}});
  }
  return {{"id", q.id},       {"prompt", q.prompt}, {"context", q.context},
          {"index", index},   {"total", total},     {"fields", std::move(fields)}};
}

Json to_json(const Feedback& f) {
  Json out = envelope();
  out["overall"] = f.overall;
  Json per = Json::array();
  for (const FeatureResult& r : f.per_feature) {
    per.push_back({{"name", r.name},
                   {"correct", r.correct},
                   {"expected", r.expected},
                   {"got", r.got}});
  }
  out["per_feature"] = std::move(per);
  out["elapsed"] = f.elapsed;
  return out;
}

Json to_json(const SessionSummary& s) {
  return {{"session_id", s.session_id},
          {"user_id", s.user_id},
          {"exercise_name", s.exercise_name},
          {"started_at", format_timestamp(s.started_at)},
          {"duration_ms", s.duration_ms},
          {"correct", s.correct},
          {"wrong", s.wrong},
          {"mode", to_string(s.mode)},
          {"seconds_per_right",
           s.seconds_per_right ? Json(*s.seconds_per_right) : Json(nullptr)},
          {"correct_per_minute", s.correct_per_minute},
          {"accuracy", s.accuracy},
          {"proficiency", s.proficiency}};
}

Json to_json(const TaskRow& r) {
  return {{"task", r.task},
          {"answered", r.answered},
          {"percentage", r.percentage},
          {"grade", r.grade}};
}

Json text_payload(const Corpus& corpus, const VerseRef& from, const VerseRef& to) {
  Json clauses = Json::array();
  for (const ClauseSlice& slice : corpus.text_slice(from, to)) {
    const ClauseAtom& c = *slice.clause;
    Json words = Json::array();
    for (const Word& w : slice.words) {
      Json features = Json::object();
      const FeatureBundle bundle = corpus.feature_bundle(w.monad);
      for (const auto& [name, value] : bundle.entries()) {
        features[name] = value;
      }
      words.push_back({{"monad", w.monad},
                       {"verse", w.verse.str()},
                       {"surface", w.surface},
                       {"translit", w.translit},
                       {"features", std::move(features)}});
    }
    clauses.push_back({{"id", c.id},
                       {"sentence_id", c.sentence_id},
                       {"label", c.label.str()},
                       {"ctc", c.ctc},
                       {"tab_depth", c.tab_depth},
                       {"mother_id", c.mother_id ? Json(*c.mother_id) : Json(nullptr)},
                       {"words", std::move(words)}});
  }
  Json out = envelope();
  out["from"] = from.str();
  out["to"] = to.str();
  out["clauses"] = std::move(clauses);
  return out;
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message) {
  Json body = envelope();
  body["error"] = std::string(to_string(code));
  body["message"] = message;
  reply(res, http_status(code), body);
}

Json parse_body(const httplib::Request& req) {
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::parse_error, "request body must be a JSON object");
  }
  if (body.contains("version") && body["version"] != kApiVersion) {
    throw Error(ErrorCode::schema_mismatch, "unsupported payload version");
  }
  return body;
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    throw Error(ErrorCode::invalid_argument,
                std::string("missing query parameter ") + name);
  }
  return req.get_param_value(name);
}

VerseRef verse_param(const std::string& text) {
  auto ref = VerseRef::parse(text);
  if (!ref) throw Error(ErrorCode::invalid_argument, "bad verse reference " + text);
  return *ref;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Timestamp timestamp_param(const std::string& text) {
  auto t = parse_timestamp(text);
  if (!t) throw Error(ErrorCode::invalid_argument, "bad date " + text);
  return *t;
}

std::vector<Timestamp> week_ends_param(const std::string& text) {
  std::vector<Timestamp> out;
  for (const std::string& day : split_commas(text)) out.push_back(timestamp_param(day));
  return out;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_token: return 401;
    case ErrorCode::forbidden: return 403;
    case ErrorCode::unknown_session:
    case ErrorCode::unknown_reference: return 404;
    case ErrorCode::out_of_order: return 409;
    case ErrorCode::empty_scope: return 422;
    case ErrorCode::write_failure: return 503;
    default: return 400;
  }
}

struct ApiServer::Impl {
  TutorService& service;
  const TokenStore& tokens;
  httplib::Server server;

  Impl(TutorService& s, const TokenStore& t) : service(s), tokens(t) {}

  const Principal& principal(const httplib::Request& req) const {
    constexpr std::string_view scheme = "Bearer ";
    const std::string header = req.get_header_value("Authorization");
    if (header.compare(0, scheme.size(), scheme) != 0) {
      throw Error(ErrorCode::invalid_token, "missing bearer token");
    }
    return tokens.authenticate(std::string_view(header).substr(scheme.size()));
  }

  // Wraps a handler so that library errors become JSON error replies.
  template <class F>
  httplib::Server::Handler guarded(F handler) {
    return [this, handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(principal(req), req, res);
      } catch (const Error& e) {
        reply_error(res, e.code(), e.what());
      } catch (const Json::exception& e) {
        reply_error(res, ErrorCode::parse_error, e.what());
      } catch (const std::exception& e) {
        Json body = envelope();
        body["error"] = "internal";
        body["message"] = e.what();
        reply(res, 500, body);
      }
    };
  }

  void routes() {
    server.Get("/api/v1/text", guarded([this](const Principal&,
                                              const httplib::Request& req,
                                              httplib::Response& res) {
      const VerseRef from = verse_param(required_param(req, "from"));
      const VerseRef to =
          req.has_param("to") ? verse_param(req.get_param_value("to")) : from;
      reply(res, 200, text_payload(service.corpus(), from, to));
    }));

    server.Post("/api/v1/sessions", guarded([this](const Principal& who,
                                                   const httplib::Request& req,
                                                   httplib::Response& res) {
      const Json body = parse_body(req);
      const ExerciseSpec spec = ExerciseSpec::parse(body.at("spec").get<std::string>());
      const auto seed = body.value("seed", std::uint64_t{0});
      const SessionInfo info = service.create_session(who, spec, seed);
      Json out = envelope();
      out["session_id"] = info.session_id;
      out["user_id"] = info.user_id;
      out["exercise_name"] = info.exercise_name;
      out["seed"] = info.seed;
      out["question_count"] = info.question_count;
      reply(res, 201, out);
    }));

    server.Get(R"(/api/v1/sessions/([^/]+)/next)",
               guarded([this](const Principal& who, const httplib::Request& req,
                              httplib::Response& res) {
                 const auto q = service.next(who, req.matches[1].str());
                 Json out = envelope();
                 out["done"] = !q;
                 if (q) out["question"] = to_json(q->question, q->index, q->total);
                 reply(res, 200, out);
               }));

    server.Post(R"(/api/v1/sessions/([^/]+)/answer)",
                guarded([this](const Principal& who, const httplib::Request& req,
                               httplib::Response& res) {
                  const Json body = parse_body(req);
                  Submission submission;
                  for (const auto& [name, value] : body.at("answers").items()) {
                    submission[name] = value.get<std::string>();
                  }
                  std::optional<double> elapsed;
                  if (body.contains("elapsed")) elapsed = body["elapsed"].get<double>();
                  const Feedback fb =
                      service.answer(who, req.matches[1].str(),
                                     body.at("question_id").get<std::string>(),
                                     submission, elapsed);
                  reply(res, 200, to_json(fb));
                }));

    server.Post(R"(/api/v1/sessions/([^/]+)/finish)",
                guarded([this](const Principal& who, const httplib::Request& req,
                               httplib::Response& res) {
                  const auto mode = parse_enum<FinishMode>(required_param(req, "mode"));
                  if (!mode) {
                    throw Error(ErrorCode::invalid_argument,
                                "mode must be save_outcome or grade_task");
                  }
                  const FinishResult r = service.finish(who, req.matches[1].str(), *mode);
                  Json out = envelope();
                  out["session_id"] = r.session_id;
                  out["mode"] = to_string(r.mode);
                  out["summary"] = r.summary ? to_json(*r.summary) : Json(nullptr);
                  reply(res, 200, out);
                }));

    server.Get("/api/v1/stats/logbook", guarded([this](const Principal& who,
                                                       const httplib::Request& req,
                                                       httplib::Response& res) {
      const std::string user =
          req.has_param("user") ? req.get_param_value("user") : who.user_id;
      TimeRange range;
      if (req.has_param("from")) range.from = timestamp_param(req.get_param_value("from"));
      if (req.has_param("to")) range.to = timestamp_param(req.get_param_value("to"));
      const auto rows = service.logbook(who, user, range);
      Json out = envelope();
      out["rows"] = Json::array();
      for (const auto& r : rows) out["rows"].push_back(to_json(r));
      out["tsv"] = render_logbook(rows);
      reply(res, 200, out);
    }));

    server.Get("/api/v1/stats/ranking", guarded([this](const Principal& who,
                                                       const httplib::Request&,
                                                       httplib::Response& res) {
      const auto rows = service.ranking(who);
      Json out = envelope();
      out["rows"] = Json::array();
      for (const RankRow& r : rows) {
        out["rows"].push_back({{"rank", r.rank},
                               {"user_id", r.user_id},
                               {"total_points", r.total_points},
                               {"total_time_ms", r.total_time_ms}});
      }
      out["tsv"] = render_ranking(rows);
      reply(res, 200, out);
    }));

    server.Get("/api/v1/stats/class", guarded([this](const Principal& who,
                                                     const httplib::Request& req,
                                                     httplib::Response& res) {
      std::vector<std::string> users;
      if (req.has_param("users")) users = split_commas(req.get_param_value("users"));
      const ClassReport report = service.class_report(
          who, week_ends_param(required_param(req, "weeks")), std::move(users));
      Json out = envelope();
      Json weeks = Json::array();
      for (Timestamp t : report.week_ends) weeks.push_back(format_timestamp(t).substr(0, 10));
      out["week_ends"] = std::move(weeks);
      out["rows"] = Json::array();
      for (const auto& [user, cells] : report.rows) {
        Json row = {{"user_id", user}, {"cells", Json::array()}};
        for (const ClassCell& c : cells) {
          row["cells"].push_back({{"grade", c.grade},
                                  {"cumulative_ms", c.cumulative_ms},
                                  {"trend", c.trend == Trend::improved   ? "improved"
                                            : c.trend == Trend::worsened ? "worsened"
                                                                         : "steady"}});
        }
        out["rows"].push_back(std::move(row));
      }
      out["tsv"] = render_class(report);
      reply(res, 200, out);
    }));

    server.Get("/api/v1/stats/tasks", guarded([this](const Principal& who,
                                                     const httplib::Request& req,
                                                     httplib::Response& res) {
      const std::string user =
          req.has_param("user") ? req.get_param_value("user") : who.user_id;
      std::optional<std::string> test;
      if (req.has_param("test")) test = req.get_param_value("test");
      const auto rows = service.tasks(who, user, test);
      Json out = envelope();
      out["rows"] = Json::array();
      for (const auto& r : rows) out["rows"].push_back(to_json(r));
      out["tsv"] = render_tasks(rows);
      reply(res, 200, out);
    }));
  }
};

ApiServer::ApiServer(TutorService& service, const TokenStore& tokens)
    : impl_(std::make_unique<Impl>(service, tokens)) {
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::serve() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

bool ApiServer::running() const { return impl_->server.is_running(); }

}  // namespace corpus_tutor
