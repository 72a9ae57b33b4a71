#pragma once

// HTTP binding of TutorService under /api/v1. Requests carry
// "Authorization: Bearer <token>"; bodies and responses are JSON objects
// with "version": 1. Errors come back as
// {"version": 1, "error": "<code>", "message": "..."} with a matching status.

#include <memory>
#include <string>

#include "corpus_tutor/error.hpp"
#include "corpus_tutor/service.hpp"

namespace corpus_tutor {

inline constexpr int kApiVersion = 1;

/// HTTP status used for an error code.
int http_status(ErrorCode code);

class ApiServer {
 public:
  ApiServer(TutorService& service, const TokenStore& tokens);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  bool serve();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace corpus_tutor
