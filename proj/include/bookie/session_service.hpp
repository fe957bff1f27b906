#pragma once

// JSON-over-HTTP game sessions for the browser UI and scripted clients.
//
//   POST /games                {K, T, gamma?, mode?, epsilon?}  -> 201
//   POST /games/{id}/bets      {q, t?}                          -> 200
//   GET  /games/{id}                                            -> 200
//   GET  /games/{id}/transcript (JSON lines)                    -> 200
//   GET  /healthz                                               -> 200
//
// Errors are {"error": code, "detail": text} with status 400, 404, 409 or 422.

#include "bookie/engine.hpp"
#include "bookie/transcript.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace httplib {
class Server;
}

namespace bookie {

inline constexpr int kServiceMaxK = 64;
inline constexpr int kServiceMaxT = 1'000'000;

struct ServiceOptions {
  std::chrono::seconds ttl{24 * 3600};
  bool cors = false;
  std::string audit_dir;  // one <id>.jsonl transcript per game when set
  std::function<std::chrono::steady_clock::time_point()> clock = [] {
    return std::chrono::steady_clock::now();
  };
};

struct ServiceResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// In-memory sessions. Handlers are plain functions of the request body so
/// they can be tested without sockets.
class SessionStore {
 public:
  explicit SessionStore(ServiceOptions options = {});

  ServiceResponse create_game(std::string_view body);
  ServiceResponse place_bet(const std::string& id, std::string_view body);
  ServiceResponse get_game(const std::string& id);
  ServiceResponse get_transcript(const std::string& id);

  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t evict_expired();
  std::size_t size() const;

 private:
  struct Session;

  std::shared_ptr<Session> find(const std::string& id) const;
  std::string next_id();

  ServiceOptions opt_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_ = 0;
};

/// Binds the routes of a SessionStore onto an HTTP server.
class SessionServer {
 public:
  explicit SessionServer(ServiceOptions options = {});
  ~SessionServer();

  /// Binds without serving; port 0 picks a free port. Returns the bound port
  /// or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

  SessionStore& store() { return store_; }

 private:
  SessionStore store_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace bookie
