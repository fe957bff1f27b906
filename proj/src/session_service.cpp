#include "bookie/session_service.hpp"

#include "bookie/json_out.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace bookie {

struct SessionStore::Session {
  Session(std::string id_, Engine e, double g) : id(std::move(id_)), engine(std::move(e)), gamma(g) {}

  std::mutex mu;  // serializes bets; readers take it briefly
  std::string id;
  Engine engine;
  double gamma;
  OddsVector next_odds;  // empty once the game is over
  std::vector<RoundRecord> history;
  std::atomic<std::chrono::steady_clock::rep> last_used{0};
};

namespace {

using json = nlohmann::json;

ServiceResponse error(int status, std::string_view code, std::string_view detail) {
  JsonWriter w;
  w.begin_object().field("error", code).field("detail", detail).end_object();
  return {status, w.str()};
}

std::optional<json> parse_body(std::string_view body) {
  json j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

// Integer-valued JSON number, else nullopt.
std::optional<long long> as_integer(const json& j) {
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  return std::nullopt;
}

void write_state(JsonWriter& w, const Engine& e) {
  const auto& st = e.state();
  w.field("s", st.s).field("v", e.residual_vector()).field("L", st.L);
}

void write_next_odds(JsonWriter& w, const OddsVector& r, double gamma) {
  w.field("r_next", r).field("gamma_odds", apply_overround(r, gamma));
}

double max_of(const std::vector<double>& x) { return *std::max_element(x.begin(), x.end()); }

}  // namespace

SessionStore::SessionStore(ServiceOptions options) : opt_(std::move(options)) {
  std::random_device rd;
  salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string SessionStore::next_id() {
  // Counter through a splitmix step: unique per process, not guessable in sequence.
  std::uint64_t z = (++counter_) * 0x9E3779B97F4A7C15ULL ^ salt_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(z));
  return buf;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(mu_);
  return sessions_.size();
}

std::size_t SessionStore::evict_expired() {
  const auto now = opt_.clock().time_since_epoch().count();
  const auto ttl = std::chrono::duration_cast<std::chrono::steady_clock::duration>(opt_.ttl).count();
  std::unique_lock lock(mu_);
  return std::erase_if(sessions_, [&](const auto& kv) { return now - kv.second->last_used.load() > ttl; });
}

ServiceResponse SessionStore::create_game(std::string_view body) {
  evict_expired();
  const auto j = parse_body(body);
  if (!j) return error(400, "bad_request", "body must be a JSON object");
  if (!j->contains("K") || !j->contains("T")) return error(400, "bad_request", "K and T are required");
  const auto K = as_integer(j->at("K"));
  const auto T = as_integer(j->at("T"));
  if (!K || *K < 1 || *K > kServiceMaxK) return error(400, "bad_request", "K must be an integer in [1, 64]");
  if (!T || *T < 1 || *T > kServiceMaxT) {
    return error(400, "bad_request", "T must be an integer in [1, 1000000]");
  }
  double gamma = 1.0;
  if (j->contains("gamma")) {
    if (!j->at("gamma").is_number()) return error(400, "bad_request", "gamma must be a number");
    gamma = j->at("gamma").get<double>();
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) return error(400, "bad_request", "gamma must be >= 1");
  }
  EngineMode mode = EngineMode::exact();
  const std::string mode_name = j->value("mode", std::string("exact"));
  if (mode_name == "epsilon") {
    double eps = 1.0 / static_cast<double>(*T);
    if (j->contains("epsilon")) {
      if (!j->at("epsilon").is_number()) return error(400, "bad_request", "epsilon must be a number");
      eps = j->at("epsilon").get<double>();
    }
    try {
      mode = EngineMode::with_epsilon(eps);
    } catch (const Error& e) {
      return error(400, "bad_request", e.what());
    }
  } else if (mode_name != "exact") {
    return error(400, "bad_request", "mode must be \"exact\" or \"epsilon\"");
  }

  std::shared_ptr<Session> s;
  try {
    Engine e = Engine::create(static_cast<int>(*K), static_cast<int>(*T), mode);
    const OddsVector r = e.quote_first();
    std::unique_lock lock(mu_);
    s = std::make_shared<Session>(next_id(), std::move(e), gamma);
    s->next_odds = r;
    s->last_used = opt_.clock().time_since_epoch().count();
    sessions_.emplace(s->id, s);
  } catch (const NoRealRootInBracket& e) {
    return error(422, "numeric", e.what());
  }

  const auto& st = s->engine.state();
  JsonWriter w;
  w.begin_object().field("id", s->id).field("K", st.K).field("T", st.T).field("gamma", gamma);
  w.field("mode", mode.name());
  if (!mode.is_exact()) w.field("epsilon", mode.epsilon);
  w.field("t", st.t).field("r1", s->next_odds).field("gamma_odds", apply_overround(s->next_odds, gamma));
  write_state(w, s->engine);
  w.field("H", st.T).field("done", false).end_object();
  return {201, w.str()};
}

ServiceResponse SessionStore::place_bet(const std::string& id, std::string_view body) {
  const auto s = find(id);
  if (!s) return error(404, "not_found", "no game with id " + id);
  // One bet at a time per session; a competing request is told to retry.
  std::unique_lock lock(s->mu, std::try_to_lock);
  if (!lock.owns_lock()) return error(409, "busy", "another bet on this game is in progress");
  s->last_used = opt_.clock().time_since_epoch().count();
  Engine& e = s->engine;
  if (e.state().done) return error(409, "game_over", "all rounds have been played");

  const auto j = parse_body(body);
  if (!j) return error(400, "bad_request", "body must be a JSON object");
  const int round = e.state().t;
  if (j->contains("t")) {
    const auto t = as_integer(j->at("t"));
    if (!t) return error(400, "bad_request", "t must be an integer");
    if (*t != round) {
      return error(409, "round_mismatch", "next round is " + std::to_string(round));
    }
  }
  if (!j->contains("q") || !j->at("q").is_array()) {
    return error(422, "invalid_bet", "q must be an array of numbers");
  }
  std::vector<double> raw;
  for (const auto& x : j->at("q")) {
    if (!x.is_number()) return error(422, "invalid_bet", "q must be an array of numbers");
    raw.push_back(x.get<double>());
  }

  std::vector<double> q;
  std::optional<OddsVector> next;
  const OddsVector r = s->next_odds;
  try {
    q = validate_bet(raw, e.state().K);
    next = e.observe_and_quote(q);
  } catch (const InvalidBet& ex) {
    return error(422, "invalid_bet", ex.what());
  } catch (const NoRealRootInBracket& ex) {
    return error(422, "numeric", ex.what());
  }
  const RoundRecord rec = make_round_record(e, r, q);
  s->history.push_back(rec);
  s->next_odds = next ? *next : OddsVector{};

  if (!opt_.audit_dir.empty()) {
    std::ofstream out(std::filesystem::path(opt_.audit_dir) / (s->id + ".jsonl"), std::ios::app);
    out << round_record_json(rec) << '\n';
    if (!out) std::cerr << "audit write failed for game " << s->id << '\n';
  }

  const auto& st = e.state();
  JsonWriter w;
  w.begin_object().field("t", rec.t).field("r", r).field("q", q);
  write_state(w, e);
  w.field("H", rec.H).field("payouts", e.payouts()).field("done", st.done);
  if (next) {
    write_next_odds(w, *next, s->gamma);
  } else {
    const double loss = max_of(e.payouts());
    w.field("realized_loss", loss).field("profit", st.T - loss / s->gamma);
  }
  w.end_object();
  return {200, w.str()};
}

ServiceResponse SessionStore::get_game(const std::string& id) {
  const auto s = find(id);
  if (!s) return error(404, "not_found", "no game with id " + id);
  std::lock_guard lock(s->mu);
  const Engine& e = s->engine;
  const auto& st = e.state();
  const int played = static_cast<int>(s->history.size());
  JsonWriter w;
  w.begin_object().field("id", s->id).field("K", st.K).field("T", st.T).field("gamma", s->gamma);
  w.field("mode", st.mode.name());
  if (!st.mode.is_exact()) w.field("epsilon", st.mode.epsilon);
  w.field("rounds_played", played).field("done", st.done);
  write_state(w, e);
  w.field("H", st.T - played).field("payouts", e.payouts());
  if (!st.done) write_next_odds(w, s->next_odds, s->gamma);
  w.key("history").begin_array();
  for (const auto& rec : s->history) w.raw(round_record_json(rec));
  w.end_array().end_object();
  return {200, w.str()};
}

ServiceResponse SessionStore::get_transcript(const std::string& id) {
  const auto s = find(id);
  if (!s) return error(404, "not_found", "no game with id " + id);
  std::lock_guard lock(s->mu);
  std::string out;
  for (const auto& rec : s->history) out += round_record_json(rec) + '\n';
  return {200, out, "application/x-ndjson"};
}

SessionServer::SessionServer(ServiceOptions options)
    : store_(options), http_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  // httplib defaults to SO_REUSEPORT, which lets a second server share the port.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  http_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  http_->Post("/games", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store_.create_game(req.body));
  });
  http_->Post(R"(/games/([0-9a-f]+)/bets)", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store_.place_bet(req.matches[1], req.body));
  });
  http_->Get(R"(/games/([0-9a-f]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, store_.get_game(req.matches[1]));
  });
  http_->Get(R"(/games/([0-9a-f]+)/transcript)",
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, store_.get_transcript(req.matches[1]));
             });
  http_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      JsonWriter w;
      w.begin_object().field("error", res.status == 404 ? "not_found" : "http_error");
      w.field("detail", httplib::status_message(res.status)).end_object();
      res.set_content(w.str(), "application/json");
    }
  });
  if (options.cors) {
    http_->set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", "*");
    });
    http_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
  }
}

SessionServer::~SessionServer() = default;

int SessionServer::bind(const std::string& host, int port) {
  if (port == 0) return http_->bind_to_any_port(host);
  return http_->bind_to_port(host, port) ? port : -1;
}

bool SessionServer::listen() { return http_->listen_after_bind(); }

void SessionServer::stop() { http_->stop(); }

void SessionServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace bookie
