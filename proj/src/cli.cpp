#include "bookie/cli.hpp"

#include "bookie/game_sim.hpp"
#include "bookie/json_out.hpp"
#include "bookie/oracle.hpp"
#include "bookie/session_service.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace bookie {

namespace {

struct IoFailure : Error {
  using Error::Error;
};

int parse_int(const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + text + "'");
  }
  if (used != text.size() || x != std::floor(x) || std::abs(x) > 2e9) {
    throw InvalidArgument("not an integer: '" + text + "'");
  }
  return static_cast<int>(x);
}

bool rational_env() {
  const char* v = std::getenv("BOOKIE_RATIONAL");
  return v && std::string(v) == "1";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string reports_json(std::string_view suite, const std::vector<CheckReport>& reps) {
  JsonWriter w;
  w.begin_object().field("suite", suite).field("pass", all_pass(reps)).key("checks").begin_array();
  for (const auto& r : reps) w.raw(r.to_json());
  w.end_array().end_object();
  return w.str();
}

EngineMode make_mode(const std::string& name, double eps, int T) {
  if (name == "exact") return EngineMode::exact();
  if (name == "epsilon") return eps > 0.0 ? EngineMode::with_epsilon(eps) : EngineMode::default_epsilon(T);
  throw InvalidArgument("mode must be exact or epsilon");
}

// ---- loss ----------------------------------------------------------------

struct LossArgs {
  int T = 0, K = 0, horizon = 0;
  std::string state;
  bool json = false;
  double tol = kDefaultRootTol;
};

int cmd_loss(const LossArgs& a, std::ostream& out) {
  JsonWriter w;
  double loss = 0.0;
  if (!a.state.empty()) {
    if (a.horizon < 1) throw InvalidArgument("--state needs --horizon >= 1");
    const std::vector<double> s = parse_state(a.state);
    loss = opportunistic_loss(a.horizon, s, a.tol);
    w.begin_object().field("loss", loss).field("horizon", a.horizon).field("state", s);
    w.field("poly_coeffs", biased_coeffs(a.horizon, s).coeffs()).end_object();
  } else {
    if (a.T < 1 || a.K < 1) throw InvalidArgument("--T and --K must be positive (or use --state)");
    loss = optimal_loss(a.T, a.K, a.tol);
    w.begin_object().field("T", a.T).field("K", a.K).field("loss", loss).field("regret", loss - a.T);
    w.field("poly_coeffs", opt_poly_coeffs<double>(a.T, a.K).coeffs()).end_object();
  }
  out << (a.json ? w.str() : format_real(loss)) << '\n';
  return kExitOk;
}

// ---- regret-table --------------------------------------------------------

int cmd_regret_table(const std::string& Ks, const std::string& Ts, bool csv, std::ostream& out) {
  const auto K_list = parse_int_list(Ks);
  const auto T_list = parse_int_list(Ts);
  const char* header[] = {"T", "K", "L", "R", "R_over_sqrtT", "beta_K", "A_K", "B_K"};
  if (csv) {
    for (int i = 0; i < 8; ++i) out << (i ? "," : "") << header[i];
    out << '\n';
  } else {
    out << std::left;
    for (const char* h : header) out << std::setw(h[0] == 'T' || h[0] == 'K' ? 9 : 22) << h;
    out << '\n';
  }
  for (int K : K_list) {
    if (K < 1) throw InvalidArgument("K must be positive");
    const double beta = regret_factor_asymptotic(K);
    const auto [A, B] = regret_factor_bounds(K);
    for (int T : T_list) {
      if (T < 1) throw InvalidArgument("T must be positive");
      const double R = regret(T, K);
      const double row[] = {static_cast<double>(T), static_cast<double>(K), T + R, R,
                            R / std::sqrt(static_cast<double>(T)), beta, A, B};
      for (int i = 0; i < 8; ++i) {
        if (csv) {
          out << (i ? "," : "") << format_real(row[i]);
        } else {
          out << std::setw(i < 2 ? 9 : 22) << format_real(row[i]);
        }
      }
      out << '\n';
    }
  }
  return kExitOk;
}

// ---- simulate ------------------------------------------------------------

struct SimArgs {
  int K = 2, T = 4, outcome = 0, games = 1;
  unsigned threads = 0;
  std::string gambler = "decisive-seeded", mode = "exact", transcript;
  std::uint64_t seed = 0;
  double gamma = 1.0, eps = 0.0;
  bool json = false;
};

int cmd_simulate(const SimArgs& a, std::ostream& out) {
  GameConfig c{a.K, a.T, a.gamma, make_mode(a.mode, a.eps, a.T), a.seed};
  const GamblerSpec g = GamblerSpec::parse(a.gambler, a.outcome);
  if (g.kind == GamblerKind::scripted) throw InvalidArgument("scripted gamblers are library-only");
  if (a.games > 1) {
    out << batch_csv(run_batch(c, g, a.games, a.threads));
    return kExitOk;
  }
  const Transcript tr = run_game(c, g);
  if (!a.transcript.empty()) {
    std::ofstream f(a.transcript);
    if (!f) throw IoFailure("cannot write " + a.transcript);
    write_transcript_jsonl(f, tr.rounds);
    if (!f) throw IoFailure("cannot write " + a.transcript);
  }
  const double loss = realized_loss(tr);
  const double opt = optimal_loss(a.T, a.K);
  if (a.json) {
    JsonWriter w;
    w.begin_object().field("K", a.K).field("T", a.T).field("gamma", a.gamma);
    w.field("mode", c.mode.name()).field("gambler", tr.gambler).field("seed", a.seed);
    w.key("rounds").begin_array();
    for (const auto& rec : tr.rounds) w.raw(round_record_json(rec));
    w.end_array().field("payouts", tr.payouts).field("realized_loss", loss);
    w.field("optimal_loss", opt).field("profit", bookmaker_profit(tr)).end_object();
    out << w.str() << '\n';
  } else {
    out << "realized_loss " << format_real(loss) << '\n'
        << "optimal_loss " << format_real(opt) << '\n'
        << "profit " << format_real(bookmaker_profit(tr)) << '\n';
  }
  return kExitOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
  std::string suite, replay, mode = "exact";
  int max_K = 0, max_T = 0, K = 3, T = 50, games = 0, instances = 1000;
  double eps = 0.0;
  std::uint64_t seed = 1;
  bool exact = false;
  std::vector<int> grids{100, 200, 400, 800};
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  if (!a.replay.empty()) {
    std::ifstream in(a.replay);
    if (!in) throw IoFailure("cannot read " + a.replay);
    const auto rounds = read_transcript_jsonl(in);
    const int T = rounds.empty() ? 1 : rounds.front().t + rounds.front().H;
    const ReplayReport rep = replay_transcript(rounds, make_mode(a.mode, a.eps, T));
    JsonWriter w;
    w.begin_object().field("replay", a.replay).field("mode", a.mode).field("pass", rep.ok);
    w.field("rounds", rep.rounds).field("first_mismatch", rep.first_mismatch);
    w.field("detail", rep.detail).end_object();
    out << w.str() << '\n';
    return rep.ok ? kExitOk : kExitVerifyFailed;
  }
  std::vector<CheckReport> reps;
  const std::string& s = a.suite;
  if (s == "identities") {
    reps = identity_suite(a.instances, a.seed, a.exact || rational_env());
  } else if (s == "frontier") {
    reps = frontier_suite(a.games ? a.games : 100, a.max_K ? a.max_K : 5, a.max_T ? a.max_T : 10, a.seed);
  } else if (s == "exhaustive") {
    reps = exhaustive_suite(a.max_K ? a.max_K : 4, a.max_T ? a.max_T : 6);
  } else if (s == "grid") {
    reps = grid_suite(a.grids);
  } else if (s == "epsilon") {
    reps = epsilon_suite(a.games ? a.games : 200, a.K, a.T, a.eps > 0.0 ? a.eps : 1.0 / a.T, a.seed);
  } else if (s.empty()) {
    throw InvalidArgument("verify needs --suite or --replay");
  } else {
    throw InvalidArgument("unknown suite '" + s + "'");
  }
  out << reports_json(s, reps) << '\n';
  return all_pass(reps) ? kExitOk : kExitVerifyFailed;
}

// ---- serve ---------------------------------------------------------------

SessionServer* g_server = nullptr;

extern "C" void on_stop_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& host, int port, bool cors, long ttl, const std::string& audit,
              std::ostream& out, std::ostream& err) {
  ServiceOptions opt;
  opt.cors = cors;
  opt.ttl = std::chrono::seconds(ttl);
  opt.audit_dir = audit;
  SessionServer server(opt);
  const int bound = server.bind(host, port);
  if (bound <= 0) {
    err << "error: cannot bind " << host << ':' << port << '\n';
    return kExitIo;
  }
  out << "listening on " << host << ':' << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_stop_signal);
  std::signal(SIGTERM, on_stop_signal);
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(part));
      continue;
    }
    const int lo = parse_int(part.substr(0, dots)), hi = parse_int(part.substr(dots + 2));
    if (hi < lo || hi - lo > 100000) throw InvalidArgument("bad range '" + part + "'");
    for (int i = lo; i <= hi; ++i) out.push_back(i);
  }
  if (out.empty()) throw InvalidArgument("empty list");
  return out;
}

std::vector<double> parse_state(const std::string& text) {
  const std::string src = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  const auto j = nlohmann::json::parse(src, nullptr, false);
  if (j.is_discarded() || !j.is_array() || j.empty()) {
    throw InvalidArgument("state must be a nonempty JSON array of numbers");
  }
  std::vector<double> s;
  for (const auto& x : j) {
    if (!x.is_number()) throw InvalidArgument("state must be a nonempty JSON array of numbers");
    s.push_back(x.get<double>());
  }
  return s;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimax bookmaker: losses, simulations, verification, service"};
  app.require_subcommand(1);

  LossArgs loss;
  auto* c_loss = app.add_subcommand("loss", "optimal loss for (T, K) or for a state with H rounds left");
  c_loss->add_option("--T", loss.T, "rounds");
  c_loss->add_option("--K", loss.K, "outcomes");
  c_loss->add_option("--state", loss.state, "payouts so far, JSON array or @file");
  c_loss->add_option("--horizon", loss.horizon, "rounds left");
  c_loss->add_option("--tol", loss.tol, "root tolerance");
  c_loss->add_flag("--json", loss.json, "emit {loss, regret, poly_coeffs}");

  std::string Ks = "2..4", Ts = "1,10,100,1000";
  bool csv = false;
  auto* c_table = app.add_subcommand("regret-table", "regret and Hermite factors over K and T");
  c_table->add_option("--K", Ks, "K values, e.g. 2..5 or 2,3,8");
  c_table->add_option("--T", Ts, "T values, e.g. 1,100,1e6");
  c_table->add_flag("--csv", csv, "CSV output");

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "play games against a scripted gambler");
  c_sim->add_option("--K", sim.K, "outcomes");
  c_sim->add_option("--T", sim.T, "rounds");
  c_sim->add_option("--gambler", sim.gambler,
                    "decisive-fixed|decisive-seeded|decisive-last-max|uniform|proportional-to-state|random");
  c_sim->add_option("--outcome", sim.outcome, "outcome for decisive-fixed (0-based)");
  c_sim->add_option("--seed", sim.seed, "seed");
  c_sim->add_option("--gamma", sim.gamma, "overround, >= 1");
  c_sim->add_option("--mode", sim.mode, "exact|epsilon");
  c_sim->add_option("--epsilon", sim.eps, "epsilon (default 1/T)");
  c_sim->add_option("--games", sim.games, "games; more than one prints a CSV batch");
  c_sim->add_option("--threads", sim.threads, "batch worker threads (0: all cores)");
  c_sim->add_option("--transcript", sim.transcript, "write the JSON-lines transcript here");
  c_sim->add_flag("--json", sim.json, "full JSON output");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "brute-force verification suites and transcript replay");
  c_ver->add_option("--suite", ver.suite, "identities|frontier|exhaustive|grid|epsilon");
  c_ver->add_option("--max-K", ver.max_K, "largest K");
  c_ver->add_option("--max-T", ver.max_T, "largest T");
  c_ver->add_option("--K", ver.K, "K for the epsilon suite");
  c_ver->add_option("--T", ver.T, "T for the epsilon suite");
  c_ver->add_option("--epsilon", ver.eps, "epsilon (default 1/T)");
  c_ver->add_option("--games", ver.games, "games for frontier and epsilon suites");
  c_ver->add_option("--instances", ver.instances, "fuzz instances per identity");
  c_ver->add_option("--seed", ver.seed, "seed");
  c_ver->add_option("--grids", ver.grids, "grid sizes for the grid suite");
  c_ver->add_flag("--exact", ver.exact, "rational arithmetic (also BOOKIE_RATIONAL=1)");
  c_ver->add_option("--replay", ver.replay, "transcript to replay");
  c_ver->add_option("--mode", ver.mode, "engine mode for --replay: exact|epsilon");

  std::string host = "127.0.0.1", audit;
  int port = 8080;
  long ttl = 24 * 3600;
  bool cors = false;
  auto* c_serve = app.add_subcommand("serve", "run the HTTP game service");
  c_serve->add_option("--port", port, "port, 0 for any free port");
  c_serve->add_option("--host", host, "address to bind");
  c_serve->add_flag("--cors", cors, "allow cross-origin requests");
  c_serve->add_option("--ttl", ttl, "idle session lifetime in seconds");
  c_serve->add_option("--audit-dir", audit, "append each game's transcript to <dir>/<id>.jsonl");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (c_loss->parsed()) return cmd_loss(loss, out);
    if (c_table->parsed()) return cmd_regret_table(Ks, Ts, csv, out);
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_ver->parsed()) return cmd_verify(ver, out);
    if (c_serve->parsed()) return cmd_serve(host, port, cors, ttl, audit, out, err);
  } catch (const NoRealRootInBracket& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const IoFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bookie
