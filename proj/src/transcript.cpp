#include "bookie/transcript.hpp"

#include "bookie/json_out.hpp"

#include <json.hpp>

#include <istream>
#include <ostream>

namespace bookie {

std::string round_record_json(const RoundRecord& rec) {
  JsonWriter w;
  w.begin_object()
      .field("t", rec.t)
      .field("r", rec.r)
      .field("q", rec.q)
      .field("s", rec.s)
      .field("L", rec.L)
      .field("H", rec.H)
      .end_object();
  return w.str();
}

namespace {

std::vector<double> real_array(const nlohmann::json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end() || !it->is_array()) {
    throw InvalidArgument(std::string("record field '") + name + "' must be an array");
  }
  std::vector<double> out;
  for (const auto& x : *it) {
    if (!x.is_number()) throw InvalidArgument(std::string("'") + name + "' must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

RoundRecord parse_round_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed transcript line: ") + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("transcript line is not an object");
  for (const char* name : {"t", "H"}) {
    if (!j.contains(name) || !j[name].is_number_integer()) {
      throw InvalidArgument(std::string("record field '") + name + "' must be an integer");
    }
  }
  if (!j.contains("L") || !j["L"].is_number()) throw InvalidArgument("record field 'L' missing");
  RoundRecord rec;
  rec.t = j["t"].get<int>();
  rec.H = j["H"].get<int>();
  rec.L = j["L"].get<double>();
  rec.r = real_array(j, "r");
  rec.q = real_array(j, "q");
  rec.s = real_array(j, "s");
  return rec;
}

std::vector<RoundRecord> read_transcript_jsonl(std::istream& in) {
  std::vector<RoundRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_round_record(line));
  }
  return out;
}

void write_transcript_jsonl(std::ostream& out, const std::vector<RoundRecord>& rounds) {
  for (const auto& rec : rounds) out << round_record_json(rec) << '\n';
}

RoundRecord make_round_record(const Engine& e, const OddsVector& r, const std::vector<double>& q) {
  const EngineState& st = e.state();
  RoundRecord rec;
  rec.t = st.done ? st.T : st.t - 1;
  rec.r = r;
  rec.q = q;
  rec.s = st.s;
  rec.L = st.L;
  rec.H = st.T - rec.t;
  return rec;
}

namespace {

bool same(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (format_real(a[i]) != format_real(b[i])) return false;
  }
  return true;
}

}  // namespace

ReplayReport replay_transcript(const std::vector<RoundRecord>& rounds, EngineMode mode) {
  ReplayReport rep;
  if (rounds.empty()) return rep;
  auto fail = [&](int t, std::string what) {
    rep.ok = false;
    rep.first_mismatch = t;
    rep.detail = "round " + std::to_string(t) + ": " + std::move(what);
    return rep;
  };
  const int K = static_cast<int>(rounds.front().r.size());
  const int T = rounds.front().t + rounds.front().H;
  if (K < 1 || T < 1) return fail(rounds.front().t, "cannot infer K and T");
  Engine e = Engine::create(K, T, mode);
  OddsVector r = e.quote_first();
  for (const auto& rec : rounds) {
    const int t = rep.rounds + 1;
    if (rec.t != t) return fail(rec.t, "expected round " + std::to_string(t));
    if (rec.t + rec.H != T) return fail(t, "horizon does not match T = " + std::to_string(T));
    if (!same(rec.r, r)) return fail(t, "odds differ");
    std::optional<OddsVector> next;
    try {
      next = e.observe_and_quote(rec.q);
    } catch (const Error& err) {
      return fail(t, err.what());
    }
    if (!same(rec.s, e.state().s)) return fail(t, "state vector differs");
    if (format_real(rec.L) != format_real(e.state().L)) return fail(t, "water level differs");
    ++rep.rounds;
    if (next) r = *next;
  }
  return rep;
}

}  // namespace bookie
