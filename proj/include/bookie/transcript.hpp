#pragma once

// Per-round game records, their JSON-lines form, and replay through a fresh
// engine.

#include "bookie/engine.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bookie {

/// One round. r: odds quoted for round t; q: the bet as applied; s and L:
/// engine state after the bet; H: rounds left after round t.
struct RoundRecord {
  int t = 0;
  OddsVector r;
  std::vector<double> q;
  std::vector<double> s;
  double L = 0.0;
  int H = 0;
};

/// {"t":..,"r":[..],"q":[..],"s":[..],"L":..,"H":..} on one line.
std::string round_record_json(const RoundRecord& rec);

/// Parses one line. Throws InvalidArgument on malformed input.
RoundRecord parse_round_record(std::string_view line);

/// Blank lines are skipped.
std::vector<RoundRecord> read_transcript_jsonl(std::istream& in);
void write_transcript_jsonl(std::ostream& out, const std::vector<RoundRecord>& rounds);

/// Builds the record for the round the engine has just observed.
RoundRecord make_round_record(const Engine& e, const OddsVector& r, const std::vector<double>& q);

struct ReplayReport {
  bool ok = true;
  int rounds = 0;
  int first_mismatch = 0;  // round number, 0 when none
  std::string detail;
};

/// Re-runs the recorded bets on a fresh engine (K from r, T from t + H) and
/// checks that every serialized field is reproduced exactly.
ReplayReport replay_transcript(const std::vector<RoundRecord>& rounds,
                               EngineMode mode = EngineMode::exact());

}  // namespace bookie
