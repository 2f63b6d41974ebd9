#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qotsim {

// Classically observable steps of an execution, in protocol order.
enum class Phase {
  begin,
  prepare,
  process,
  decode,
  check_pick,
  reveal_request,
  reveal,
  check,
  useful_mark,
  set_check,
  admissible,
  encode_pick,
  encode,
  outcome,
};

enum class Actor { harness, alice, bob };

// Payload values are integers, booleans, or strings only; floating point is
// banned from the wire so round-trips are bit-exact by construction.
using PayloadValue = std::variant<std::int64_t, bool, std::string>;
using Payload = std::vector<std::pair<std::string, PayloadValue>>;

struct TranscriptEvent {
  std::uint32_t seq = 0;
  Phase phase = Phase::begin;
  Actor actor = Actor::harness;
  Payload payload;

  bool operator==(const TranscriptEvent&) const = default;
};

struct ProtocolTranscript {
  std::vector<TranscriptEvent> events;

  bool operator==(const ProtocolTranscript&) const = default;
};

std::string phase_name(Phase phase);
Phase phase_from_name(std::string_view name);
std::string actor_name(Actor actor);
Actor actor_from_name(std::string_view name);

// One JSON object per line, fields in the fixed order seq, phase, actor,
// payload; payload preserves key order.  parse_jsonl rejects malformed lines,
// unknown names, non-contiguous seq numbers, and floating-point payloads,
// reporting the offending line number.
std::string to_jsonl(const ProtocolTranscript& transcript);
ProtocolTranscript parse_jsonl(std::string_view text);

}  // namespace qotsim
