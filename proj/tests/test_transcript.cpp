#include <doctest.h>

#include <string>

#include "qotsim/transcript.hpp"

using namespace qotsim;

namespace {

ProtocolTranscript sample_transcript() {
  ProtocolTranscript t;
  TranscriptEvent begin;
  begin.seq = 0;
  begin.phase = Phase::begin;
  begin.actor = Actor::harness;
  begin.payload.emplace_back("protocol", std::string("b"));
  begin.payload.emplace_back("rounds", std::int64_t{12});
  t.events.push_back(begin);

  TranscriptEvent decode;
  decode.seq = 1;
  decode.phase = Phase::decode;
  decode.actor = Actor::bob;
  decode.payload.emplace_back("round", std::int64_t{0});
  decode.payload.emplace_back("outcome", std::int64_t{2});
  decode.payload.emplace_back("aborted", true);
  t.events.push_back(decode);

  TranscriptEvent outcome;
  outcome.seq = 2;
  outcome.phase = Phase::outcome;
  outcome.actor = Actor::harness;
  outcome.payload.emplace_back("abort", std::string("bob-measurement"));
  t.events.push_back(outcome);
  return t;
}

}  // namespace

TEST_CASE("phase and actor names round-trip") {
  for (Phase phase : {Phase::begin, Phase::prepare, Phase::process, Phase::decode,
                      Phase::check_pick, Phase::reveal_request, Phase::reveal, Phase::check,
                      Phase::useful_mark, Phase::set_check, Phase::admissible,
                      Phase::encode_pick, Phase::encode, Phase::outcome}) {
    CHECK(phase_from_name(phase_name(phase)) == phase);
  }
  for (Actor actor : {Actor::harness, Actor::alice, Actor::bob}) {
    CHECK(actor_from_name(actor_name(actor)) == actor);
  }
  CHECK_THROWS_AS(phase_from_name("no-such-phase"), std::invalid_argument);
  CHECK_THROWS_AS(actor_from_name("eve"), std::invalid_argument);
}

TEST_CASE("serialization round-trips bit-exactly") {
  const ProtocolTranscript t = sample_transcript();
  const std::string wire = to_jsonl(t);
  const ProtocolTranscript back = parse_jsonl(wire);
  CHECK(back == t);
  // Idempotent: re-serializing the parse gives the same bytes.
  CHECK(to_jsonl(back) == wire);
}

TEST_CASE("the wire format is one fixed-order object per line") {
  ProtocolTranscript t;
  TranscriptEvent ev;
  ev.seq = 0;
  ev.phase = Phase::check;
  ev.actor = Actor::alice;
  ev.payload.emplace_back("round", std::int64_t{3});
  ev.payload.emplace_back("ok", true);
  t.events.push_back(ev);
  CHECK(to_jsonl(t) ==
        "{\"seq\":0,\"phase\":\"check\",\"actor\":\"alice\",\"payload\":{\"round\":3,\"ok\":true}}\n");
}

TEST_CASE("parsing rejects malformed lines with their line number") {
  // Not JSON at all.
  CHECK_THROWS_WITH_AS(parse_jsonl("nonsense\n"), doctest::Contains("line 1"),
                       std::runtime_error);

  // Sequence numbers must be contiguous from zero.
  const std::string gap =
      "{\"seq\":0,\"phase\":\"begin\",\"actor\":\"harness\",\"payload\":{}}\n"
      "{\"seq\":2,\"phase\":\"outcome\",\"actor\":\"harness\",\"payload\":{}}\n";
  CHECK_THROWS_WITH_AS(parse_jsonl(gap), doctest::Contains("line 2"), std::runtime_error);

  // Unknown phase name.
  CHECK_THROWS_AS(
      parse_jsonl("{\"seq\":0,\"phase\":\"warp\",\"actor\":\"harness\",\"payload\":{}}\n"),
      std::runtime_error);

  // Floating-point payloads are banned from the wire.
  CHECK_THROWS_AS(
      parse_jsonl(
          "{\"seq\":0,\"phase\":\"begin\",\"actor\":\"harness\",\"payload\":{\"p\":0.5}}\n"),
      std::runtime_error);

  // Extra top-level fields are rejected.
  CHECK_THROWS_AS(
      parse_jsonl(
          "{\"seq\":0,\"phase\":\"begin\",\"actor\":\"harness\",\"payload\":{},\"x\":1}\n"),
      std::runtime_error);

  // Missing payload.
  CHECK_THROWS_AS(parse_jsonl("{\"seq\":0,\"phase\":\"begin\",\"actor\":\"harness\"}\n"),
                  std::runtime_error);
}

TEST_CASE("empty input parses to an empty transcript") {
  const ProtocolTranscript t = parse_jsonl("");
  CHECK(t.events.empty());
  CHECK(to_jsonl(t).empty());
}
