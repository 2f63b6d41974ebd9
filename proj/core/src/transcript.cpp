#include "qotsim/transcript.hpp"

#include <array>
#include <stdexcept>

#include <json.hpp>

namespace qotsim {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::array<const char*, 14> kPhaseNames = {
    "begin",  "prepare",     "process",    "decode",      "check_pick",
    "reveal_request", "reveal", "check",   "useful_mark", "set_check",
    "admissible", "encode_pick", "encode", "outcome",
};

constexpr std::array<const char*, 3> kActorNames = {"harness", "alice", "bob"};

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("transcript line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string phase_name(Phase phase) {
  const auto i = static_cast<std::size_t>(phase);
  if (i >= kPhaseNames.size()) throw std::invalid_argument("phase_name: unknown phase");
  return kPhaseNames[i];
}

Phase phase_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (name == kPhaseNames[i]) return static_cast<Phase>(i);
  }
  throw std::invalid_argument("phase_from_name: unknown phase '" + std::string(name) + "'");
}

std::string actor_name(Actor actor) {
  const auto i = static_cast<std::size_t>(actor);
  if (i >= kActorNames.size()) throw std::invalid_argument("actor_name: unknown actor");
  return kActorNames[i];
}

Actor actor_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActorNames.size(); ++i) {
    if (name == kActorNames[i]) return static_cast<Actor>(i);
  }
  throw std::invalid_argument("actor_from_name: unknown actor '" + std::string(name) + "'");
}

std::string to_jsonl(const ProtocolTranscript& transcript) {
  std::string out;
  for (const TranscriptEvent& ev : transcript.events) {
    ordered_json j;
    j["seq"] = ev.seq;
    j["phase"] = phase_name(ev.phase);
    j["actor"] = actor_name(ev.actor);
    ordered_json payload = ordered_json::object();
    for (const auto& [key, value] : ev.payload) {
      std::visit([&](const auto& v) { payload[key] = v; }, value);
    }
    j["payload"] = std::move(payload);
    out += j.dump();
    out += '\n';
  }
  return out;
}

ProtocolTranscript parse_jsonl(std::string_view text) {
  ProtocolTranscript transcript;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;

    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      parse_fail(line_no, std::string("invalid JSON (") + e.what() + ")");
    }
    if (!j.is_object()) parse_fail(line_no, "not a JSON object");
    for (const char* field : {"seq", "phase", "actor", "payload"}) {
      if (!j.contains(field)) parse_fail(line_no, std::string("missing field '") + field + "'");
    }
    if (j.size() != 4) parse_fail(line_no, "unexpected extra field");
    if (!j["seq"].is_number_unsigned()) parse_fail(line_no, "seq must be a non-negative integer");
    if (!j["phase"].is_string() || !j["actor"].is_string()) {
      parse_fail(line_no, "phase and actor must be strings");
    }
    if (!j["payload"].is_object()) parse_fail(line_no, "payload must be an object");

    TranscriptEvent ev;
    ev.seq = j["seq"].get<std::uint32_t>();
    if (ev.seq != transcript.events.size()) parse_fail(line_no, "seq out of order");
    try {
      ev.phase = phase_from_name(j["phase"].get<std::string>());
      ev.actor = actor_from_name(j["actor"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      parse_fail(line_no, e.what());
    }
    for (const auto& [key, value] : j["payload"].items()) {
      if (value.is_boolean()) {
        ev.payload.emplace_back(key, value.get<bool>());
      } else if (value.is_number_integer() && !value.is_number_float()) {
        ev.payload.emplace_back(key, value.get<std::int64_t>());
      } else if (value.is_string()) {
        ev.payload.emplace_back(key, value.get<std::string>());
      } else {
        parse_fail(line_no, "payload value for '" + key + "' must be int, bool, or string");
      }
    }
    transcript.events.push_back(std::move(ev));
  }
  return transcript;
}

}  // namespace qotsim
