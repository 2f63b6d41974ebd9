#include "qotsim/weakot.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qotsim {

namespace {

using I64 = std::int64_t;

// Appends events only when a sink is attached, so estimation loops pay
// nothing for the wire format.
class Recorder {
 public:
  explicit Recorder(ProtocolTranscript* sink) : sink_(sink) {}

  template <class Fill>
  void emit(Phase phase, Actor actor, Fill&& fill) {
    if (sink_ == nullptr) return;
    TranscriptEvent ev;
    ev.seq = static_cast<std::uint32_t>(sink_->events.size());
    ev.phase = phase;
    ev.actor = actor;
    fill(ev.payload);
    sink_->events.push_back(std::move(ev));
  }

 private:
  ProtocolTranscript* sink_;
};

void require_bit_value(int v, const char* what) {
  if (v != 0 && v != 1) {
    throw std::logic_error(std::string(what) + " produced a non-bit value");
  }
}

// Shared state of one execution while it is being driven.
struct Execution {
  Registry reg;
  Recorder rec;
  RunResult result;
  std::vector<int> b;
  std::vector<int> v;
  std::vector<PreparedRound> carriers;
  std::vector<BitPair> announced;

  explicit Execution(ProtocolTranscript* sink) : rec(sink) {}
};

// Runs the transfer rounds themselves: Bob prepares, Alice processes, Bob
// decodes.  Returns false on a decode reject.
bool drive_rounds(Execution& ex, int n, AliceStrategy& alice, BobStrategy& bob, Rng& rng) {
  ex.b.resize(n);
  ex.v.assign(n, 0);
  ex.carriers.resize(n);
  ex.announced.assign(n, BitPair{});
  for (int i = 0; i < n; ++i) {
    ex.b[i] = bob.choose_b(rng, i);
    require_bit_value(ex.b[i], "BobStrategy::choose_b");
    ex.carriers[i] = bob_prepare(ex.reg, ex.b[i]);
    ex.rec.emit(Phase::prepare, Actor::bob,
                [&](Payload& p) { p.emplace_back("round", I64{i}); });
    alice.on_round(ex.reg, rng, i, ex.carriers[i].beta);
    if (ex.reg.owner_of(ex.carriers[i].beta) != Party::bob) {
      throw std::logic_error("run_protocol: strategy kept the carrier instead of returning it");
    }
    ex.rec.emit(Phase::process, Actor::alice,
                [&](Payload& p) { p.emplace_back("round", I64{i}); });
    const Decode d = bob_decode(ex.reg, rng, ex.b[i], ex.carriers[i].beta,
                                ex.carriers[i].beta_prime);
    ex.rec.emit(Phase::decode, Actor::bob, [&](Payload& p) {
      p.emplace_back("round", I64{i});
      p.emplace_back("b", I64{ex.b[i]});
      p.emplace_back("outcome", I64{static_cast<int>(d)});
    });
    if (d == Decode::abort) return false;
    ex.v[i] = static_cast<int>(d);
  }
  return true;
}

// Asks Alice for run `run`'s value pair and verifies the bit Bob decoded.
bool reveal_and_check(Execution& ex, AliceStrategy& alice, Rng& rng, int run) {
  ex.rec.emit(Phase::reveal_request, Actor::bob,
              [&](Payload& p) { p.emplace_back("round", I64{run}); });
  const BitPair a = alice.on_reveal(ex.reg, rng, run);
  require_bit_value(a.x0, "AliceStrategy::on_reveal");
  require_bit_value(a.x1, "AliceStrategy::on_reveal");
  ex.announced[run] = a;
  ex.rec.emit(Phase::reveal, Actor::alice, [&](Payload& p) {
    p.emplace_back("round", I64{run});
    p.emplace_back("x0", I64{a.x0});
    p.emplace_back("x1", I64{a.x1});
  });
  const bool ok = a.bit(ex.b[run]) == ex.v[run];
  ex.rec.emit(Phase::check, Actor::bob, [&](Payload& p) {
    p.emplace_back("round", I64{run});
    p.emplace_back("ok", ok);
  });
  return ok;
}

// Final bookkeeping shared by both drivers.  Alice's guess is collected even
// on aborted executions: a cheating Alice learns from aborts too, and the
// estimators decide which executions count.
RunResult seal(Execution& ex, AliceStrategy& alice, Rng& rng, AbortReason reason) {
  RunOutcome& out = ex.result.outcome;
  out.abort = reason;
  out.completed = (reason == AbortReason::none);
  out.alice_b_guess = alice.guess_b(rng);
  require_bit_value(out.alice_b_guess, "AliceStrategy::guess_b");
  out.alice_definite_b = alice.definite_b();
  out.alice_record = alice.record();
  ex.rec.emit(Phase::outcome, Actor::harness, [&](Payload& p) {
    p.emplace_back("completed", out.completed);
    p.emplace_back("abort_reason", std::string(abort_reason_name(reason)));
    p.emplace_back("encoding_round", I64{out.encoding_round});
    p.emplace_back("alice_guess", I64{out.alice_b_guess});
    p.emplace_back("target_bit", I64{out.bob_target_bit ? *out.bob_target_bit : -1});
  });
  return std::move(ex.result);
}

// Encoding step shared by both drivers: Bob names the run, Alice announces
// (d0, d1), Bob decodes his target bit, and a curious Bob estimates the other.
void encode_on(Execution& ex, AliceStrategy& alice, BobStrategy& bob, Rng& rng, int enc,
               BitPair targets) {
  RunOutcome& out = ex.result.outcome;
  out.encoding_round = enc;
  ex.rec.emit(Phase::encode_pick, Actor::bob,
              [&](Payload& p) { p.emplace_back("round", I64{enc}); });
  const BitPair d = alice.on_encode(ex.reg, rng, enc, targets);
  require_bit_value(d.x0, "AliceStrategy::on_encode");
  require_bit_value(d.x1, "AliceStrategy::on_encode");
  ex.rec.emit(Phase::encode, Actor::alice, [&](Payload& p) {
    p.emplace_back("d0", I64{d.x0});
    p.emplace_back("d1", I64{d.x1});
  });
  const int b_enc = ex.b[enc];
  out.bob_true_b = b_enc;
  out.bob_target_bit = d.bit(b_enc) ^ ex.v[enc];
  if (bob.curious()) {
    const auto guess = bob.guess_other_x(ex.reg, rng, ex.carriers[enc].beta,
                                         ex.carriers[enc].beta_prime, b_enc, ex.v[enc]);
    if (guess) {
      require_bit_value(*guess, "BobStrategy::guess_other_x");
      out.bob_other_guess = d.bit(1 - b_enc) ^ *guess;
    }
  }
}

}  // namespace

const char* abort_reason_name(AbortReason reason) {
  switch (reason) {
    case AbortReason::none: return "none";
    case AbortReason::bob_measurement: return "bob_measurement";
    case AbortReason::check_mismatch: return "check_mismatch";
    case AbortReason::set_violation: return "set_violation";
    case AbortReason::no_useful_run: return "no_useful_run";
    case AbortReason::admissibility_failure: return "admissibility_failure";
  }
  return "unknown";
}

std::vector<int> draw_checked_subset(Rng& rng, int n, int m) {
  if (n < 1 || m < 1 || m > n) {
    throw std::invalid_argument("draw_checked_subset: need 1 <= m <= n");
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int j = 0; j < m; ++j) {
    std::swap(idx[j], idx[j + rng.uniform_int(n - j)]);
  }
  std::vector<int> out(idx.begin(), idx.begin() + m);
  std::sort(out.begin(), out.end());
  return out;
}

bool a5_admissible(const CodewordSet& set, std::span<const std::pair<int, int>> pins_x0,
                   std::span<const std::pair<int, int>> pins_x1, int candidate) {
  for (const auto* pins : {&pins_x0, &pins_x1}) {
    std::vector<std::pair<int, int>> trial(pins->begin(), pins->end());
    trial.emplace_back(candidate, 0);
    const long zeros = set.count_completions(trial);
    trial.back().second = 1;
    const long ones = set.count_completions(trial);
    if (zeros != ones || zeros == 0) return false;
  }
  return true;
}

RunResult run_protocol_b(const ProtocolConfig& cfg, AliceStrategy& alice, BobStrategy& bob,
                         Rng& rng) {
  if (cfg.k < 1) throw std::invalid_argument("run_protocol_b: need at least one triple");
  const CodewordSet& set = CodewordSet::triples();
  const int n = 3 * cfg.k;

  Execution ex(nullptr);
  if (cfg.record_transcript) ex.rec = Recorder(&ex.result.transcript);
  RunOutcome& out = ex.result.outcome;
  out.targets = cfg.targets ? *cfg.targets : BitPair{rng.bit(), rng.bit()};

  ProtocolView view;
  view.kind = ProtocolKind::protocol_b;
  view.rounds = n;
  view.triples = cfg.k;
  view.checked_per_group = 2;
  view.codewords = &set;
  alice.begin(view, ex.reg, rng);
  ex.rec.emit(Phase::begin, Actor::harness, [&](Payload& p) {
    p.emplace_back("protocol", std::string("b"));
    p.emplace_back("rounds", I64{n});
    p.emplace_back("triples", I64{cfg.k});
  });

  if (!drive_rounds(ex, n, alice, bob, rng)) {
    return seal(ex, alice, rng, AbortReason::bob_measurement);
  }

  // Check two runs of every triple; a triple stays an encoding candidate only
  // when all four revealed bits are zero, and otherwise must open completely
  // and land inside the codeword set.
  std::vector<int> candidates;  // held-out runs of useful triples
  for (int t = 0; t < cfg.k; ++t) {
    const std::vector<int> checked = draw_checked_subset(rng, 3, 2);
    const int i3 = 3 * t + (3 - checked[0] - checked[1]);
    for (int c : checked) {
      ex.rec.emit(Phase::check_pick, Actor::bob, [&](Payload& p) {
        p.emplace_back("triple", I64{t});
        p.emplace_back("round", I64{3 * t + c});
      });
    }
    bool zeros = true;
    for (int c : checked) {
      const int run = 3 * t + c;
      if (!reveal_and_check(ex, alice, rng, run)) {
        return seal(ex, alice, rng, AbortReason::check_mismatch);
      }
      if (ex.announced[run].x0 != 0 || ex.announced[run].x1 != 0) zeros = false;
    }
    ex.rec.emit(Phase::useful_mark, Actor::bob, [&](Payload& p) {
      p.emplace_back("triple", I64{t});
      p.emplace_back("useful", zeros);
    });
    if (zeros) {
      candidates.push_back(i3);
      continue;
    }
    if (!reveal_and_check(ex, alice, rng, i3)) {
      return seal(ex, alice, rng, AbortReason::check_mismatch);
    }
    std::uint32_t w0 = 0;
    std::uint32_t w1 = 0;
    for (int j = 0; j < 3; ++j) {
      w0 = (w0 << 1) | static_cast<std::uint32_t>(ex.announced[3 * t + j].x0);
      w1 = (w1 << 1) | static_cast<std::uint32_t>(ex.announced[3 * t + j].x1);
    }
    const bool member = set.contains(w0) && set.contains(w1);
    ex.rec.emit(Phase::set_check, Actor::bob, [&](Payload& p) {
      p.emplace_back("triple", I64{t});
      p.emplace_back("x0", set.to_string(w0));
      p.emplace_back("x1", set.to_string(w1));
      p.emplace_back("ok", member);
    });
    if (!member) return seal(ex, alice, rng, AbortReason::set_violation);
  }

  if (candidates.empty()) return seal(ex, alice, rng, AbortReason::no_useful_run);
  const int enc = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
  encode_on(ex, alice, bob, rng, enc, out.targets);

  // Open the held-out runs of the remaining useful triples; Alice committed
  // to all-zero values there, so these checks keep the encoding run from
  // being the only one she must answer for.
  for (int run : candidates) {
    if (run == enc) continue;
    if (!reveal_and_check(ex, alice, rng, run)) {
      return seal(ex, alice, rng, AbortReason::check_mismatch);
    }
  }
  return seal(ex, alice, rng, AbortReason::none);
}

RunResult run_protocol_a(const ProtocolConfig& cfg, const CodewordSet& set, AliceStrategy& alice,
                         BobStrategy& bob, Rng& rng) {
  const int n = cfg.n;
  const int m = cfg.m;
  if (n < 2 || m < 1 || m >= n) {
    throw std::invalid_argument("run_protocol_a: need 1 <= m < n and n >= 2");
  }
  if (set.bits() != n) {
    throw std::invalid_argument("run_protocol_a: codeword set width does not match run count");
  }

  Execution ex(nullptr);
  if (cfg.record_transcript) ex.rec = Recorder(&ex.result.transcript);
  RunOutcome& out = ex.result.outcome;
  out.targets = cfg.targets ? *cfg.targets : BitPair{rng.bit(), rng.bit()};

  ProtocolView view;
  view.kind = ProtocolKind::protocol_a;
  view.rounds = n;
  view.checked_per_group = m;
  view.codewords = &set;
  alice.begin(view, ex.reg, rng);
  ex.rec.emit(Phase::begin, Actor::harness, [&](Payload& p) {
    p.emplace_back("protocol", std::string("a"));
    p.emplace_back("rounds", I64{n});
    p.emplace_back("checked", I64{m});
  });

  if (!drive_rounds(ex, n, alice, bob, rng)) {
    return seal(ex, alice, rng, AbortReason::bob_measurement);
  }

  const std::vector<int> checked = draw_checked_subset(rng, n, m);
  for (int run : checked) {
    ex.rec.emit(Phase::check_pick, Actor::bob,
                [&](Payload& p) { p.emplace_back("round", I64{run}); });
  }
  std::vector<std::pair<int, int>> pins0;
  std::vector<std::pair<int, int>> pins1;
  for (int run : checked) {
    if (!reveal_and_check(ex, alice, rng, run)) {
      return seal(ex, alice, rng, AbortReason::check_mismatch);
    }
    pins0.emplace_back(run, ex.announced[run].x0);
    pins1.emplace_back(run, ex.announced[run].x1);
  }
  const long c0 = set.count_completions(pins0);
  const long c1 = set.count_completions(pins1);
  const bool member = c0 >= 1 && c1 >= 1;
  ex.rec.emit(Phase::set_check, Actor::bob, [&](Payload& p) {
    p.emplace_back("x0_count", I64{c0});
    p.emplace_back("x1_count", I64{c1});
    p.emplace_back("ok", member);
  });
  if (!member) return seal(ex, alice, rng, AbortReason::set_violation);

  std::vector<int> candidates;
  for (int run = 0; run < n; ++run) {
    if (std::find(checked.begin(), checked.end(), run) != checked.end()) continue;
    const bool ok = a5_admissible(set, pins0, pins1, run);
    ex.rec.emit(Phase::admissible, Actor::bob, [&](Payload& p) {
      p.emplace_back("round", I64{run});
      p.emplace_back("ok", ok);
    });
    if (ok) candidates.push_back(run);
  }
  if (candidates.empty()) return seal(ex, alice, rng, AbortReason::admissibility_failure);

  const int enc = candidates[rng.uniform_int(static_cast<int>(candidates.size()))];
  encode_on(ex, alice, bob, rng, enc, out.targets);
  return seal(ex, alice, rng, AbortReason::none);
}

}  // namespace qotsim
