#pragma once

#include <optional>
#include <string>

#include "qotsim/registry.hpp"

namespace qotsim {

class CodewordSet;  // defined in codeword.hpp; strategies that sample it include that header

// One (x0, x1) value pair for a single run.
struct BitPair {
  int x0 = 0;
  int x1 = 0;

  int bit(int index) const { return index == 0 ? x0 : x1; }
  bool operator==(const BitPair&) const = default;
};

enum class ProtocolKind { cks_round, protocol_a, protocol_b };

// What a strategy learns about the execution before the first run.
struct ProtocolView {
  ProtocolKind kind = ProtocolKind::cks_round;
  int rounds = 1;              // n
  int triples = 0;             // k (protocol B only)
  int checked_per_group = 0;   // m
  const CodewordSet* codewords = nullptr;
};

// Alice's side of the transfer, honest or otherwise.  The driver owns the
// call order: begin, then per run on_round, then (driver-dependent) on_reveal /
// on_encode, and finally guess_b.  on_round receives the carrier subsystem
// with Alice as owner and must hand it back to Bob before returning.
class AliceStrategy {
 public:
  virtual ~AliceStrategy() = default;

  virtual void begin(const ProtocolView&, Registry&, Rng&) {}
  virtual void on_round(Registry& reg, Rng& rng, int round, Handle beta) = 0;
  // Announce the value pair of run `round`.
  virtual BitPair on_reveal(Registry& reg, Rng& rng, int round) = 0;
  // Announce (d0, d1) for the encoding run, aiming at the given target bits.
  virtual BitPair on_encode(Registry& reg, Rng& rng, int round, BitPair targets) = 0;
  // Final guess of Bob's committed index for the scoring run.  Callable after
  // begin at any point, including aborted executions.
  virtual int guess_b(Rng& rng) = 0;
  // True when the current guess is certain rather than a coin flip.
  virtual bool definite_b() const { return false; }
  // Free-form note for diagnostics (e.g. which branch an attack observed).
  virtual std::string record() const { return {}; }
};

// Bob's side.  The honest implementation picks b uniformly and keeps no
// post-decode state; a curious one may also estimate the untransferred value.
class BobStrategy {
 public:
  virtual ~BobStrategy() = default;

  virtual int choose_b(Rng& rng, int /*round*/) { return rng.bit(); }
  virtual bool curious() const { return false; }
  // Guess of the run-local value x_{1-b} after a successful decode; the
  // carrier pair is still registered and owned by Bob.  Returns nullopt when
  // the strategy does not estimate it.
  virtual std::optional<int> guess_other_x(Registry&, Rng&, Handle /*beta*/,
                                           Handle /*beta_prime*/, int /*b*/, int /*decoded*/) {
    return std::nullopt;
  }
};

// ───────────────────────── fixed round ingredients ─────────────────────────

// |phi_b> = (|bb> + |22>)/sqrt(2) on the carrier pair, and the orthogonal
// partner (|bb> - |22>)/sqrt(2) that Alice's phase produces (up to a global
// sign) when her value bit for index b is 1.
StateVector phi_state(int b);
StateVector phi_perp_state(int b);

// Alice's honest encoding gate: diag((-1)^x0, (-1)^x1, 1) on one qutrit.
const Operator& phase_unitary(int x0, int x1);

// Bob's three-outcome decode measurement {|phi_b>, |phi_b^perp>, rest} on the
// carrier pair.  Outcome indices match Decode below.
const ProjectiveSet& decode_set(int b);

enum class Decode { bit0 = 0, bit1 = 1, abort = 2 };

struct PreparedRound {
  Handle beta;        // travels to Alice
  Handle beta_prime;  // stays with Bob
};

// Bob allocates |phi_b> and sends the first qutrit to Alice.
PreparedRound bob_prepare(Registry& reg, int b);

// Bob's decode measurement; requires both carriers back in Bob's hands.
Decode bob_decode(Registry& reg, Rng& rng, int b, Handle beta, Handle beta_prime);

// ───────────────────────── bare-round driver ─────────────────────────

struct CksRound {
  int b = 0;
  Decode outcome = Decode::abort;
  int alice_guess = 0;
  bool alice_definite = false;
  std::optional<int> bob_guess;  // curious Bob's estimate of x_{1-b}
  std::string alice_record;
};

CksRound run_cks_round(AliceStrategy& alice, BobStrategy& bob, int b, Rng& rng);
CksRound run_cks_round(AliceStrategy& alice, int b, Rng& rng);

}  // namespace qotsim
