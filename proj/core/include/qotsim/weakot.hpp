#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qotsim/cks.hpp"
#include "qotsim/codeword.hpp"
#include "qotsim/transcript.hpp"

namespace qotsim {

enum class AbortReason {
  none,
  bob_measurement,       // a decode measurement landed in the reject outcome
  check_mismatch,        // a revealed value contradicted a decoded bit
  set_violation,         // announced values cannot come from the codeword set
  no_useful_run,         // no run survived as an encoding candidate
  admissibility_failure, // no unchecked run admissible for encoding
};

const char* abort_reason_name(AbortReason reason);

struct ProtocolConfig {
  int k = 4;  // triple count; the triple protocol uses n = 3k runs
  int n = 3;  // run count for the general protocol
  int m = 2;  // checked runs per execution (general protocol)
  // Alice's two secret target bits; drawn uniformly at run time when unset.
  std::optional<BitPair> targets;
  bool record_transcript = false;
};

struct RunOutcome {
  bool completed = false;
  AbortReason abort = AbortReason::none;
  BitPair targets;
  int alice_b_guess = 0;
  bool alice_definite_b = false;
  std::string alice_record;
  int encoding_round = -1;            // -1 when the execution never encoded
  std::optional<int> bob_true_b;      // committed index of the encoding run
  std::optional<int> bob_target_bit;  // the target bit Bob decodes
  std::optional<int> bob_other_guess; // curious Bob's estimate of the other target
};

struct RunResult {
  RunOutcome outcome;
  ProtocolTranscript transcript;  // empty unless config.record_transcript
};

// Draws an m-element subset of {0..n-1}, returned ascending.  Consumes
// exactly m bounded draws from the generator regardless of the result, so
// drivers that share this routine stay aligned on a common seed.
std::vector<int> draw_checked_subset(Rng& rng, int n, int m);

// True when pinning run `candidate` of a value string to 0 and to 1 leaves
// equally many (and at least one) codeword completions under both strings'
// already-announced pins.  A completed transfer must encode on such a run,
// otherwise the revealed pattern itself would bias the committed index.
bool a5_admissible(const CodewordSet& set,
                   std::span<const std::pair<int, int>> pins_x0,
                   std::span<const std::pair<int, int>> pins_x1, int candidate);

// Triple-based transfer: k triples of runs, two runs of each triple checked,
// encoding on the held-out run of a uniformly chosen useful triple, and the
// held-out runs of all other useful triples revealed afterwards.
RunResult run_protocol_b(const ProtocolConfig& cfg, AliceStrategy& alice, BobStrategy& bob,
                         Rng& rng);

// General codeword-set transfer: n runs, m checked, encoding on a uniformly
// chosen admissible unchecked run.
RunResult run_protocol_a(const ProtocolConfig& cfg, const CodewordSet& set, AliceStrategy& alice,
                         BobStrategy& bob, Rng& rng);

}  // namespace qotsim
