#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "qotsim/cks.hpp"

namespace qotsim {

// ───────────────────────── Alice ─────────────────────────

// Follows the protocol: draws value strings from the codeword set, applies
// the phase gate, reveals truthfully, encodes d_j = target_j xor x_j, and
// guesses Bob's index with a coin.
std::unique_ptr<AliceStrategy> make_honest_alice();
// Same, but with fixed per-run value pairs (bare rounds and tests).
std::unique_ptr<AliceStrategy> make_honest_alice(std::vector<BitPair> pairs);

// Measures every carrier in the computational basis instead of encoding.
// Outcomes 0/1 betray Bob's index outright; outcome 2 leaves a coin flip.
std::unique_ptr<AliceStrategy> make_basis_attack_alice();

// Entangles each triple's carriers with a six-qubit control register holding
// a superposition of all codeword pairs, so every classical answer is read
// off the register by measurement instead of being fixed in advance.
// Announced checks pass with certainty; the final plus/minus readout of the
// encoding run's control pair identifies Bob's index with probability 1/2
// and leaves a fair coin otherwise.
std::unique_ptr<AliceStrategy> make_collective_triple_alice();

// Cut-down collective cheat: one uniformly placed run per triple carries the
// controlled phase with a two-qubit register, the other two runs are honest
// zeros.  Cheaper, but checked quantum runs survive as useful only a quarter
// of the time, which skews the encoding mix toward quantum runs.
std::unique_ptr<AliceStrategy> make_one_pair_collective_alice();

// Maps a channel branch index to the value pair announced if that run is
// checked.  The default announces (0, 0) regardless of branch.
using AnnounceRule = std::function<BitPair(int branch)>;

// The measure-and-resend channel: Kraus elements |m><m| on one qutrit.
const KrausChannel& computational_basis_channel();

// Applies `channel` to the carriers of `cheat_count` uniformly drawn runs
// (honest zeros elsewhere).  If the encoding lands on a cheat run whose
// recorded branch is 0 or 1, that branch is Bob's index; otherwise a coin.
std::unique_ptr<AliceStrategy> make_channel_attack_alice(const KrausChannel& channel,
                                                         int cheat_count,
                                                         AnnounceRule announce = {});
// Same, with explicit cheat run indices.
std::unique_ptr<AliceStrategy> make_channel_attack_alice(const KrausChannel& channel,
                                                         std::vector<int> cheat_runs,
                                                         AnnounceRule announce = {});

// ───────────────────────── Bob ─────────────────────────

std::unique_ptr<BobStrategy> make_honest_bob();

// Plays honestly but, after a completed transfer, measures the encoding
// run's carriers to estimate the value bit of the index he did not commit
// to.  The two hypothesis states coincide for this scheme, so the estimate
// degenerates to a fair coin; the Helstrom measurement path stays in place
// for any scheme where they differ.
std::unique_ptr<BobStrategy> make_curious_bob();

// The two-control phase gate used by the collective cheats, exposed for
// direct inspection: |g0 g1><g0 g1| (x) diag((-1)^g0, (-1)^g1, 1).
const Operator& controlled_phase_unitary();

}  // namespace qotsim
