#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "qotsim/strategies.hpp"
#include "qotsim/weakot.hpp"

namespace qotsim {

// ─────────────────── scheme-level distinguishability ───────────────────

// Bob's carrier-pair state after an honest round, indexed [b][x0][x1].
using ConditionalStates = std::array<std::array<std::array<DensityMatrix, 2>, 2>, 2>;
ConditionalStates cks_conditional_states();

// Average distinguishability of the untransferred value bit (drives Bob's
// cheating floor) and summed fidelity between those same state pairs (drives
// Alice's cheating floor).
double delta_quantity(const ConditionalStates& states);
double f_quantity(const ConditionalStates& states);
double p_bob_bound(double delta);   // 1/2 + delta/8
double p_alice_bound(double f);     // 1/2 + f/16

// Trace-distance/fidelity sandwich for one state pair.
struct FvdgCheck {
  double trace_norm_distance = 0.0;  // ||rho - xi||_Tr
  double fidelity = 0.0;
  double lower_slack = 0.0;  // F - (1 - D/2)
  double upper_slack = 0.0;  // sqrt(1 - D^2/4) - F
  bool ok = false;
};
FvdgCheck fuchs_vdg_check(const DensityMatrix& a, const DensityMatrix& b);

// ─────────────────── reliability-preserving cheats ───────────────────

// A candidate cheat on Bob's side of a commitment-like subroutine: his
// ancilla ends in f0/f1 depending on his bit, f' is the reference vector the
// honest run would produce, and M = {m0, 1 - m0} is the later measurement
// whose outcome is published.
struct CheatUnitarySpec {
  Eigen::VectorXcd f0;
  Eigen::VectorXcd f1;
  Eigen::VectorXcd fprime;
  Eigen::MatrixXcd m0;
};

struct Theorem1Report {
  bool reliability_ok = false;         // every branch vanishes or is deterministic
  double view_distance = 0.0;          // trace distance of the two published views
  double pre_measurement_distance = 0.0;
  bool views_equal = false;            // view_distance within numerical zero
};

// Checks that a reliability-preserving cheat leaks nothing through the
// published measurement record: when every (f_b +- f')/2 branch either
// vanishes or fixes the outcome, the two views coincide exactly.
Theorem1Report theorem1_verify(const CheatUnitarySpec& spec);

// Draws a spec from the full reliability-1 family: f_b = +-(2 M_a - 1) f'
// with random a and sign, or the degenerate f_b = +-f'.
CheatUnitarySpec random_reliable_spec(Rng& rng);

// ─────────────────── closed-form bound arithmetic ───────────────────

// Exact per-round failure probability of a channel cheat that announces
// values by `announce` (default: zeros): the chance, averaged over Bob's
// index, that the run aborts or the announced bit contradicts the decode.
double epsilon_exact(const KrausChannel& channel, const AnnounceRule& announce = {});

// Ceiling on Alice's index-guessing success against measure-and-resend style
// cheats with per-round failure epsilon, at n runs.
double individual_bound(int n, double epsilon);

// Success ceilings for a cheat that touches a fraction p of the runs.
struct Decomposition {
  double p_i_cap = 0.0;   // encoding lands on a touched run
  double p_ii_cap = 0.0;  // encoding lands elsewhere
  double combined = 0.0;  // p * p_i_cap + (1 - p) * p_ii_cap
};
Decomposition p_decomposition(double p, int n, double epsilon);

// Success of a collective cheat that keeps per-triple usefulness pc.
double collective_formula(double p, double pc);

struct Wilson {
  double low = 0.0;
  double high = 1.0;
};
// 99% Wilson score interval.
Wilson wilson99(std::uint64_t successes, std::uint64_t trials);

struct BoundReport {
  double p_alice = 0.0;
  double p_bob = 0.0;
  double two_pa_plus_pb = 0.0;
  double margin_vs_two = 0.0;           // 2 - s; >= 0 while the ceiling holds
  double margin_vs_three_halves = 0.0;  // s - 3/2
  double margin_vs_five_thirds = 0.0;   // s - 5/3
};
BoundReport bound_report(double p_alice, double p_bob);

// ─────────────────── Monte Carlo estimation ───────────────────

enum class AliceKind { honest, basis_attack, collective, one_pair, channel_computational };
enum class BobKind { honest, curious };
enum class ScoreSide { alice_guess, bob_guess };

std::string_view alice_kind_name(AliceKind kind);
AliceKind alice_kind_from_name(std::string_view name);
std::string_view bob_kind_name(BobKind kind);
BobKind bob_kind_from_name(std::string_view name);

struct CheatScenario {
  ProtocolKind protocol = ProtocolKind::protocol_b;
  AliceKind alice = AliceKind::honest;
  BobKind bob = BobKind::honest;
  ScoreSide score = ScoreSide::alice_guess;
  int k = 4;            // triples (triple protocol)
  int n = 3;            // runs (general protocol; must pair with a width-n set)
  int m = 2;            // checked runs (general protocol)
  int cheat_count = 1;  // channel attack only
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  int workers = 0;  // <= 0: one per hardware thread
};

// All counters are integers so worker partitioning cannot change the result:
// chunks merge by addition and the derived ratios are computed once at the
// end.  Per-trial generators are derived from (seed, trial index), never
// shared, so estimates are byte-stable across worker counts.
struct CheatEstimate {
  std::uint64_t trials_total = 0;
  std::uint64_t trials_scored = 0;  // alice side: all but no-candidate aborts
  std::uint64_t successes = 0;
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::uint64_t completed = 0;
  std::uint64_t target_correct = 0;  // completed runs where Bob decoded Alice's bit
  std::uint64_t definite_b = 0;      // completed runs where Alice's guess was certain
  std::uint64_t aborts_total = 0;
  std::uint64_t aborts_measure = 0;
  std::uint64_t aborts_check = 0;
  std::uint64_t aborts_set = 0;
  std::uint64_t aborts_no_useful = 0;
  std::uint64_t aborts_admissibility = 0;
};

CheatEstimate estimate(const CheatScenario& scenario);

}  // namespace qotsim
