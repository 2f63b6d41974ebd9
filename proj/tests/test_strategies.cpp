#include <doctest.h>

#include <array>
#include <cmath>

#include "qotsim/strategies.hpp"
#include "qotsim/weakot.hpp"

using namespace qotsim;

TEST_CASE("the two-control phase gate carries the right signs") {
  const Operator& gate = controlled_phase_unitary();
  REQUIRE(gate.layout().dims() == std::vector<int>{2, 2, 3});
  const Eigen::MatrixXcd& m = gate.matrix();
  // Flat index 6*g0 + 3*g1 + carrier; the carrier level m < 2 picks up
  // (-1)^{g_m}, level 2 is untouched.
  for (int g0 = 0; g0 < 2; ++g0) {
    for (int g1 = 0; g1 < 2; ++g1) {
      const long base = 6 * g0 + 3 * g1;
      CHECK(m(base + 0, base + 0) == Cx(g0 == 1 ? -1 : 1, 0));
      CHECK(m(base + 1, base + 1) == Cx(g1 == 1 ? -1 : 1, 0));
      CHECK(m(base + 2, base + 2) == Cx(1, 0));
    }
  }
  // Diagonal gate: nothing off the diagonal.
  CHECK((m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).norm() < kExactTol);
}

TEST_CASE("the full-register cheat never fails a check and reads the index half the time") {
  Rng rng(0xC0113C);
  const int trials = 400;
  int completed = 0;
  int definite = 0;
  int definite_correct = 0;
  for (int i = 0; i < trials; ++i) {
    ProtocolConfig cfg;
    cfg.k = 2;
    const auto alice = make_collective_triple_alice();
    const auto bob = make_honest_bob();
    const RunOutcome out = run_protocol_b(cfg, *alice, *bob, rng).outcome;
    // Every announced value is read out of the register, so reveals always
    // match Bob's decode and always land inside the codeword set.
    CHECK(out.abort != AbortReason::check_mismatch);
    CHECK(out.abort != AbortReason::set_violation);
    CHECK(out.abort != AbortReason::bob_measurement);
    if (!out.completed) continue;
    ++completed;
    if (out.alice_definite_b) {
      ++definite;
      // The minus branch identifies the committed index with certainty.
      CHECK(out.alice_b_guess == *out.bob_true_b);
      ++definite_correct;
    }
  }
  REQUIRE(completed > 100);
  const double rate = static_cast<double>(definite) / completed;
  CHECK(std::abs(rate - 0.5) < 4.0 * std::sqrt(0.25 / completed));
  CHECK(definite == definite_correct);
}

TEST_CASE("the one-pair cheat stays check-clean and marks its runs") {
  Rng rng(0x17A1);
  const int trials = 300;
  bool saw_record = false;
  for (int i = 0; i < trials; ++i) {
    ProtocolConfig cfg;
    cfg.k = 3;
    const auto alice = make_one_pair_collective_alice();
    const auto bob = make_honest_bob();
    const RunOutcome out = run_protocol_b(cfg, *alice, *bob, rng).outcome;
    CHECK(out.abort != AbortReason::check_mismatch);
    CHECK(out.abort != AbortReason::set_violation);
    CHECK(out.abort != AbortReason::bob_measurement);
    if (out.completed && out.alice_definite_b) {
      CHECK(out.alice_b_guess == *out.bob_true_b);
    }
    if (!out.alice_record.empty()) saw_record = true;
  }
  CHECK(saw_record);
}

TEST_CASE("the measure-and-resend channel dephases one carrier") {
  const KrausChannel& ch = computational_basis_channel();
  REQUIRE(ch.layout().dims() == std::vector<int>{3});
  REQUIRE(ch.size() == 3);
  for (int m = 0; m < 3; ++m) {
    Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
    expect(m, m) = 1;
    CHECK((ch.at(m) - expect).norm() < kExactTol);
  }
}

TEST_CASE("a channel cheat with pinned runs is definite exactly on cheat-run encodings") {
  Rng rng(0xC4A2);
  const int trials = 600;
  int definite = 0;
  int definite_correct = 0;
  for (int i = 0; i < trials; ++i) {
    ProtocolConfig cfg;
    cfg.k = 1;
    const auto alice =
        make_channel_attack_alice(computational_basis_channel(), std::vector<int>{0, 1, 2});
    const auto bob = make_honest_bob();
    const RunOutcome out = run_protocol_b(cfg, *alice, *bob, rng).outcome;
    if (!out.completed) continue;
    if (out.alice_definite_b) {
      ++definite;
      if (out.alice_b_guess == *out.bob_true_b) ++definite_correct;
    }
  }
  // Every run is touched, so a completed execution encodes on a cheat run;
  // the recorded branch is 0/1 (Bob's index) or 2 (no information).
  CHECK(definite > 0);
  CHECK(definite == definite_correct);
}

TEST_CASE("honest alice reveals exactly what she committed to in bare rounds") {
  const std::vector<BitPair> pairs{BitPair{1, 0}};
  const auto alice = make_honest_alice(pairs);
  Rng rng(9);
  Registry reg;
  ProtocolView view;
  view.kind = ProtocolKind::cks_round;
  view.rounds = 1;
  alice->begin(view, reg, rng);
  const PreparedRound round = bob_prepare(reg, 0);
  alice->on_round(reg, rng, 0, round.beta);
  CHECK(alice->on_reveal(reg, rng, 0) == BitPair{1, 0});
}

TEST_CASE("honest processing keeps each carrier pair in its own factor") {
  // The phase gate is local to the carrier Alice holds, so an honest round
  // never entangles one run's pair with another's: after two prepared rounds
  // the registry still holds one factor per pair, each of width two.
  Rng rng(0x15A0);
  Registry reg;
  const auto alice = make_honest_alice({BitPair{0, 1}, BitPair{1, 1}});
  ProtocolView view;
  view.kind = ProtocolKind::cks_round;
  view.rounds = 2;
  alice->begin(view, reg, rng);

  const PreparedRound r0 = bob_prepare(reg, 0);
  const PreparedRound r1 = bob_prepare(reg, 1);
  CHECK(reg.factor_count() == 2);
  alice->on_round(reg, rng, 0, r0.beta);
  alice->on_round(reg, rng, 1, r1.beta);
  CHECK(reg.factor_count() == 2);
  CHECK(reg.factor_members(r0.beta) == std::vector<Handle>{r0.beta, r0.beta_prime});
  CHECK(reg.factor_members(r1.beta) == std::vector<Handle>{r1.beta, r1.beta_prime});

  // The register-based cheat, by contrast, couples its control register to
  // the carrier it processes: the factor holding round 0's pair grows.
  Registry reg2;
  const auto cheat = make_collective_triple_alice();
  ProtocolView bview;
  bview.kind = ProtocolKind::protocol_b;
  bview.rounds = 3;
  bview.triples = 1;
  bview.checked_per_group = 2;
  const CodewordSet& set = CodewordSet::triples();
  bview.codewords = &set;
  cheat->begin(bview, reg2, rng);
  const PreparedRound c0 = bob_prepare(reg2, 0);
  cheat->on_round(reg2, rng, 0, c0.beta);
  CHECK(reg2.factor_members(c0.beta).size() > 2);
}
