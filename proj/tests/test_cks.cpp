#include <doctest.h>

#include <array>
#include <cmath>

#include "qotsim/cks.hpp"
#include "qotsim/strategies.hpp"

using namespace qotsim;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Overlap magnitude of two pure states on the same layout.
double overlap(const StateVector& a, const StateVector& b) {
  return std::abs(a.amplitudes().dot(b.amplitudes()));
}

}  // namespace

TEST_CASE("carrier states live on the expected amplitudes") {
  for (int b = 0; b < 2; ++b) {
    const StateVector phi = phi_state(b);
    REQUIRE(phi.layout().dims() == std::vector<int>{3, 3});
    CHECK(std::abs(phi.amplitudes()(4 * b) - Cx(kInvSqrt2, 0)) < kExactTol);  // |bb>
    CHECK(std::abs(phi.amplitudes()(8) - Cx(kInvSqrt2, 0)) < kExactTol);      // |22>

    const StateVector perp = phi_perp_state(b);
    CHECK(std::abs(perp.amplitudes()(4 * b) - Cx(kInvSqrt2, 0)) < kExactTol);
    CHECK(std::abs(perp.amplitudes()(8) + Cx(kInvSqrt2, 0)) < kExactTol);

    CHECK(overlap(phi, perp) < kExactTol);
  }
  // The two committed-index states are not orthogonal: they share |22>.
  CHECK(overlap(phi_state(0), phi_state(1)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("the phase gate flips to the orthogonal partner exactly when the sent bit is 1") {
  const std::array<int, 1> alice_side{0};
  for (int b = 0; b < 2; ++b) {
    for (int x0 = 0; x0 < 2; ++x0) {
      for (int x1 = 0; x1 < 2; ++x1) {
        const BitPair pair{x0, x1};
        const StateVector after =
            apply_on_subsystems(phase_unitary(x0, x1), phi_state(b), alice_side);
        const StateVector& expect = pair.bit(b) == 0 ? phi_state(b) : phi_perp_state(b);
        // Equality up to a global phase.
        CHECK(overlap(after, expect) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("honest decode returns the sent bit with certainty") {
  const std::array<int, 2> both{0, 1};
  for (int b = 0; b < 2; ++b) {
    for (int x_b = 0; x_b < 2; ++x_b) {
      const StateVector sent = x_b == 0 ? phi_state(b) : phi_perp_state(b);
      const std::vector<double> probs = outcome_probabilities(sent, decode_set(b), both);
      REQUIRE(probs.size() == 3);
      CHECK(probs[x_b] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(probs[2] == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("decoding against the wrong index splits 1/4, 1/4, 1/2") {
  const std::array<int, 2> both{0, 1};
  for (int b = 0; b < 2; ++b) {
    const std::vector<double> probs =
        outcome_probabilities(phi_state(1 - b), decode_set(b), both);
    CHECK(probs[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(probs[2] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("prepare/decode round trip through the registry") {
  for (int b = 0; b < 2; ++b) {
    for (int x0 = 0; x0 < 2; ++x0) {
      for (int x1 = 0; x1 < 2; ++x1) {
        Registry reg;
        Rng rng(100 + 4 * b + 2 * x0 + x1);
        const PreparedRound round = bob_prepare(reg, b);
        CHECK(reg.owner_of(round.beta) == Party::alice);
        CHECK(reg.owner_of(round.beta_prime) == Party::bob);

        const std::array<Handle, 1> carried{round.beta};
        reg.apply_unitary(Party::alice, phase_unitary(x0, x1), carried);
        reg.transfer(Party::alice, round.beta, Party::bob);

        const Decode decoded = bob_decode(reg, rng, b, round.beta, round.beta_prime);
        const BitPair pair{x0, x1};
        CHECK(static_cast<int>(decoded) == pair.bit(b));
      }
    }
  }
}

TEST_CASE("decode requires both carriers back in Bob's hands") {
  Registry reg;
  Rng rng(7);
  const PreparedRound round = bob_prepare(reg, 0);
  // Alice still holds beta.
  CHECK_THROWS_AS(bob_decode(reg, rng, 0, round.beta, round.beta_prime), std::invalid_argument);
}

TEST_CASE("an honest bare round transfers the chosen bit") {
  for (int b = 0; b < 2; ++b) {
    for (int x0 = 0; x0 < 2; ++x0) {
      for (int x1 = 0; x1 < 2; ++x1) {
        const auto alice = make_honest_alice({BitPair{x0, x1}});
        Rng rng(500 + 4 * b + 2 * x0 + x1);
        const CksRound round = run_cks_round(*alice, b, rng);
        const BitPair pair{x0, x1};
        CHECK(round.outcome != Decode::abort);
        CHECK(static_cast<int>(round.outcome) == pair.bit(b));
        CHECK_FALSE(round.alice_definite);
      }
    }
  }
}

TEST_CASE("the computational-basis cheat never aborts and wins three rounds in four") {
  Rng rng(0xBA515);
  int correct = 0;
  int definite = 0;
  const int rounds = 4000;
  for (int i = 0; i < rounds; ++i) {
    const int b = rng.bit();
    const auto alice = make_basis_attack_alice();
    const CksRound round = run_cks_round(*alice, b, rng);
    REQUIRE(round.outcome != Decode::abort);
    if (round.alice_guess == b) ++correct;
    if (round.alice_definite) {
      ++definite;
      // A definite readout is never wrong: outcomes 0/1 reveal the index.
      CHECK(round.alice_guess == b);
    }
  }
  // Exact success rate 3/4, detection rate 1/2; four-sigma Monte Carlo bands.
  const double p = static_cast<double>(correct) / rounds;
  const double d = static_cast<double>(definite) / rounds;
  CHECK(std::abs(p - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / rounds));
  CHECK(std::abs(d - 0.5) < 4.0 * std::sqrt(0.25 / rounds));
}

TEST_CASE("a curious honest-looking Bob gains nothing on a bare round") {
  Rng rng(0xCB0B);
  int guessed = 0;
  int correct = 0;
  const int rounds = 3000;
  for (int i = 0; i < rounds; ++i) {
    const int b = rng.bit();
    const BitPair pair{rng.bit(), rng.bit()};
    const auto alice = make_honest_alice({pair});
    const auto bob = make_curious_bob();
    const CksRound round = run_cks_round(*alice, *bob, b, rng);
    REQUIRE(round.outcome != Decode::abort);
    CHECK(static_cast<int>(round.outcome) == pair.bit(b));
    if (round.bob_guess) {
      ++guessed;
      if (*round.bob_guess == pair.bit(1 - b)) ++correct;
    }
  }
  REQUIRE(guessed == rounds);
  const double p = static_cast<double>(correct) / guessed;
  CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / guessed));
}
