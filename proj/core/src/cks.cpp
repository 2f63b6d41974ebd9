#include "qotsim/cks.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qotsim {

namespace {

void require_bit(int b, const char* where) {
  if (b != 0 && b != 1) throw std::invalid_argument(std::string(where) + ": index must be 0 or 1");
}

StateVector make_phi(int b, double sign) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(9);
  const double r = 1.0 / std::sqrt(2.0);
  amps[4 * b] = r;      // |bb>
  amps[8] = sign * r;   // |22>
  return StateVector(SubsystemLayout({3, 3}), std::move(amps));
}

}  // namespace

StateVector phi_state(int b) {
  require_bit(b, "phi_state");
  return make_phi(b, 1.0);
}

StateVector phi_perp_state(int b) {
  require_bit(b, "phi_perp_state");
  return make_phi(b, -1.0);
}

const Operator& phase_unitary(int x0, int x1) {
  require_bit(x0, "phase_unitary");
  require_bit(x1, "phase_unitary");
  static const auto* table = [] {
    auto* ops = new std::array<Operator, 4>{{
        Operator(SubsystemLayout({3}), Eigen::Vector3cd(1, 1, 1).asDiagonal(), OpKind::unitary),
        Operator(SubsystemLayout({3}), Eigen::Vector3cd(1, -1, 1).asDiagonal(), OpKind::unitary),
        Operator(SubsystemLayout({3}), Eigen::Vector3cd(-1, 1, 1).asDiagonal(), OpKind::unitary),
        Operator(SubsystemLayout({3}), Eigen::Vector3cd(-1, -1, 1).asDiagonal(), OpKind::unitary),
    }};
    return ops;
  }();
  return (*table)[2 * x0 + x1];
}

const ProjectiveSet& decode_set(int b) {
  require_bit(b, "decode_set");
  static const auto* table = [] {
    auto make = [](int bb) {
      const Eigen::VectorXcd phi = make_phi(bb, 1.0).amplitudes();
      const Eigen::VectorXcd perp = make_phi(bb, -1.0).amplitudes();
      const Eigen::MatrixXcd p0 = phi * phi.adjoint();
      const Eigen::MatrixXcd p1 = perp * perp.adjoint();
      const Eigen::MatrixXcd rest = Eigen::MatrixXcd::Identity(9, 9) - p0 - p1;
      return ProjectiveSet(SubsystemLayout({3, 3}), {p0, p1, rest});
    };
    return new std::array<ProjectiveSet, 2>{{make(0), make(1)}};
  }();
  return (*table)[b];
}

PreparedRound bob_prepare(Registry& reg, int b) {
  require_bit(b, "bob_prepare");
  const std::vector<Handle> handles = reg.alloc(Party::bob, make_phi(b, 1.0));
  reg.transfer(Party::bob, handles[0], Party::alice);
  return PreparedRound{handles[0], handles[1]};
}

Decode bob_decode(Registry& reg, Rng& rng, int b, Handle beta, Handle beta_prime) {
  require_bit(b, "bob_decode");
  const Handle targets[2] = {beta, beta_prime};
  const MeasureOutcome out = reg.measure(Party::bob, decode_set(b), targets, rng);
  return static_cast<Decode>(out.outcome);
}

namespace {

CksRound drive_round(AliceStrategy& alice, BobStrategy* bob, int b, Rng& rng) {
  require_bit(b, "run_cks_round");
  Registry reg;
  ProtocolView view;
  view.kind = ProtocolKind::cks_round;
  view.rounds = 1;
  alice.begin(view, reg, rng);

  const PreparedRound pr = bob_prepare(reg, b);
  alice.on_round(reg, rng, 0, pr.beta);
  if (reg.owner_of(pr.beta) != Party::bob) {
    throw std::logic_error("run_cks_round: strategy kept the carrier instead of returning it");
  }
  const Decode outcome = bob_decode(reg, rng, b, pr.beta, pr.beta_prime);

  CksRound round;
  round.b = b;
  round.outcome = outcome;
  round.alice_guess = alice.guess_b(rng);
  round.alice_definite = alice.definite_b();
  round.alice_record = alice.record();
  if (bob != nullptr && bob->curious() && outcome != Decode::abort) {
    round.bob_guess =
        bob->guess_other_x(reg, rng, pr.beta, pr.beta_prime, b, static_cast<int>(outcome));
  }
  return round;
}

}  // namespace

CksRound run_cks_round(AliceStrategy& alice, BobStrategy& bob, int b, Rng& rng) {
  return drive_round(alice, &bob, b, rng);
}

CksRound run_cks_round(AliceStrategy& alice, int b, Rng& rng) {
  return drive_round(alice, nullptr, b, rng);
}

}  // namespace qotsim
