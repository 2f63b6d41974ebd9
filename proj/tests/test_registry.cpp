#include <doctest.h>

#include <array>
#include <cmath>

#include "qotsim/registry.hpp"

using namespace qotsim;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector bell_pair() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = kInvSqrt2;
  amps(3) = kInvSqrt2;
  return StateVector(SubsystemLayout({2, 2}), amps);
}

Operator pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return Operator(SubsystemLayout({2}), x, OpKind::unitary);
}

Operator cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return Operator(SubsystemLayout({2, 2}), m, OpKind::unitary);
}

ProjectiveSet qubit_computational() {
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1;
  Eigen::MatrixXcd p1 = Eigen::MatrixXcd::Zero(2, 2);
  p1(1, 1) = 1;
  return ProjectiveSet(SubsystemLayout({2}), {p0, p1});
}

}  // namespace

TEST_CASE("alloc hands out per-subsystem handles owned by the allocator") {
  Registry reg;
  const auto handles = reg.alloc(Party::alice, bell_pair());
  REQUIRE(handles.size() == 2);
  CHECK(handles[0].dim == 2);
  CHECK(handles[1].dim == 2);
  CHECK(reg.owner_of(handles[0]) == Party::alice);
  CHECK(reg.owner_of(handles[1]) == Party::alice);
  CHECK(reg.factor_count() == 1);
  CHECK(reg.factor_members(handles[0]) == handles);
}

TEST_CASE("transfer moves ownership and gates later actions") {
  Registry reg;
  const auto handles = reg.alloc(Party::bob, bell_pair());
  reg.transfer(Party::bob, handles[0], Party::alice);
  CHECK(reg.owner_of(handles[0]) == Party::alice);
  CHECK(reg.owner_of(handles[1]) == Party::bob);

  // Bob no longer holds the first qubit: he can neither transfer it back nor
  // act on it.
  CHECK_THROWS_AS(reg.transfer(Party::bob, handles[0], Party::bob), std::invalid_argument);
  const Operator x = pauli_x();
  const std::array<Handle, 1> first{handles[0]};
  CHECK_THROWS_AS(reg.apply_unitary(Party::bob, x, first), std::invalid_argument);
  CHECK_NOTHROW(reg.apply_unitary(Party::alice, x, first));
}

TEST_CASE("unitaries merge factors only when they couple them") {
  Registry reg;
  const auto a = reg.alloc(Party::alice, StateVector::basis(SubsystemLayout({2}), 0));
  const auto b = reg.alloc(Party::alice, StateVector::basis(SubsystemLayout({2}), 1));
  CHECK(reg.factor_count() == 2);

  const std::array<Handle, 2> both{a[0], b[0]};
  reg.apply_unitary(Party::alice, cnot(), both);
  CHECK(reg.factor_count() == 1);
  CHECK(reg.factor_members(a[0]).size() == 2);

  // |0>|1> under CNOT stays a product state |0>|1>: the merged factor holds it
  // jointly, and the reduced pieces stay pure.
  const std::array<Handle, 1> ha{a[0]};
  const DensityMatrix ra = reg.reduced_state(ha);
  CHECK(std::abs(ra.matrix()(0, 0).real() - 1.0) < kNormTol);
}

TEST_CASE("measurement collapses and splits the factor again") {
  Registry reg;
  const auto pair = reg.alloc(Party::alice, bell_pair());
  const ProjectiveSet comp = qubit_computational();
  Rng rng(3);
  const std::array<Handle, 1> first{pair[0]};
  const MeasureOutcome m = reg.measure(Party::alice, comp, first, rng);
  CHECK(m.probability == doctest::Approx(0.5).epsilon(1e-12));

  // The post-measurement state is |mm>, a product: the factor splits back.
  CHECK(reg.factor_count() == 2);
  const std::array<Handle, 1> second{pair[1]};
  const DensityMatrix other = reg.reduced_state(second);
  CHECK(std::abs(other.matrix()(m.outcome, m.outcome).real() - 1.0) < kNormTol);
}

TEST_CASE("reduced_state respects the requested subsystem order") {
  Registry reg;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(1) = 1.0;  // |01>
  const auto pair = reg.alloc(Party::alice, StateVector(SubsystemLayout({2, 2}), amps));

  const std::array<Handle, 2> fwd{pair[0], pair[1]};
  const std::array<Handle, 2> rev{pair[1], pair[0]};
  const DensityMatrix rho_fwd = reg.reduced_state(fwd);
  const DensityMatrix rho_rev = reg.reduced_state(rev);
  CHECK(std::abs(rho_fwd.matrix()(1, 1).real() - 1.0) < kNormTol);   // |01><01|
  CHECK(std::abs(rho_rev.matrix()(2, 2).real() - 1.0) < kNormTol);   // |10><10|
}

TEST_CASE("reduced_state spans factors as a product") {
  Registry reg;
  const auto a = reg.alloc(Party::alice, StateVector::basis(SubsystemLayout({2}), 1));
  const auto b = reg.alloc(Party::bob, StateVector::basis(SubsystemLayout({3}), 2));
  const std::array<Handle, 2> both{a[0], b[0]};
  const DensityMatrix rho = reg.reduced_state(both);
  CHECK(rho.layout().dims() == std::vector<int>{2, 3});
  CHECK(std::abs(rho.matrix()(5, 5).real() - 1.0) < kNormTol);  // |1>|2> -> index 5
}

TEST_CASE("release demands whole factors and distinct handles") {
  Registry reg;
  const auto pair = reg.alloc(Party::alice, bell_pair());
  const std::array<Handle, 1> partial{pair[0]};
  CHECK_THROWS_AS(reg.release(partial), std::invalid_argument);
  const std::array<Handle, 2> dup{pair[0], pair[0]};
  CHECK_THROWS_AS(reg.release(dup), std::invalid_argument);

  const std::array<Handle, 2> whole{pair[0], pair[1]};
  reg.release(whole);
  CHECK(reg.factor_count() == 0);
  CHECK_THROWS_AS(reg.owner_of(pair[0]), std::invalid_argument);
}

TEST_CASE("local operations on one side leave the other side's view unchanged") {
  Registry reg;
  const auto pair = reg.alloc(Party::bob, bell_pair());
  reg.transfer(Party::bob, pair[0], Party::alice);

  const std::array<Handle, 1> bobs{pair[1]};
  const DensityMatrix before = reg.reduced_state(bobs);

  // Alice applies an arbitrary local unitary; Bob's reduced state is
  // untouched, exactly.
  Rng rng(17);
  const Operator u(SubsystemLayout({2}), random_unitary(2, rng), OpKind::unitary);
  const std::array<Handle, 1> alices{pair[0]};
  reg.apply_unitary(Party::alice, u, alices);
  const DensityMatrix after = reg.reduced_state(bobs);
  CHECK((before.matrix() - after.matrix()).norm() < 1e-12);

  // A measurement on Alice's side changes Bob's conditional state, but the
  // outcome-weighted average must still be the state he held before.  Replay
  // the pre-measurement joint state and average the branches analytically.
  const std::array<Handle, 2> joint{pair[0], pair[1]};
  const DensityMatrix rho = reg.reduced_state(joint);
  Eigen::MatrixXcd weighted = Eigen::MatrixXcd::Zero(2, 2);
  for (int outcome = 0; outcome < 2; ++outcome) {
    // Project Alice's qubit (subsystem 0 of the joint order) on `outcome`,
    // then trace her out by reading off her diagonal block.
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        weighted(r, c) += rho.matrix()(outcome * 2 + r, outcome * 2 + c);
      }
    }
  }
  CHECK((weighted - before.matrix()).norm() < 1e-12);

  // And the sampled path agrees: measuring leaves Bob's conditional state
  // pure but, over the two exact branch probabilities, the mixture is I/2.
  Rng sample_rng(41);
  const MeasureOutcome m = reg.measure(Party::alice, qubit_computational(), alices, sample_rng);
  CHECK(m.probability == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("operations on disjoint factors commute") {
  const Operator x = pauli_x();
  Rng rng(29);
  const Operator u(SubsystemLayout({2}), random_unitary(2, rng), OpKind::unitary);

  auto run = [&](bool alice_first) {
    Registry reg;
    const auto a = reg.alloc(Party::alice, StateVector::basis(SubsystemLayout({2}), 0));
    const auto b = reg.alloc(Party::bob, StateVector::basis(SubsystemLayout({2}), 0));
    const std::array<Handle, 1> ha{a[0]};
    const std::array<Handle, 1> hb{b[0]};
    if (alice_first) {
      reg.apply_unitary(Party::alice, u, ha);
      reg.apply_unitary(Party::bob, x, hb);
    } else {
      reg.apply_unitary(Party::bob, x, hb);
      reg.apply_unitary(Party::alice, u, ha);
    }
    const std::array<Handle, 2> joint{a[0], b[0]};
    return reg.reduced_state(joint).matrix();
  };
  CHECK((run(true) - run(false)).norm() < 1e-12);
}

TEST_CASE("channels report branches and keep states registered") {
  std::vector<Eigen::MatrixXcd> kraus;
  for (int m = 0; m < 2; ++m) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2, 2);
    k(m, m) = 1;
    kraus.push_back(k);
  }
  const KrausChannel dephase(SubsystemLayout({2}), kraus);

  Registry reg;
  const auto pair = reg.alloc(Party::alice, bell_pair());
  Rng rng(31);
  const std::array<Handle, 1> first{pair[0]};
  const ChannelOutcome out = reg.apply_channel(Party::alice, dephase, first, rng);
  CHECK(out.probability == doctest::Approx(0.5).epsilon(1e-12));
  // The dephasing branch collapses the Bell pair to a product |mm>.
  const std::array<Handle, 1> second{pair[1]};
  const DensityMatrix other = reg.reduced_state(second);
  CHECK(std::abs(other.matrix()(out.branch, out.branch).real() - 1.0) < kNormTol);
  CHECK(reg.factor_count() == 2);
}
