#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "qotsim/qlin.hpp"

using namespace qotsim;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector superpose_0_2() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(3);
  amps(0) = kInvSqrt2;
  amps(2) = kInvSqrt2;
  return StateVector(SubsystemLayout({3}), amps);
}

StateVector qubit_plus() {
  Eigen::VectorXcd amps(2);
  amps << kInvSqrt2, kInvSqrt2;
  return StateVector(SubsystemLayout({2}), amps);
}

StateVector bell_pair() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(4);
  amps(0) = kInvSqrt2;
  amps(3) = kInvSqrt2;
  return StateVector(SubsystemLayout({2, 2}), amps);
}

}  // namespace

TEST_CASE("layout indexing is big-endian mixed radix") {
  SubsystemLayout layout({3, 3});
  CHECK(layout.count() == 2);
  CHECK(layout.total_dim() == 9);
  CHECK(layout.stride(0) == 3);
  CHECK(layout.stride(1) == 1);
  const std::array<int, 2> digits{1, 2};
  CHECK(layout.index_of(digits) == 5);
  CHECK(layout.digits_of(5) == std::vector<int>{1, 2});

  SubsystemLayout mixed({2, 3, 2});
  CHECK(mixed.total_dim() == 12);
  const std::array<int, 3> d{1, 2, 0};
  CHECK(mixed.index_of(d) == 1 * 6 + 2 * 2 + 0);
  for (long i = 0; i < mixed.total_dim(); ++i) {
    CHECK(mixed.index_of(mixed.digits_of(i)) == i);
  }

  CHECK_THROWS_AS(SubsystemLayout({1}), std::invalid_argument);
  CHECK_THROWS_AS(SubsystemLayout({3, 0}), std::invalid_argument);

  SubsystemLayout joined = SubsystemLayout::concat(layout, mixed);
  CHECK(joined.dims() == std::vector<int>{3, 3, 2, 3, 2});
}

TEST_CASE("state vectors validate normalization") {
  Eigen::VectorXcd bad = Eigen::VectorXcd::Ones(3);
  CHECK_THROWS_AS(StateVector(SubsystemLayout({3}), bad), std::invalid_argument);
  const StateVector basis = StateVector::basis(SubsystemLayout({3, 3}), 7);
  CHECK(basis.amplitudes()(7) == Cx(1.0, 0.0));
}

TEST_CASE("tensor places amplitudes by the flat index rule") {
  const StateVector prod = tensor(superpose_0_2(), StateVector::basis(SubsystemLayout({3}), 1));
  REQUIRE(prod.layout().dims() == std::vector<int>{3, 3});
  CHECK(std::abs(prod.amplitudes()(1) - Cx(kInvSqrt2, 0)) < kExactTol);
  CHECK(std::abs(prod.amplitudes()(7) - Cx(kInvSqrt2, 0)) < kExactTol);
  CHECK(std::abs(prod.amplitudes()(0)) < kExactTol);
  CHECK(std::abs(prod.amplitudes()(4)) < kExactTol);
}

TEST_CASE("operators check their claimed algebraic family") {
  Eigen::MatrixXcd not_unitary = Eigen::MatrixXcd::Ones(2, 2);
  CHECK_THROWS_AS(Operator(SubsystemLayout({2}), not_unitary, OpKind::unitary),
                  std::invalid_argument);
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  CHECK_NOTHROW(Operator(SubsystemLayout({2}), x, OpKind::unitary));
  CHECK_THROWS_AS(Operator(SubsystemLayout({2}), x, OpKind::projector), std::invalid_argument);
}

TEST_CASE("apply_on_subsystems acts with identity padding") {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  const Operator flip(SubsystemLayout({2}), x, OpKind::unitary);
  const StateVector start = StateVector::basis(SubsystemLayout({2, 2, 2}), 0b010);
  const std::array<int, 1> last{2};
  const StateVector after = apply_on_subsystems(flip, start, last);
  CHECK(std::abs(after.amplitudes()(0b011) - Cx(1, 0)) < kExactTol);

  // Flipping the middle qubit instead moves |010> to |000>.
  const std::array<int, 1> mid{1};
  const StateVector after2 = apply_on_subsystems(flip, start, mid);
  CHECK(std::abs(after2.amplitudes()(0b000) - Cx(1, 0)) < kExactTol);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
  const DensityMatrix joint = DensityMatrix::from_pure(bell_pair());
  for (int side = 0; side < 2; ++side) {
    const std::array<int, 1> keep{side};
    const DensityMatrix red = partial_trace(joint, keep);
    CHECK((red.matrix() - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() < kExactTol);
  }
}

TEST_CASE("reduce_pure matches the direct partial trace") {
  Rng rng(71);
  const StateVector psi = random_state(SubsystemLayout({2, 3, 2}), rng);
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  const std::array<int, 2> keep{2, 1};
  const DensityMatrix a = reduce_pure(psi, keep);
  const DensityMatrix b = partial_trace(rho, keep);
  CHECK(a.layout().dims() == std::vector<int>{2, 3});
  CHECK((a.matrix() - b.matrix()).norm() < 1e-12);
}

TEST_CASE("reducing one carrier of (|00>+|22>)/sqrt(2) gives diag(1/2,0,1/2)") {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(9);
  amps(0) = kInvSqrt2;
  amps(8) = kInvSqrt2;
  const StateVector phi(SubsystemLayout({3, 3}), amps);
  const std::array<int, 1> keep{0};
  const DensityMatrix red = reduce_pure(phi, keep);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(3, 3);
  expect(0, 0) = 0.5;
  expect(2, 2) = 0.5;
  CHECK((red.matrix() - expect).norm() < kExactTol);
}

TEST_CASE("trace norm and Helstrom value for |0> vs |+>") {
  const DensityMatrix zero = DensityMatrix::from_pure(StateVector::basis(SubsystemLayout({2}), 0));
  const DensityMatrix plus = DensityMatrix::from_pure(qubit_plus());
  const double d = trace_norm(zero.matrix() - plus.matrix());
  CHECK(d == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(trace_distance(zero, plus) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(helstrom_success(zero, plus) ==
        doctest::Approx(0.5 + std::sqrt(2.0) / 4.0).epsilon(1e-12));

  // The positive-eigenspace projector attains the optimum.
  const Eigen::MatrixXcd p = helstrom_projector(zero, plus);
  const Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(2, 2) - p;
  const double attained =
      0.5 * (p * zero.matrix()).trace().real() + 0.5 * (q * plus.matrix()).trace().real();
  CHECK(attained == doctest::Approx(helstrom_success(zero, plus)).epsilon(1e-12));
}

TEST_CASE("fidelity of pure states is the overlap magnitude") {
  const DensityMatrix zero = DensityMatrix::from_pure(StateVector::basis(SubsystemLayout({2}), 0));
  const DensityMatrix plus = DensityMatrix::from_pure(qubit_plus());
  CHECK(fidelity(zero, plus) == doctest::Approx(kInvSqrt2).epsilon(1e-9));
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(5);
  const DensityMatrix a = random_density(SubsystemLayout({3}), rng);
  const DensityMatrix b = random_density(SubsystemLayout({3}), rng);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-9));
}

TEST_CASE("hermitian_eigensystem sorts descending and rejects non-Hermitian input") {
  Eigen::MatrixXcd h(2, 2);
  h << 3, Cx(0, 1), Cx(0, -1), 1;
  const Eigensystem es = hermitian_eigensystem(h);
  CHECK(es.values(0) >= es.values(1));
  CHECK(es.values(0) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  Eigen::MatrixXcd skew(2, 2);
  skew << 0, 1, 2, 0;
  CHECK_THROWS_AS(hermitian_eigensystem(skew), std::invalid_argument);
}

TEST_CASE("projective sets must resolve the identity") {
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1;
  CHECK_THROWS_AS(ProjectiveSet(SubsystemLayout({2}), {p0}), std::invalid_argument);
  Eigen::MatrixXcd p1 = Eigen::MatrixXcd::Zero(2, 2);
  p1(1, 1) = 1;
  CHECK_NOTHROW(ProjectiveSet(SubsystemLayout({2}), {p0, p1}));
}

TEST_CASE("outcome probabilities obey the Born rule and sampling matches support") {
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(2, 2);
  p0(0, 0) = 1;
  Eigen::MatrixXcd p1 = Eigen::MatrixXcd::Zero(2, 2);
  p1(1, 1) = 1;
  const ProjectiveSet comp(SubsystemLayout({2}), {p0, p1});

  const std::array<int, 1> first{0};
  const std::vector<double> probs = outcome_probabilities(bell_pair(), comp, first);
  REQUIRE(probs.size() == 2);
  CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-12));

  Rng rng(11);
  for (int i = 0; i < 32; ++i) {
    const MeasureResult r = measure_on_subsystems(bell_pair(), comp, first, rng);
    CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
    // The post state collapses to the matching product |mm>.
    const long idx = r.outcome == 0 ? 0 : 3;
    CHECK(std::abs(std::abs(r.post.amplitudes()(idx)) - 1.0) < kNormTol);
  }
}

TEST_CASE("Kraus channels must be trace preserving and report branch odds") {
  std::vector<Eigen::MatrixXcd> kraus;
  for (int m = 0; m < 3; ++m) {
    Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(3, 3);
    k(m, m) = 1;
    kraus.push_back(k);
  }
  const KrausChannel dephase(SubsystemLayout({3}), kraus);

  std::vector<Eigen::MatrixXcd> broken(kraus.begin(), kraus.begin() + 2);
  CHECK_THROWS_AS(KrausChannel(SubsystemLayout({3}), broken), std::invalid_argument);

  Rng rng(13);
  int seen0 = 0;
  int seen2 = 0;
  for (int i = 0; i < 64; ++i) {
    const std::array<int, 1> only{0};
    const KrausResult r = apply_kraus_on_subsystems(superpose_0_2(), dephase, only, rng);
    CHECK(r.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK((r.branch == 0 || r.branch == 2));
    (r.branch == 0 ? seen0 : seen2)++;
  }
  CHECK(seen0 > 0);
  CHECK(seen2 > 0);
}

TEST_CASE("try_split_pure factors exactly the product states") {
  const StateVector prod = tensor(superpose_0_2(), StateVector::basis(SubsystemLayout({3}), 1));
  const std::array<int, 1> first{0};
  const auto split = try_split_pure(prod, first);
  REQUIRE(split.has_value());
  CHECK(std::abs(split->target_state.amplitudes()(0) - Cx(kInvSqrt2, 0)) < kNormTol);
  CHECK(std::abs(split->rest_state.amplitudes()(1) - Cx(1, 0)) < kNormTol);

  const std::array<int, 1> second{1};
  const auto split2 = try_split_pure(prod, second);
  REQUIRE(split2.has_value());
  CHECK(std::abs(split2->target_state.amplitudes()(1) - Cx(1, 0)) < kNormTol);

  CHECK_FALSE(try_split_pure(bell_pair(), first).has_value());

  CHECK_THROWS_AS(try_split_pure(prod, std::array<int, 2>{0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(try_split_pure(prod, std::array<int, 0>{}), std::invalid_argument);
}

TEST_CASE("random instances satisfy their defining constraints") {
  Rng rng(2024);
  const Eigen::MatrixXcd u = random_unitary(4, rng);
  CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-9);

  const DensityMatrix rho = random_density(SubsystemLayout({3}), rng);
  CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-9);
  const Eigensystem es = hermitian_eigensystem(rho.matrix());
  CHECK(es.values.minCoeff() >= -kEigClamp);

  const StateVector psi = random_state(SubsystemLayout({2, 2}), rng);
  CHECK(std::abs(psi.amplitudes().norm() - 1.0) < 1e-9);
}

TEST_CASE("unitary evolution preserves trace distance") {
  Rng rng(99);
  const DensityMatrix a = random_density(SubsystemLayout({3}), rng);
  const DensityMatrix b = random_density(SubsystemLayout({3}), rng);
  const Eigen::MatrixXcd u = random_unitary(3, rng);
  const DensityMatrix ua(SubsystemLayout({3}), u * a.matrix() * u.adjoint());
  const DensityMatrix ub(SubsystemLayout({3}), u * b.matrix() * u.adjoint());
  CHECK(trace_distance(ua, ub) == doctest::Approx(trace_distance(a, b)).epsilon(1e-9));
  CHECK(fidelity(ua, ub) == doctest::Approx(fidelity(a, b)).epsilon(1e-9));
}
