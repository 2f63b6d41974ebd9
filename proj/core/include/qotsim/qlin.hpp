#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "qotsim/layout.hpp"
#include "qotsim/rng.hpp"

namespace qotsim {

using Cx = std::complex<double>;

// Numerical tolerances, shared across the library.
inline constexpr double kNormTol = 1e-9;    // state normalization, unitarity, projector algebra
inline constexpr double kEigClamp = 1e-9;   // negative eigenvalue dust clamped to zero
inline constexpr double kExactTol = 1e-12;  // quantities expected to vanish identically

// ───────────────────────── states and operators ─────────────────────────

// Pure state on a composite system.  Public constructors validate that all
// amplitudes are finite and the vector has unit norm (within kNormTol).
class StateVector {
 public:
  StateVector(SubsystemLayout layout, Eigen::VectorXcd amplitudes);

  const SubsystemLayout& layout() const { return layout_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  static StateVector basis(SubsystemLayout layout, long index);

 private:
  SubsystemLayout layout_;
  Eigen::VectorXcd amps_;
};

// Mixed state.  Validated Hermitian (within kNormTol), positive semidefinite
// (eigenvalues >= -kEigClamp), unit trace (within kNormTol).
class DensityMatrix {
 public:
  DensityMatrix(SubsystemLayout layout, Eigen::MatrixXcd rho);

  const SubsystemLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  static DensityMatrix from_pure(const StateVector& state);

 private:
  SubsystemLayout layout_;
  Eigen::MatrixXcd rho_;
};

enum class OpKind { unitary, projector, kraus, hermitian };

// Square operator tagged with the algebraic family it claims to belong to;
// the constructor checks the corresponding defining property.
class Operator {
 public:
  Operator(SubsystemLayout layout, Eigen::MatrixXcd matrix, OpKind kind);

  const SubsystemLayout& layout() const { return layout_; }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  OpKind kind() const { return kind_; }

 private:
  SubsystemLayout layout_;
  Eigen::MatrixXcd m_;
  OpKind kind_;
};

// Complete projective measurement: pairwise-orthogonal projectors summing to
// the identity.  Validated once at construction so per-sample measurement
// stays cheap.
class ProjectiveSet {
 public:
  ProjectiveSet(SubsystemLayout layout, std::vector<Eigen::MatrixXcd> projectors);

  const SubsystemLayout& layout() const { return layout_; }
  int size() const { return static_cast<int>(projectors_.size()); }
  const Eigen::MatrixXcd& at(int outcome) const { return projectors_.at(outcome); }

 private:
  SubsystemLayout layout_;
  std::vector<Eigen::MatrixXcd> projectors_;
};

// Trace-preserving channel given by Kraus elements: sum_k K_k^dag K_k = I.
class KrausChannel {
 public:
  KrausChannel(SubsystemLayout layout, std::vector<Eigen::MatrixXcd> elements);

  const SubsystemLayout& layout() const { return layout_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const Eigen::MatrixXcd& at(int branch) const { return elements_.at(branch); }

 private:
  SubsystemLayout layout_;
  std::vector<Eigen::MatrixXcd> elements_;
};

// ───────────────────────── composition and evolution ─────────────────────────

StateVector tensor(const StateVector& a, const StateVector& b);
Operator tensor(const Operator& a, const Operator& b);  // kinds must match
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

// Apply a full-space operator.
StateVector apply(const Operator& op, const StateVector& state);

// Apply an operator to the listed subsystems (distinct, in the operator's
// own subsystem order), identity elsewhere.
StateVector apply_on_subsystems(const Operator& op, const StateVector& state,
                                std::span<const int> targets);

// ───────────────────────── reduction and spectra ─────────────────────────

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix reduce_pure(const StateVector& state, std::span<const int> keep);

// Attempt to factor a pure state as (targets) ⊗ (rest).  Succeeds exactly when
// the reduced state on the targets is pure within tolerance; the returned
// target factor carries the subsystems in the order given, the rest factor in
// original order with the targets removed.  `targets` must be a proper,
// nonempty subset of the state's subsystems.
struct PureSplit {
  StateVector target_state;
  StateVector rest_state;
};
std::optional<PureSplit> try_split_pure(const StateVector& state,
                                        std::span<const int> targets);

struct Eigensystem {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXcd vectors; // columns, matching order
};

// Eigendecomposition of (H + H^dag)/2.  Input must be Hermitian within
// kNormTol; eigenvalues in [-kEigClamp, 0) are clamped to zero.
Eigensystem hermitian_eigensystem(const Eigen::MatrixXcd& h);

double trace_norm(const Eigen::MatrixXcd& hermitian);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Uhlmann fidelity ||sqrt(rho) sqrt(xi)||_tr, symmetric, clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Optimal two-hypothesis discrimination success for equal priors:
// 1/2 + ||rho0 - rho1||_tr / 4.
double helstrom_success(const DensityMatrix& rho0, const DensityMatrix& rho1);

// Projector onto the strictly positive eigenspace of rho0 - rho1; measuring
// {P, I-P} and guessing hypothesis 0 on P attains helstrom_success.
Eigen::MatrixXcd helstrom_projector(const DensityMatrix& rho0, const DensityMatrix& rho1);

// ───────────────────────── sampling ─────────────────────────

struct MeasureResult {
  int outcome;
  double probability;
  StateVector post;
};

MeasureResult measure_projective(const StateVector& state, const ProjectiveSet& set, Rng& rng);
MeasureResult measure_on_subsystems(const StateVector& state, const ProjectiveSet& set,
                                    std::span<const int> targets, Rng& rng);

struct KrausResult {
  int branch;
  double probability;
  StateVector post;
};

KrausResult apply_kraus_on_subsystems(const StateVector& state, const KrausChannel& channel,
                                      std::span<const int> targets, Rng& rng);

// Outcome probabilities without sampling (law-of-total-probability checks).
std::vector<double> outcome_probabilities(const StateVector& state, const ProjectiveSet& set,
                                          std::span<const int> targets);

// ───────────────────────── random instances ─────────────────────────

StateVector random_state(SubsystemLayout layout, Rng& rng);
Eigen::MatrixXcd random_unitary(int dim, Rng& rng);  // Haar via Ginibre QR
DensityMatrix random_density(SubsystemLayout layout, Rng& rng);

}  // namespace qotsim
