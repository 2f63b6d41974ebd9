#include "qotsim/qlin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qotsim {

namespace {

void require_finite(const Eigen::MatrixXcd& m, const char* where) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(where) + ": non-finite entry");
  }
}

void require_square_dim(const Eigen::MatrixXcd& m, long dim, const char* where) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(std::string(where) + ": matrix shape does not match layout");
  }
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Enumerates how a flat index decomposes into (target block, rest block) for
// a subset of subsystems; used by all the subsystem-local operations.
struct TargetIndexer {
  long target_dim = 1;
  long rest_dim = 1;
  std::vector<long> target_strides;  // stride of each target digit in the full index
  std::vector<int> target_dims;
  std::vector<long> rest_offsets;    // full-index contribution of each rest assignment

  TargetIndexer(const SubsystemLayout& layout, std::span<const int> targets) {
    const int count = layout.count();
    std::vector<bool> is_target(count, false);
    for (int t : targets) {
      if (t < 0 || t >= count) throw std::out_of_range("subsystem target out of range");
      if (is_target[t]) throw std::invalid_argument("subsystem targets must be distinct");
      is_target[t] = true;
    }
    for (int t : targets) {
      target_strides.push_back(layout.stride(t));
      target_dims.push_back(layout.dim(t));
      target_dim *= layout.dim(t);
    }
    std::vector<int> rest;
    for (int i = 0; i < count; ++i) {
      if (!is_target[i]) rest.push_back(i);
    }
    for (int r : rest) rest_dim *= layout.dim(r);
    rest_offsets.assign(rest_dim, 0);
    // Odometer over the rest subsystems, accumulating full-index offsets.
    std::vector<int> digits(rest.size(), 0);
    for (long i = 0; i < rest_dim; ++i) {
      long offset = 0;
      for (std::size_t j = 0; j < rest.size(); ++j) offset += digits[j] * layout.stride(rest[j]);
      rest_offsets[i] = offset;
      for (int j = static_cast<int>(rest.size()) - 1; j >= 0; --j) {
        if (++digits[j] < layout.dim(rest[j])) break;
        digits[j] = 0;
      }
    }
  }

  long target_offset(long block_index) const {
    long offset = 0;
    for (int j = static_cast<int>(target_dims.size()) - 1; j >= 0; --j) {
      offset += (block_index % target_dims[j]) * target_strides[j];
      block_index /= target_dims[j];
    }
    return offset;
  }
};

// Shared core of measurement and Kraus application: pick a branch by its
// squared norm, renormalize the surviving amplitudes.
template <typename BranchMatrix>
std::pair<int, double> sample_branch(const Eigen::VectorXcd& amps, const TargetIndexer& ix,
                                     int branch_count, BranchMatrix&& branch, Rng& rng,
                                     std::vector<double>& probs) {
  probs.assign(branch_count, 0.0);
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);
  Eigen::VectorXcd slice(ix.target_dim);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    for (long t = 0; t < ix.target_dim; ++t) slice[t] = amps[base + gather[t]];
    for (int k = 0; k < branch_count; ++k) {
      probs[k] += (branch(k) * slice).squaredNorm();
    }
  }
  double total = 0.0;
  for (double p : probs) total += p;
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::logic_error("branch probabilities do not sum to one");
  }
  const double u = rng.uniform01() * total;
  double cumulative = 0.0;
  int picked = branch_count - 1;
  for (int k = 0; k < branch_count; ++k) {
    if (probs[k] <= 0.0) continue;  // never select a zero-probability branch
    cumulative += probs[k];
    if (u < cumulative) {
      picked = k;
      break;
    }
  }
  while (probs[picked] <= 0.0 && picked > 0) --picked;
  return {picked, probs[picked]};
}

Eigen::VectorXcd apply_branch(const Eigen::VectorXcd& amps, const TargetIndexer& ix,
                              const Eigen::MatrixXcd& m, double renorm) {
  Eigen::VectorXcd out(amps.size());
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);
  Eigen::VectorXcd slice(ix.target_dim);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    for (long t = 0; t < ix.target_dim; ++t) slice[t] = amps[base + gather[t]];
    const Eigen::VectorXcd mapped = (m * slice) * renorm;
    for (long t = 0; t < ix.target_dim; ++t) out[base + gather[t]] = mapped[t];
  }
  return out;
}

}  // namespace

// ───────────────────────── constructors ─────────────────────────

StateVector::StateVector(SubsystemLayout layout, Eigen::VectorXcd amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_.total_dim()) {
    throw std::invalid_argument("StateVector: amplitude count does not match layout");
  }
  require_finite(amps_, "StateVector");
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw std::invalid_argument("StateVector: not normalized");
  }
}

StateVector StateVector::basis(SubsystemLayout layout, long index) {
  if (index < 0 || index >= layout.total_dim()) {
    throw std::out_of_range("StateVector::basis: index out of range");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(layout.total_dim());
  amps[index] = 1.0;
  return StateVector(std::move(layout), std::move(amps));
}

DensityMatrix::DensityMatrix(SubsystemLayout layout, Eigen::MatrixXcd rho)
    : layout_(std::move(layout)), rho_(std::move(rho)) {
  require_square_dim(rho_, layout_.total_dim(), "DensityMatrix");
  require_finite(rho_, "DensityMatrix");
  if (max_abs(rho_ - rho_.adjoint().eval()) > kNormTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  }
  if (std::abs(rho_.trace().real() - 1.0) > kNormTol || std::abs(rho_.trace().imag()) > kNormTol) {
    throw std::invalid_argument("DensityMatrix: trace is not one");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigClamp) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& state) {
  return DensityMatrix(state.layout(), state.amplitudes() * state.amplitudes().adjoint());
}

Operator::Operator(SubsystemLayout layout, Eigen::MatrixXcd matrix, OpKind kind)
    : layout_(std::move(layout)), m_(std::move(matrix)), kind_(kind) {
  require_square_dim(m_, layout_.total_dim(), "Operator");
  require_finite(m_, "Operator");
  const long d = layout_.total_dim();
  switch (kind_) {
    case OpKind::unitary:
      if (max_abs(m_.adjoint() * m_ - Eigen::MatrixXcd::Identity(d, d)) > kNormTol) {
        throw std::invalid_argument("Operator: not unitary");
      }
      break;
    case OpKind::projector:
      if (max_abs(m_ - m_.adjoint().eval()) > kNormTol || max_abs(m_ * m_ - m_) > kNormTol) {
        throw std::invalid_argument("Operator: not a projector");
      }
      break;
    case OpKind::hermitian:
      if (max_abs(m_ - m_.adjoint().eval()) > kNormTol) {
        throw std::invalid_argument("Operator: not Hermitian");
      }
      break;
    case OpKind::kraus:
      break;  // any finite matrix; completeness lives in KrausChannel
  }
}

ProjectiveSet::ProjectiveSet(SubsystemLayout layout, std::vector<Eigen::MatrixXcd> projectors)
    : layout_(std::move(layout)), projectors_(std::move(projectors)) {
  if (projectors_.empty()) throw std::invalid_argument("ProjectiveSet: empty");
  const long d = layout_.total_dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& p : projectors_) {
    require_square_dim(p, d, "ProjectiveSet");
    require_finite(p, "ProjectiveSet");
    if (max_abs(p - p.adjoint().eval()) > kNormTol || max_abs(p * p - p) > kNormTol) {
      throw std::invalid_argument("ProjectiveSet: element is not a projector");
    }
    sum += p;
  }
  if (max_abs(sum - Eigen::MatrixXcd::Identity(d, d)) > kNormTol) {
    throw std::invalid_argument("ProjectiveSet: projectors do not sum to identity");
  }
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if (max_abs(projectors_[i] * projectors_[j]) > kNormTol) {
        throw std::invalid_argument("ProjectiveSet: projectors are not orthogonal");
      }
    }
  }
}

KrausChannel::KrausChannel(SubsystemLayout layout, std::vector<Eigen::MatrixXcd> elements)
    : layout_(std::move(layout)), elements_(std::move(elements)) {
  if (elements_.empty()) throw std::invalid_argument("KrausChannel: empty");
  const long d = layout_.total_dim();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& k : elements_) {
    require_square_dim(k, d, "KrausChannel");
    require_finite(k, "KrausChannel");
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - Eigen::MatrixXcd::Identity(d, d)) > kNormTol) {
    throw std::invalid_argument("KrausChannel: elements are not trace-preserving");
  }
}

// ───────────────────────── composition and evolution ─────────────────────────

StateVector tensor(const StateVector& a, const StateVector& b) {
  const long da = a.layout().total_dim();
  const long db = b.layout().total_dim();
  Eigen::VectorXcd amps(da * db);
  for (long i = 0; i < da; ++i) {
    amps.segment(i * db, db) = a.amplitudes()[i] * b.amplitudes();
  }
  return StateVector(SubsystemLayout::concat(a.layout(), b.layout()), std::move(amps));
}

Operator tensor(const Operator& a, const Operator& b) {
  if (a.kind() != b.kind()) {
    throw std::invalid_argument("tensor: operator kinds do not match");
  }
  const long da = a.layout().total_dim();
  const long db = b.layout().total_dim();
  Eigen::MatrixXcd m(da * db, da * db);
  for (long i = 0; i < da; ++i) {
    for (long j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return Operator(SubsystemLayout::concat(a.layout(), b.layout()), std::move(m), a.kind());
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const long da = a.layout().total_dim();
  const long db = b.layout().total_dim();
  Eigen::MatrixXcd m(da * db, da * db);
  for (long i = 0; i < da; ++i) {
    for (long j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
    }
  }
  return DensityMatrix(SubsystemLayout::concat(a.layout(), b.layout()), std::move(m));
}

StateVector apply(const Operator& op, const StateVector& state) {
  if (op.layout() != state.layout()) {
    throw std::invalid_argument("apply: operator and state layouts differ");
  }
  if (op.kind() != OpKind::unitary) {
    throw std::invalid_argument("apply: only unitary operators preserve pure states");
  }
  return StateVector(state.layout(), op.matrix() * state.amplitudes());
}

StateVector apply_on_subsystems(const Operator& op, const StateVector& state,
                                std::span<const int> targets) {
  if (op.kind() != OpKind::unitary) {
    throw std::invalid_argument("apply_on_subsystems: only unitary operators preserve pure states");
  }
  if (static_cast<int>(targets.size()) != op.layout().count()) {
    throw std::invalid_argument("apply_on_subsystems: target count does not match operator");
  }
  TargetIndexer ix(state.layout(), targets);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (state.layout().dim(targets[i]) != op.layout().dim(static_cast<int>(i))) {
      throw std::invalid_argument("apply_on_subsystems: target dimension mismatch");
    }
  }
  return StateVector(state.layout(), apply_branch(state.amplitudes(), ix, op.matrix(), 1.0));
}

// ───────────────────────── reduction and spectra ─────────────────────────

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  TargetIndexer ix(rho.layout(), keep);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ix.target_dim, ix.target_dim);
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    for (long i = 0; i < ix.target_dim; ++i) {
      for (long j = 0; j < ix.target_dim; ++j) {
        out(i, j) += rho.matrix()(base + gather[i], base + gather[j]);
      }
    }
  }
  std::vector<int> dims;
  for (int k : keep) dims.push_back(rho.layout().dim(k));
  return DensityMatrix(SubsystemLayout(std::move(dims)), std::move(out));
}

DensityMatrix reduce_pure(const StateVector& state, std::span<const int> keep) {
  TargetIndexer ix(state.layout(), keep);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(ix.target_dim, ix.target_dim);
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);
  Eigen::VectorXcd slice(ix.target_dim);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    for (long t = 0; t < ix.target_dim; ++t) slice[t] = state.amplitudes()[base + gather[t]];
    out.noalias() += slice * slice.adjoint();
  }
  std::vector<int> dims;
  for (int k : keep) dims.push_back(state.layout().dim(k));
  return DensityMatrix(SubsystemLayout(std::move(dims)), std::move(out));
}

std::optional<PureSplit> try_split_pure(const StateVector& state, std::span<const int> targets) {
  if (targets.empty() || static_cast<int>(targets.size()) >= state.layout().count()) {
    throw std::invalid_argument("try_split_pure: targets must be a proper nonempty subset");
  }
  const DensityMatrix reduced = reduce_pure(state, targets);
  const double purity = reduced.matrix().squaredNorm();  // tr(rho^2) for Hermitian rho
  if (std::abs(purity - 1.0) > kNormTol) return std::nullopt;

  const Eigensystem es = hermitian_eigensystem(reduced.matrix());
  const Eigen::VectorXcd phi = es.vectors.col(0);
  const double lambda = es.values[0];
  if (lambda <= 0.5) return std::nullopt;  // defensive; purity check should preclude this

  TargetIndexer ix(state.layout(), targets);
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);

  // <phi| contracted against the target slot leaves the rest factor, up to norm.
  Eigen::VectorXcd rest(ix.rest_dim);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    Cx acc = 0.0;
    for (long t = 0; t < ix.target_dim; ++t) {
      acc += std::conj(phi[t]) * state.amplitudes()[base + gather[t]];
    }
    rest[r] = acc;
  }
  const double rest_norm = rest.norm();
  if (std::abs(rest_norm - 1.0) > kNormTol) return std::nullopt;
  rest /= rest_norm;

  std::vector<int> target_dims;
  for (int t : targets) target_dims.push_back(state.layout().dim(t));
  std::vector<int> rest_dims;
  for (int i = 0; i < state.layout().count(); ++i) {
    if (std::find(targets.begin(), targets.end(), i) == targets.end()) {
      rest_dims.push_back(state.layout().dim(i));
    }
  }
  return PureSplit{StateVector(SubsystemLayout(std::move(target_dims)), phi),
                   StateVector(SubsystemLayout(std::move(rest_dims)), std::move(rest))};
}

Eigensystem hermitian_eigensystem(const Eigen::MatrixXcd& h) {
  require_finite(h, "hermitian_eigensystem");
  if (h.rows() != h.cols()) throw std::invalid_argument("hermitian_eigensystem: not square");
  if (max_abs(h - h.adjoint().eval()) > kNormTol) {
    throw std::invalid_argument("hermitian_eigensystem: not Hermitian");
  }
  const Eigen::MatrixXcd sym = 0.5 * (h + h.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigensystem: eigensolver failed");
  }
  const long d = h.rows();
  Eigensystem out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (long i = 0; i < d; ++i) {  // ascending -> descending
    double v = solver.eigenvalues()[d - 1 - i];
    if (v < 0.0 && v >= -kEigClamp) v = 0.0;
    out.values[i] = v;
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

double trace_norm(const Eigen::MatrixXcd& hermitian) {
  const Eigensystem es = hermitian_eigensystem(hermitian);
  return es.values.cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.layout() != b.layout()) throw std::invalid_argument("trace_distance: layout mismatch");
  return 0.5 * trace_norm(a.matrix() - b.matrix());
}

namespace {
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& rho) {
  const Eigensystem es = hermitian_eigensystem(rho);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
  for (long i = 0; i < es.values.size(); ++i) {
    const double v = std::max(es.values[i], 0.0);
    out.noalias() += std::sqrt(v) * es.vectors.col(i) * es.vectors.col(i).adjoint();
  }
  return out;
}
}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.layout() != b.layout()) throw std::invalid_argument("fidelity: layout mismatch");
  const Eigen::MatrixXcd sa = psd_sqrt(a.matrix());
  const Eigen::MatrixXcd inner = sa * b.matrix() * sa;  // PSD; eigenvalues = squared singular values
  const Eigensystem es = hermitian_eigensystem(inner);
  double f = 0.0;
  for (long i = 0; i < es.values.size(); ++i) f += std::sqrt(std::max(es.values[i], 0.0));
  return std::clamp(f, 0.0, 1.0);
}

double helstrom_success(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.layout() != rho1.layout()) throw std::invalid_argument("helstrom_success: layout mismatch");
  return 0.5 + 0.25 * trace_norm(rho0.matrix() - rho1.matrix());
}

Eigen::MatrixXcd helstrom_projector(const DensityMatrix& rho0, const DensityMatrix& rho1) {
  if (rho0.layout() != rho1.layout()) throw std::invalid_argument("helstrom_projector: layout mismatch");
  const Eigensystem es = hermitian_eigensystem(rho0.matrix() - rho1.matrix());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(rho0.matrix().rows(), rho0.matrix().cols());
  for (long i = 0; i < es.values.size(); ++i) {
    if (es.values[i] > 0.0) p.noalias() += es.vectors.col(i) * es.vectors.col(i).adjoint();
  }
  return p;
}

// ───────────────────────── sampling ─────────────────────────

MeasureResult measure_projective(const StateVector& state, const ProjectiveSet& set, Rng& rng) {
  if (set.layout() != state.layout()) {
    throw std::invalid_argument("measure_projective: layout mismatch");
  }
  std::vector<int> all(state.layout().count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return measure_on_subsystems(state, set, all, rng);
}

MeasureResult measure_on_subsystems(const StateVector& state, const ProjectiveSet& set,
                                    std::span<const int> targets, Rng& rng) {
  TargetIndexer ix(state.layout(), targets);
  if (ix.target_dim != set.layout().total_dim()) {
    throw std::invalid_argument("measure_on_subsystems: projector dimension mismatch");
  }
  std::vector<double> probs;
  auto [outcome, probability] = sample_branch(
      state.amplitudes(), ix, set.size(), [&](int k) -> const Eigen::MatrixXcd& { return set.at(k); },
      rng, probs);
  Eigen::VectorXcd post = apply_branch(state.amplitudes(), ix, set.at(outcome),
                                       1.0 / std::sqrt(probability));
  return MeasureResult{outcome, probability, StateVector(state.layout(), std::move(post))};
}

KrausResult apply_kraus_on_subsystems(const StateVector& state, const KrausChannel& channel,
                                      std::span<const int> targets, Rng& rng) {
  TargetIndexer ix(state.layout(), targets);
  if (ix.target_dim != channel.layout().total_dim()) {
    throw std::invalid_argument("apply_kraus_on_subsystems: element dimension mismatch");
  }
  std::vector<double> probs;
  auto [branch, probability] = sample_branch(
      state.amplitudes(), ix, channel.size(),
      [&](int k) -> const Eigen::MatrixXcd& { return channel.at(k); }, rng, probs);
  Eigen::VectorXcd post = apply_branch(state.amplitudes(), ix, channel.at(branch),
                                       1.0 / std::sqrt(probability));
  return KrausResult{branch, probability, StateVector(state.layout(), std::move(post))};
}

std::vector<double> outcome_probabilities(const StateVector& state, const ProjectiveSet& set,
                                          std::span<const int> targets) {
  TargetIndexer ix(state.layout(), targets);
  if (ix.target_dim != set.layout().total_dim()) {
    throw std::invalid_argument("outcome_probabilities: projector dimension mismatch");
  }
  std::vector<double> probs(set.size(), 0.0);
  std::vector<long> gather(ix.target_dim);
  for (long t = 0; t < ix.target_dim; ++t) gather[t] = ix.target_offset(t);
  Eigen::VectorXcd slice(ix.target_dim);
  for (long r = 0; r < ix.rest_dim; ++r) {
    const long base = ix.rest_offsets[r];
    for (long t = 0; t < ix.target_dim; ++t) slice[t] = state.amplitudes()[base + gather[t]];
    for (int k = 0; k < set.size(); ++k) probs[k] += (set.at(k) * slice).squaredNorm();
  }
  return probs;
}

// ───────────────────────── random instances ─────────────────────────

StateVector random_state(SubsystemLayout layout, Rng& rng) {
  Eigen::VectorXcd amps(layout.total_dim());
  for (long i = 0; i < amps.size(); ++i) amps[i] = rng.gaussian_complex();
  amps.normalize();
  return StateVector(std::move(layout), std::move(amps));
}

Eigen::MatrixXcd random_unitary(int dim, Rng& rng) {
  Eigen::MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) g(i, j) = rng.gaussian_complex();
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {  // fix the phase convention so Q is Haar
    const Cx d = r(i, i);
    q.col(i) *= (std::abs(d) > 0.0) ? d / std::abs(d) : Cx(1.0, 0.0);
  }
  return q;
}

DensityMatrix random_density(SubsystemLayout layout, Rng& rng) {
  const long d = layout.total_dim();
  Eigen::MatrixXcd g(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) g(i, j) = rng.gaussian_complex();
  }
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityMatrix(std::move(layout), std::move(rho));
}

}  // namespace qotsim
