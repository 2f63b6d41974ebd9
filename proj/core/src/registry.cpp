#include "qotsim/registry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qotsim {

namespace {

[[noreturn]] void fail(const char* op, const std::string& what) {
  throw std::invalid_argument(std::string("Registry::") + op + ": " + what);
}

}  // namespace

const char* party_name(Party p) { return p == Party::alice ? "alice" : "bob"; }

std::vector<Handle> Registry::alloc(Party owner, const StateVector& state) {
  std::vector<Handle> handles;
  std::vector<std::uint64_t> ids;
  for (int i = 0; i < state.layout().count(); ++i) {
    const std::uint64_t id = next_handle_++;
    const int dim = state.layout().dim(i);
    records_[id] = Record{owner, dim, next_factor_, i};
    handles.push_back(Handle{id, dim});
    ids.push_back(id);
  }
  factors_.emplace(next_factor_++, Factor{std::move(ids), state});
  return handles;
}

const Registry::Record& Registry::record_of(Handle h, const char* op) const {
  const auto it = records_.find(h.id);
  if (it == records_.end()) fail(op, "stale or unknown handle");
  return it->second;
}

Party Registry::owner_of(Handle h) const { return record_of(h, "owner_of").owner; }

void Registry::transfer(Party caller, Handle h, Party to) {
  auto it = records_.find(h.id);
  if (it == records_.end()) fail("transfer", "stale or unknown handle");
  if (it->second.owner != caller) {
    fail("transfer", std::string(party_name(caller)) + " does not hold the subsystem");
  }
  it->second.owner = to;
}

void Registry::check_ownership(Party caller, std::span<const Handle> targets,
                               const char* op) const {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Record& rec = record_of(targets[i], op);
    if (rec.owner != caller) {
      fail(op, std::string(party_name(caller)) + " does not hold all targets");
    }
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i].id == targets[j].id) fail(op, "duplicate target");
    }
  }
}

std::vector<int> Registry::positions_in(std::uint64_t factor, std::span<const Handle> targets,
                                        const char* op) const {
  std::vector<int> positions;
  for (Handle h : targets) {
    const Record& rec = record_of(h, op);
    if (rec.factor != factor) fail(op, "target escaped its factor");  // internal invariant
    positions.push_back(rec.pos);
  }
  return positions;
}

std::uint64_t Registry::merge_for(std::span<const Handle> targets, const char* op) {
  if (targets.empty()) fail(op, "no targets");
  std::vector<std::uint64_t> keys;
  for (Handle h : targets) {
    const std::uint64_t key = record_of(h, op).factor;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  if (keys.size() == 1) return keys.front();

  std::vector<std::uint64_t> ids;
  StateVector merged = factors_.at(keys[0]).state;
  ids = factors_.at(keys[0]).ids;
  for (std::size_t i = 1; i < keys.size(); ++i) {
    const Factor& f = factors_.at(keys[i]);
    merged = tensor(merged, f.state);
    ids.insert(ids.end(), f.ids.begin(), f.ids.end());
  }
  for (std::uint64_t key : keys) factors_.erase(key);

  const std::uint64_t key = next_factor_++;
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    Record& rec = records_.at(ids[pos]);
    rec.factor = key;
    rec.pos = static_cast<int>(pos);
  }
  factors_.emplace(key, Factor{std::move(ids), std::move(merged)});
  return key;
}

void Registry::adopt_factor(std::vector<std::uint64_t> ids, StateVector state) {
  const std::uint64_t key = next_factor_++;
  for (std::size_t pos = 0; pos < ids.size(); ++pos) {
    Record& rec = records_.at(ids[pos]);
    rec.factor = key;
    rec.pos = static_cast<int>(pos);
  }
  factors_.emplace(key, Factor{std::move(ids), std::move(state)});
}

void Registry::try_split(std::uint64_t factor, std::span<const Handle> targets) {
  const Factor& f = factors_.at(factor);
  if (targets.size() >= f.ids.size()) return;

  const std::vector<int> positions = positions_in(factor, targets, "try_split");
  const auto split = try_split_pure(f.state, positions);
  if (!split) return;

  std::vector<std::uint64_t> target_ids;
  for (Handle h : targets) target_ids.push_back(h.id);
  std::vector<std::uint64_t> rest_ids;
  for (std::uint64_t id : f.ids) {
    if (std::find(target_ids.begin(), target_ids.end(), id) == target_ids.end()) {
      rest_ids.push_back(id);
    }
  }
  StateVector target_state = split->target_state;
  StateVector rest_state = split->rest_state;
  factors_.erase(factor);
  adopt_factor(std::move(target_ids), std::move(target_state));
  adopt_factor(std::move(rest_ids), std::move(rest_state));
}

void Registry::apply_unitary(Party caller, const Operator& op, std::span<const Handle> targets) {
  check_ownership(caller, targets, "apply_unitary");
  const std::uint64_t key = merge_for(targets, "apply_unitary");
  Factor& f = factors_.at(key);
  const std::vector<int> positions = positions_in(key, targets, "apply_unitary");
  f.state = apply_on_subsystems(op, f.state, positions);
}

MeasureOutcome Registry::measure(Party caller, const ProjectiveSet& set,
                                 std::span<const Handle> targets, Rng& rng) {
  check_ownership(caller, targets, "measure");
  const std::uint64_t key = merge_for(targets, "measure");
  Factor& f = factors_.at(key);
  const std::vector<int> positions = positions_in(key, targets, "measure");
  const MeasureResult result = measure_on_subsystems(f.state, set, positions, rng);
  f.state = result.post;
  try_split(key, targets);
  return MeasureOutcome{result.outcome, result.probability};
}

ChannelOutcome Registry::apply_channel(Party caller, const KrausChannel& channel,
                                       std::span<const Handle> targets, Rng& rng) {
  check_ownership(caller, targets, "apply_channel");
  const std::uint64_t key = merge_for(targets, "apply_channel");
  Factor& f = factors_.at(key);
  const std::vector<int> positions = positions_in(key, targets, "apply_channel");
  const KrausResult result = apply_kraus_on_subsystems(f.state, channel, positions, rng);
  f.state = result.post;
  try_split(key, targets);
  return ChannelOutcome{result.branch, result.probability};
}

DensityMatrix Registry::reduced_state(std::span<const Handle> handles) const {
  if (handles.empty()) fail("reduced_state", "no handles");
  for (std::size_t i = 0; i < handles.size(); ++i) {
    for (std::size_t j = i + 1; j < handles.size(); ++j) {
      if (handles[i].id == handles[j].id) fail("reduced_state", "duplicate handle");
    }
  }

  // Reduce each involved factor onto its requested subsystems, then tensor the
  // factor reductions and permute columns into the requested order.
  std::vector<std::uint64_t> keys;
  for (Handle h : handles) {
    const std::uint64_t key = record_of(h, "reduced_state").factor;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }

  std::vector<Handle> produced;  // subsystem order of the tensored reduction
  std::optional<DensityMatrix> acc;
  for (std::uint64_t key : keys) {
    std::vector<int> positions;
    for (Handle h : handles) {
      const Record& rec = records_.at(h.id);
      if (rec.factor != key) continue;
      positions.push_back(rec.pos);
      produced.push_back(h);
    }
    DensityMatrix part = reduce_pure(factors_.at(key).state, positions);
    acc = acc ? tensor(*acc, part) : std::move(part);
  }

  if (produced.size() == handles.size() &&
      std::equal(produced.begin(), produced.end(), handles.begin())) {
    return *acc;
  }

  // Permute subsystems of acc from `produced` order into `handles` order.
  std::vector<int> perm(handles.size());  // perm[requested slot] = produced slot
  for (std::size_t i = 0; i < handles.size(); ++i) {
    const auto it = std::find(produced.begin(), produced.end(), handles[i]);
    perm[i] = static_cast<int>(it - produced.begin());
  }
  std::vector<int> dims;
  for (Handle h : handles) dims.push_back(h.dim);
  SubsystemLayout out_layout(dims);
  const SubsystemLayout& in_layout = acc.layout();
  const long d = out_layout.total_dim();
  Eigen::MatrixXcd m(d, d);
  std::vector<long> remap(d);  // out index -> in index
  std::vector<int> out_digits(handles.size());
  std::vector<int> in_digits(handles.size());
  for (long idx = 0; idx < d; ++idx) {
    out_digits = out_layout.digits_of(idx);
    for (std::size_t s = 0; s < handles.size(); ++s) in_digits[perm[s]] = out_digits[s];
    remap[idx] = in_layout.index_of(in_digits);
  }
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) m(i, j) = acc->matrix()(remap[i], remap[j]);
  }
  return DensityMatrix(std::move(out_layout), std::move(m));
}

const StateVector& Registry::factor_state(Handle h) const {
  return factors_.at(record_of(h, "factor_state").factor).state;
}

std::vector<Handle> Registry::factor_members(Handle h) const {
  const Factor& f = factors_.at(record_of(h, "factor_members").factor);
  std::vector<Handle> members;
  for (std::uint64_t id : f.ids) members.push_back(Handle{id, records_.at(id).dim});
  return members;
}

void Registry::release(std::span<const Handle> handles) {
  std::vector<std::uint64_t> keys;
  for (std::size_t i = 0; i < handles.size(); ++i) {
    for (std::size_t j = i + 1; j < handles.size(); ++j) {
      if (handles[i].id == handles[j].id) fail("release", "duplicate handle");
    }
  }
  for (Handle h : handles) {
    const std::uint64_t key = record_of(h, "release").factor;
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::size_t covered = 0;
  for (std::uint64_t key : keys) covered += factors_.at(key).ids.size();
  if (covered != handles.size()) {
    fail("release", "handles must cover whole factors");
  }
  for (std::uint64_t key : keys) {
    for (std::uint64_t id : factors_.at(key).ids) records_.erase(id);
    factors_.erase(key);
  }
}

}  // namespace qotsim
