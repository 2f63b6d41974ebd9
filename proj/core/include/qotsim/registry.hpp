#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "qotsim/qlin.hpp"

namespace qotsim {

enum class Party { alice, bob };

const char* party_name(Party p);

// Opaque reference to one subsystem held by the registry.
struct Handle {
  std::uint64_t id = 0;
  int dim = 0;

  bool operator==(const Handle&) const = default;
};

struct MeasureOutcome {
  int outcome = 0;
  double probability = 0.0;
};

struct ChannelOutcome {
  int branch = 0;
  double probability = 0.0;
};

// Shared quantum state with per-subsystem ownership.  The global state is kept
// as a product of independent factors; factors merge lazily when an operation
// couples them and split back apart when a measurement leaves a subset pure,
// so entanglement never spreads wider than the operations demand.
//
// Every mutating call names the acting party, and the registry rejects any
// action on a subsystem that party does not currently own.  reduced_state is
// the one deliberately unphysical accessor (analysis and tests only): it
// ignores ownership and never disturbs the state.
class Registry {
 public:
  Registry() = default;
  Registry(const Registry&) = delete;
  Registry& operator=(const Registry&) = delete;

  // Adds a fresh multi-subsystem state owned by `owner`; returns one handle
  // per subsystem, in layout order.
  std::vector<Handle> alloc(Party owner, const StateVector& state);

  Party owner_of(Handle h) const;
  void transfer(Party caller, Handle h, Party to);

  void apply_unitary(Party caller, const Operator& op, std::span<const Handle> targets);
  MeasureOutcome measure(Party caller, const ProjectiveSet& set, std::span<const Handle> targets,
                         Rng& rng);
  ChannelOutcome apply_channel(Party caller, const KrausChannel& channel,
                               std::span<const Handle> targets, Rng& rng);

  // Joint reduced density matrix of the named subsystems, in the order given.
  // Ownership-agnostic and non-destructive.
  DensityMatrix reduced_state(std::span<const Handle> handles) const;

  // Introspection for tests: the pure state of the factor containing `h`, and
  // the handles sharing that factor (in the factor's internal order).
  const StateVector& factor_state(Handle h) const;
  std::vector<Handle> factor_members(Handle h) const;

  // Discards subsystems.  The handles must cover whole factors (no partner
  // left behind), so releasing never turns a pure factor into a mixed one.
  void release(std::span<const Handle> handles);

  std::size_t factor_count() const { return factors_.size(); }

 private:
  struct Factor {
    std::vector<std::uint64_t> ids;  // handle ids, in subsystem order
    StateVector state;
  };
  struct Record {
    Party owner = Party::alice;
    int dim = 0;
    std::uint64_t factor = 0;
    int pos = 0;  // index within the factor's subsystem list
  };

  const Record& record_of(Handle h, const char* op) const;
  // Merges the factors containing the targets into one; returns its key.
  std::uint64_t merge_for(std::span<const Handle> targets, const char* op);
  std::vector<int> positions_in(std::uint64_t factor, std::span<const Handle> targets,
                                const char* op) const;
  void check_ownership(Party caller, std::span<const Handle> targets, const char* op) const;
  // After a measurement or channel branch, tries to detach the targets (or the
  // rest) into their own factor again.
  void try_split(std::uint64_t factor, std::span<const Handle> targets);
  void adopt_factor(std::vector<std::uint64_t> ids, StateVector state);

  std::map<std::uint64_t, Factor> factors_;
  std::unordered_map<std::uint64_t, Record> records_;
  std::uint64_t next_handle_ = 1;
  std::uint64_t next_factor_ = 1;
};

}  // namespace qotsim
