#include "qotsim/strategies.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "qotsim/codeword.hpp"
#include "qotsim/weakot.hpp"

namespace qotsim {

namespace {

// Four-outcome computational measurement of a qubit pair; outcome = 2*g0+g1.
const ProjectiveSet& pair_computational_set() {
  static const ProjectiveSet* set = [] {
    std::vector<Eigen::MatrixXcd> projectors;
    for (int o = 0; o < 4; ++o) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(4, 4);
      p(o, o) = 1.0;
      projectors.push_back(std::move(p));
    }
    return new ProjectiveSet(SubsystemLayout({2, 2}), std::move(projectors));
  }();
  return *set;
}

// Plus/minus product measurement of a qubit pair; outcome bit 1 = minus.
const ProjectiveSet& pair_sign_set() {
  static const ProjectiveSet* set = [] {
    Eigen::Vector2cd plus(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    Eigen::Vector2cd minus(1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0));
    const Eigen::Vector2cd basis[2] = {plus, minus};
    std::vector<Eigen::MatrixXcd> projectors;
    for (int s0 = 0; s0 < 2; ++s0) {
      for (int s1 = 0; s1 < 2; ++s1) {
        Eigen::Vector4cd v;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) v[2 * a + b] = basis[s0][a] * basis[s1][b];
        }
        projectors.push_back(v * v.adjoint());
      }
    }
    return new ProjectiveSet(SubsystemLayout({2, 2}), std::move(projectors));
  }();
  return *set;
}

const ProjectiveSet& qutrit_computational_set() {
  static const ProjectiveSet* set = [] {
    std::vector<Eigen::MatrixXcd> projectors;
    for (int o = 0; o < 3; ++o) {
      Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3);
      p(o, o) = 1.0;
      projectors.push_back(std::move(p));
    }
    return new ProjectiveSet(SubsystemLayout({3}), std::move(projectors));
  }();
  return *set;
}

// ───────────────────────── honest Alice ─────────────────────────

class HonestAlice final : public AliceStrategy {
 public:
  HonestAlice() = default;
  explicit HonestAlice(std::vector<BitPair> pairs) : pairs_(std::move(pairs)), fixed_(true) {}

  void begin(const ProtocolView& view, Registry&, Rng& rng) override {
    if (fixed_) {
      if (static_cast<int>(pairs_.size()) != view.rounds) {
        throw std::invalid_argument("honest alice: fixed pairs do not cover the rounds");
      }
      return;
    }
    pairs_.assign(view.rounds, BitPair{});
    switch (view.kind) {
      case ProtocolKind::cks_round:
        for (BitPair& p : pairs_) p = BitPair{rng.bit(), rng.bit()};
        break;
      case ProtocolKind::protocol_b: {
        const CodewordSet& set = *view.codewords;
        for (int t = 0; t < view.triples; ++t) {
          const std::uint32_t w0 = set.sample(rng);
          const std::uint32_t w1 = set.sample(rng);
          for (int j = 0; j < 3; ++j) {
            pairs_[3 * t + j] = BitPair{set.bit_of(w0, j), set.bit_of(w1, j)};
          }
        }
        break;
      }
      case ProtocolKind::protocol_a: {
        const CodewordSet& set = *view.codewords;
        const std::uint32_t w0 = set.sample(rng);
        const std::uint32_t w1 = set.sample(rng);
        for (int i = 0; i < view.rounds; ++i) {
          pairs_[i] = BitPair{set.bit_of(w0, i), set.bit_of(w1, i)};
        }
        break;
      }
    }
  }

  void on_round(Registry& reg, Rng&, int round, Handle beta) override {
    const BitPair x = pairs_.at(round);
    const Handle targets[1] = {beta};
    reg.apply_unitary(Party::alice, phase_unitary(x.x0, x.x1), targets);
    reg.transfer(Party::alice, beta, Party::bob);
  }

  BitPair on_reveal(Registry&, Rng&, int round) override { return pairs_.at(round); }

  BitPair on_encode(Registry&, Rng&, int round, BitPair targets) override {
    const BitPair x = pairs_.at(round);
    return BitPair{targets.x0 ^ x.x0, targets.x1 ^ x.x1};
  }

  int guess_b(Rng& rng) override { return rng.bit(); }

 private:
  std::vector<BitPair> pairs_;
  bool fixed_ = false;
};

// ───────────────────────── basis attack ─────────────────────────

class BasisAttackAlice final : public AliceStrategy {
 public:
  void begin(const ProtocolView& view, Registry&, Rng&) override {
    branch_.assign(view.rounds, 2);
    guess_round_ = 0;
  }

  void on_round(Registry& reg, Rng& rng, int round, Handle beta) override {
    const Handle targets[1] = {beta};
    const MeasureOutcome out = reg.measure(Party::alice, qutrit_computational_set(), targets, rng);
    branch_.at(round) = out.outcome;
    reg.transfer(Party::alice, beta, Party::bob);
  }

  BitPair on_reveal(Registry&, Rng&, int) override { return BitPair{0, 0}; }

  BitPair on_encode(Registry&, Rng&, int round, BitPair) override {
    guess_round_ = round;
    return BitPair{0, 0};
  }

  int guess_b(Rng& rng) override {
    const int m = branch_.at(guess_round_);
    return m == 2 ? rng.bit() : m;
  }

  bool definite_b() const override { return branch_.at(guess_round_) != 2; }

  std::string record() const override {
    return "basis:" + std::to_string(branch_.at(guess_round_));
  }

 private:
  std::vector<int> branch_ = {2};
  int guess_round_ = 0;
};

// ───────────────────────── collective cheats ─────────────────────────

// Shared plus/minus readout bookkeeping for the collective strategies.
struct SignReadout {
  int guess = 0;
  bool definite = false;
  bool decided = false;

  void from_outcome(int outcome) {
    const int minus0 = outcome >> 1;
    const int minus1 = outcome & 1;
    decided = true;
    if (minus0 == 1) {
      guess = 0;
      definite = true;
    } else if (minus1 == 1) {
      guess = 1;
      definite = true;
    } else {
      definite = false;
    }
  }
};

class CollectiveTripleAlice final : public AliceStrategy {
 public:
  void begin(const ProtocolView& view, Registry&, Rng&) override {
    if (view.kind != ProtocolKind::protocol_b) {
      throw std::invalid_argument("collective triple cheat: only defined for the triple protocol");
    }
    triples_ = view.triples;
    controls_.assign(triples_, {});
    revealed_.assign(3 * triples_, std::nullopt);
    readout_ = SignReadout{};
  }

  void on_round(Registry& reg, Rng&, int round, Handle beta) override {
    const int t = round / 3;
    const int j = round % 3;
    if (j == 0) controls_[t] = reg.alloc(Party::alice, register_state());
    const Handle targets[3] = {controls_[t][j], controls_[t][3 + j], beta};
    reg.apply_unitary(Party::alice, controlled_phase_unitary(), targets);
    reg.transfer(Party::alice, beta, Party::bob);
  }

  BitPair on_reveal(Registry& reg, Rng& rng, int round) override {
    if (!revealed_.at(round)) {
      const int t = round / 3;
      const int j = round % 3;
      const Handle targets[2] = {controls_[t][j], controls_[t][3 + j]};
      const MeasureOutcome out = reg.measure(Party::alice, pair_computational_set(), targets, rng);
      revealed_[round] = BitPair{out.outcome >> 1, out.outcome & 1};
    }
    return *revealed_[round];
  }

  BitPair on_encode(Registry& reg, Rng& rng, int round, BitPair) override {
    const int t = round / 3;
    const int j = round % 3;
    const Handle targets[2] = {controls_[t][j], controls_[t][3 + j]};
    const MeasureOutcome out = reg.measure(Party::alice, pair_sign_set(), targets, rng);
    readout_.from_outcome(out.outcome);
    return BitPair{0, 0};
  }

  int guess_b(Rng& rng) override {
    return readout_.definite ? readout_.guess : rng.bit();
  }

  bool definite_b() const override { return readout_.definite; }

  std::string record() const override {
    if (!readout_.decided) return "collective:unencoded";
    return readout_.definite ? "collective:minus" : "collective:plus-plus";
  }

 private:
  // (1/2)(|000> + |001> + |010> + |100>) per control block, one block per
  // value string; subsystems 0..2 control string 0, 3..5 control string 1.
  static const StateVector& register_state() {
    static const StateVector* state = [] {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(64);
      const int words[4] = {0b000, 0b001, 0b010, 0b100};
      for (int w0 : words) {
        for (int w1 : words) amps[8 * w0 + w1] = 0.25;
      }
      return new StateVector(SubsystemLayout({2, 2, 2, 2, 2, 2}), std::move(amps));
    }();
    return *state;
  }

  int triples_ = 0;
  std::vector<std::vector<Handle>> controls_;
  std::vector<std::optional<BitPair>> revealed_;
  SignReadout readout_;
};

class OnePairCollectiveAlice final : public AliceStrategy {
 public:
  void begin(const ProtocolView& view, Registry&, Rng&) override {
    if (view.kind != ProtocolKind::protocol_b) {
      throw std::invalid_argument("one-pair cheat: only defined for the triple protocol");
    }
    triples_ = view.triples;
    quantum_pos_.assign(triples_, 0);
    controls_.assign(triples_, {});
    revealed_.assign(3 * triples_, std::nullopt);
    readout_ = SignReadout{};
    encode_quantum_ = false;
  }

  void on_round(Registry& reg, Rng& rng, int round, Handle beta) override {
    const int t = round / 3;
    const int j = round % 3;
    if (j == 0) {
      quantum_pos_[t] = rng.uniform_int(3);
      controls_[t] = reg.alloc(Party::alice, pair_plus_state());
    }
    if (j == quantum_pos_[t]) {
      const Handle targets[3] = {controls_[t][0], controls_[t][1], beta};
      reg.apply_unitary(Party::alice, controlled_phase_unitary(), targets);
    } else {
      const Handle targets[1] = {beta};
      reg.apply_unitary(Party::alice, phase_unitary(0, 0), targets);
    }
    reg.transfer(Party::alice, beta, Party::bob);
  }

  BitPair on_reveal(Registry& reg, Rng& rng, int round) override {
    const int t = round / 3;
    if (round % 3 != quantum_pos_[t]) return BitPair{0, 0};
    if (!revealed_.at(round)) {
      const MeasureOutcome out =
          reg.measure(Party::alice, pair_computational_set(), controls_[t], rng);
      revealed_[round] = BitPair{out.outcome >> 1, out.outcome & 1};
    }
    return *revealed_[round];
  }

  BitPair on_encode(Registry& reg, Rng& rng, int round, BitPair targets) override {
    const int t = round / 3;
    if (round % 3 != quantum_pos_[t]) {
      // Honest run with zero values: announce the targets themselves.
      readout_.decided = true;
      readout_.definite = false;
      encode_quantum_ = false;
      return targets;
    }
    const MeasureOutcome out = reg.measure(Party::alice, pair_sign_set(), controls_[t], rng);
    readout_.from_outcome(out.outcome);
    encode_quantum_ = true;
    return BitPair{0, 0};
  }

  int guess_b(Rng& rng) override {
    return readout_.definite ? readout_.guess : rng.bit();
  }

  bool definite_b() const override { return readout_.definite; }

  std::string record() const override {
    if (!readout_.decided) return "one-pair:unencoded";
    if (!encode_quantum_) return "one-pair:honest-run";
    return readout_.definite ? "one-pair:minus" : "one-pair:plus-plus";
  }

 private:
  static const StateVector& pair_plus_state() {
    static const StateVector* state = [] {
      Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(4, 0.5);
      return new StateVector(SubsystemLayout({2, 2}), std::move(amps));
    }();
    return *state;
  }

  int triples_ = 0;
  std::vector<int> quantum_pos_;
  std::vector<std::vector<Handle>> controls_;
  std::vector<std::optional<BitPair>> revealed_;
  SignReadout readout_;
  bool encode_quantum_ = false;
};

// ───────────────────────── channel attack ─────────────────────────

class ChannelAttackAlice final : public AliceStrategy {
 public:
  ChannelAttackAlice(const KrausChannel& channel, int cheat_count, std::vector<int> cheat_runs,
                     AnnounceRule announce)
      : channel_(channel),
        cheat_count_(cheat_count),
        fixed_runs_(std::move(cheat_runs)),
        announce_(std::move(announce)) {
    if (channel_.layout() != SubsystemLayout({3})) {
      throw std::invalid_argument("channel attack: channel must act on one carrier qutrit");
    }
  }

  void begin(const ProtocolView& view, Registry&, Rng& rng) override {
    branch_.assign(view.rounds, -1);
    guess_round_ = -1;
    if (!fixed_runs_.empty()) {
      cheat_runs_ = fixed_runs_;
      for (int run : cheat_runs_) {
        if (run < 0 || run >= view.rounds) {
          throw std::invalid_argument("channel attack: cheat run out of range");
        }
      }
    } else {
      if (cheat_count_ < 1 || cheat_count_ > view.rounds) {
        throw std::invalid_argument("channel attack: cheat count out of range");
      }
      cheat_runs_ = draw_checked_subset(rng, view.rounds, cheat_count_);
    }
  }

  void on_round(Registry& reg, Rng& rng, int round, Handle beta) override {
    const Handle targets[1] = {beta};
    if (is_cheat(round)) {
      const ChannelOutcome out = reg.apply_channel(Party::alice, channel_, targets, rng);
      branch_.at(round) = out.branch;
    } else {
      reg.apply_unitary(Party::alice, phase_unitary(0, 0), targets);
    }
    reg.transfer(Party::alice, beta, Party::bob);
  }

  BitPair on_reveal(Registry&, Rng&, int round) override {
    if (is_cheat(round) && announce_) return announce_(branch_.at(round));
    return BitPair{0, 0};
  }

  BitPair on_encode(Registry&, Rng&, int round, BitPair targets) override {
    guess_round_ = round;
    if (is_cheat(round)) return announce_ ? announce_(branch_.at(round)) : BitPair{0, 0};
    return targets;  // honest run with zero values
  }

  int guess_b(Rng& rng) override {
    if (guess_round_ >= 0 && is_cheat(guess_round_)) {
      const int m = branch_.at(guess_round_);
      if (m == 0 || m == 1) return m;
    }
    return rng.bit();
  }

  bool definite_b() const override {
    if (guess_round_ < 0 || !is_cheat(guess_round_)) return false;
    const int m = branch_.at(guess_round_);
    return m == 0 || m == 1;
  }

  std::string record() const override {
    std::string s = "channel:";
    for (std::size_t i = 0; i < cheat_runs_.size(); ++i) {
      if (i > 0) s += ',';
      s += std::to_string(cheat_runs_[i]) + "->" + std::to_string(branch_.at(cheat_runs_[i]));
    }
    return s;
  }

 private:
  bool is_cheat(int round) const {
    return std::find(cheat_runs_.begin(), cheat_runs_.end(), round) != cheat_runs_.end();
  }

  const KrausChannel& channel_;
  int cheat_count_ = 0;
  std::vector<int> fixed_runs_;
  std::vector<int> cheat_runs_;
  AnnounceRule announce_;
  std::vector<int> branch_;
  int guess_round_ = -1;
};

// ───────────────────────── Bob ─────────────────────────

class HonestBob final : public BobStrategy {};

class CuriousBob final : public BobStrategy {
 public:
  bool curious() const override { return true; }

  std::optional<int> guess_other_x(Registry& reg, Rng& rng, Handle beta, Handle beta_prime,
                                   int b, int decoded) override {
    // Hypothesis states: the post-decode carrier pair under x_{1-b} = 0 vs 1.
    // Alice's phase only touches the amplitude of |bb>, so both hypotheses
    // collapse to the same state and the Helstrom measurement degenerates.
    const DensityMatrix h0 = hypothesis_state(b, decoded, 0);
    const DensityMatrix h1 = hypothesis_state(b, decoded, 1);
    if (trace_distance(h0, h1) <= kExactTol) return rng.bit();

    const Eigen::MatrixXcd p = helstrom_projector(h0, h1);
    std::vector<Eigen::MatrixXcd> projectors = {p, Eigen::MatrixXcd::Identity(9, 9) - p};
    const ProjectiveSet set(SubsystemLayout({3, 3}), std::move(projectors));
    const Handle targets[2] = {beta, beta_prime};
    const MeasureOutcome out = reg.measure(Party::bob, set, targets, rng);
    return out.outcome == 0 ? 0 : 1;
  }

 private:
  static DensityMatrix hypothesis_state(int b, int decoded, int other) {
    BitPair x;
    if (b == 0) {
      x = BitPair{decoded, other};
    } else {
      x = BitPair{other, decoded};
    }
    const int targets[1] = {0};
    const StateVector sent = apply_on_subsystems(phase_unitary(x.x0, x.x1), phi_state(b), targets);
    const Eigen::MatrixXcd& proj = decode_set(b).at(decoded);
    Eigen::VectorXcd post = proj * sent.amplitudes();
    const double norm = post.norm();
    if (norm < 1e-9) {
      // The hypothesis cannot produce the observed outcome; represent it by
      // the outcome projector's maximally mixed state on that subspace.
      const double dim = proj.trace().real();
      return DensityMatrix(SubsystemLayout({3, 3}), proj / dim);
    }
    post /= norm;
    return DensityMatrix::from_pure(StateVector(SubsystemLayout({3, 3}), std::move(post)));
  }
};

}  // namespace

const Operator& controlled_phase_unitary() {
  static const Operator* op = [] {
    Eigen::VectorXcd diag(12);
    for (int g0 = 0; g0 < 2; ++g0) {
      for (int g1 = 0; g1 < 2; ++g1) {
        for (int m = 0; m < 3; ++m) {
          double phase = 1.0;
          if (m == 0 && g0 == 1) phase = -1.0;
          if (m == 1 && g1 == 1) phase = -1.0;
          diag[6 * g0 + 3 * g1 + m] = phase;
        }
      }
    }
    return new Operator(SubsystemLayout({2, 2, 3}), Eigen::MatrixXcd(diag.asDiagonal()),
                        OpKind::unitary);
  }();
  return *op;
}

const KrausChannel& computational_basis_channel() {
  static const KrausChannel* ch = [] {
    std::vector<Eigen::MatrixXcd> elements;
    for (int m = 0; m < 3; ++m) {
      Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(3, 3);
      k(m, m) = 1.0;
      elements.push_back(std::move(k));
    }
    return new KrausChannel(SubsystemLayout({3}), std::move(elements));
  }();
  return *ch;
}

std::unique_ptr<AliceStrategy> make_honest_alice() { return std::make_unique<HonestAlice>(); }

std::unique_ptr<AliceStrategy> make_honest_alice(std::vector<BitPair> pairs) {
  return std::make_unique<HonestAlice>(std::move(pairs));
}

std::unique_ptr<AliceStrategy> make_basis_attack_alice() {
  return std::make_unique<BasisAttackAlice>();
}

std::unique_ptr<AliceStrategy> make_collective_triple_alice() {
  return std::make_unique<CollectiveTripleAlice>();
}

std::unique_ptr<AliceStrategy> make_one_pair_collective_alice() {
  return std::make_unique<OnePairCollectiveAlice>();
}

std::unique_ptr<AliceStrategy> make_channel_attack_alice(const KrausChannel& channel,
                                                         int cheat_count, AnnounceRule announce) {
  return std::make_unique<ChannelAttackAlice>(channel, cheat_count, std::vector<int>{},
                                              std::move(announce));
}

std::unique_ptr<AliceStrategy> make_channel_attack_alice(const KrausChannel& channel,
                                                         std::vector<int> cheat_runs,
                                                         AnnounceRule announce) {
  if (cheat_runs.empty()) {
    throw std::invalid_argument("channel attack: explicit cheat run list must be nonempty");
  }
  return std::make_unique<ChannelAttackAlice>(channel, 0, std::move(cheat_runs),
                                              std::move(announce));
}

std::unique_ptr<BobStrategy> make_honest_bob() { return std::make_unique<HonestBob>(); }

std::unique_ptr<BobStrategy> make_curious_bob() { return std::make_unique<CuriousBob>(); }

}  // namespace qotsim
