#include "qotsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qotsim {

// ─────────────────── scheme-level distinguishability ───────────────────

ConditionalStates cks_conditional_states() {
  ConditionalStates states;
  const int carrier[1] = {0};
  for (int b = 0; b < 2; ++b) {
    for (int x0 = 0; x0 < 2; ++x0) {
      for (int x1 = 0; x1 < 2; ++x1) {
        const StateVector sent =
            apply_on_subsystems(phase_unitary(x0, x1), phi_state(b), carrier);
        states[b][x0][x1] = DensityMatrix::from_pure(sent);
      }
    }
  }
  return states;
}

double delta_quantity(const ConditionalStates& s) {
  double sum = 0.0;
  for (int x0 = 0; x0 < 2; ++x0) {
    sum += trace_norm(s[0][x0][0].matrix() - s[0][x0][1].matrix());
  }
  for (int x1 = 0; x1 < 2; ++x1) {
    sum += trace_norm(s[1][0][x1].matrix() - s[1][1][x1].matrix());
  }
  return 0.5 * sum;
}

double f_quantity(const ConditionalStates& s) {
  double sum = 0.0;
  for (int x0 = 0; x0 < 2; ++x0) sum += fidelity(s[0][x0][0], s[0][x0][1]);
  for (int x1 = 0; x1 < 2; ++x1) sum += fidelity(s[1][0][x1], s[1][1][x1]);
  return sum;
}

double p_bob_bound(double delta) {
  if (delta < -kExactTol || delta > 4.0 + kExactTol) {
    throw std::invalid_argument("p_bob_bound: delta out of range [0, 4]");
  }
  return 0.5 + delta / 8.0;
}

double p_alice_bound(double f) {
  if (f < -kExactTol || f > 4.0 + kExactTol) {
    throw std::invalid_argument("p_alice_bound: fidelity sum out of range [0, 4]");
  }
  return 0.5 + f / 16.0;
}

FvdgCheck fuchs_vdg_check(const DensityMatrix& a, const DensityMatrix& b) {
  FvdgCheck out;
  out.trace_norm_distance = trace_norm(a.matrix() - b.matrix());
  out.fidelity = fidelity(a, b);
  const double d = out.trace_norm_distance;
  out.lower_slack = out.fidelity - (1.0 - 0.5 * d);
  const double inner = std::max(0.0, 1.0 - 0.25 * d * d);
  out.upper_slack = std::sqrt(inner) - out.fidelity;
  out.ok = out.lower_slack >= -kNormTol && out.upper_slack >= -kNormTol;
  return out;
}

// ─────────────────── reliability-preserving cheats ───────────────────

namespace {

void validate_spec(const CheatUnitarySpec& spec) {
  const long d = spec.fprime.size();
  if (d < 2) throw std::invalid_argument("theorem1: ancilla dimension must be at least 2");
  if (spec.f0.size() != d || spec.f1.size() != d) {
    throw std::invalid_argument("theorem1: vector dimensions differ");
  }
  if (spec.m0.rows() != d || spec.m0.cols() != d) {
    throw std::invalid_argument("theorem1: measurement dimension differs");
  }
  for (const auto* v : {&spec.f0, &spec.f1, &spec.fprime}) {
    if (!v->allFinite() || std::abs(v->norm() - 1.0) > kNormTol) {
      throw std::invalid_argument("theorem1: vectors must be unit norm");
    }
  }
  if (!spec.m0.allFinite() ||
      (spec.m0 - spec.m0.adjoint()).cwiseAbs().maxCoeff() > kNormTol ||
      (spec.m0 * spec.m0 - spec.m0).cwiseAbs().maxCoeff() > kNormTol) {
    throw std::invalid_argument("theorem1: m0 must be a projector");
  }
}

// Outcome the two-element measurement {m0, 1-m0} gives on `w` with certainty,
// or -1 when the outcome is random.
int deterministic_outcome(const Eigen::MatrixXcd& m0, const Eigen::VectorXcd& w) {
  const double norm = w.norm();
  const double in0 = (m0 * w).norm();
  if (std::abs(in0 - norm) <= kNormTol * std::max(1.0, norm)) return 0;
  if (in0 <= kNormTol * std::max(1.0, norm)) return 1;
  return -1;
}

}  // namespace

Theorem1Report theorem1_verify(const CheatUnitarySpec& spec) {
  validate_spec(spec);
  const long d = spec.fprime.size();
  const Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Identity(d, d) - spec.m0;

  Theorem1Report report;
  report.reliability_ok = true;
  for (const Eigen::VectorXcd* fb : {&spec.f0, &spec.f1}) {
    const Eigen::VectorXcd plus = 0.5 * (*fb + spec.fprime);
    const Eigen::VectorXcd minus = 0.5 * (*fb - spec.fprime);
    const double p_plus = plus.squaredNorm();
    const double p_minus = minus.squaredNorm();
    if (p_plus <= kExactTol || p_minus <= kExactTol) continue;
    const int o_plus = deterministic_outcome(spec.m0, plus);
    const int o_minus = deterministic_outcome(spec.m0, minus);
    if (o_plus < 0 || o_minus < 0 || o_plus == o_minus) report.reliability_ok = false;
  }

  const Eigen::MatrixXcd rho0 =
      0.5 * (spec.f0 * spec.f0.adjoint() + spec.fprime * spec.fprime.adjoint());
  const Eigen::MatrixXcd rho1 =
      0.5 * (spec.f1 * spec.f1.adjoint() + spec.fprime * spec.fprime.adjoint());
  const Eigen::MatrixXcd diff = rho0 - rho1;
  report.pre_measurement_distance = 0.5 * trace_norm(diff);
  report.view_distance =
      0.5 * (trace_norm(spec.m0 * diff * spec.m0) + trace_norm(m1 * diff * m1));
  report.views_equal = report.view_distance <= 1e-10;
  return report;
}

CheatUnitarySpec random_reliable_spec(Rng& rng) {
  const int d = 2 + rng.uniform_int(3);
  const int rank = 1 + rng.uniform_int(d - 1);
  const Eigen::MatrixXcd u = random_unitary(d, rng);
  Eigen::MatrixXcd m0 = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < rank; ++i) m0 += u.col(i) * u.col(i).adjoint();

  const Eigen::VectorXcd fprime = random_state(SubsystemLayout({d}), rng).amplitudes();
  const Eigen::MatrixXcd reflect[2] = {
      2.0 * m0 - Eigen::MatrixXcd::Identity(d, d),  // 2 m0 - 1
      Eigen::MatrixXcd::Identity(d, d) - 2.0 * m0,  // 2 m1 - 1
  };

  CheatUnitarySpec spec;
  spec.fprime = fprime;
  spec.m0 = std::move(m0);
  for (Eigen::VectorXcd* fb : {&spec.f0, &spec.f1}) {
    const double sign = rng.bit() ? -1.0 : 1.0;
    if (rng.uniform01() < 0.2) {
      *fb = sign * fprime;  // degenerate member: one branch vanishes outright
      continue;
    }
    const int a = rng.bit();
    *fb = sign * (reflect[a] * fprime);
  }
  return spec;
}

// ─────────────────── closed-form bound arithmetic ───────────────────

double epsilon_exact(const KrausChannel& channel, const AnnounceRule& announce) {
  if (channel.layout() != SubsystemLayout({3})) {
    throw std::invalid_argument("epsilon_exact: channel must act on one carrier qutrit");
  }
  double eps = 0.0;
  const int carrier[2] = {0, 1};
  for (int b = 0; b < 2; ++b) {
    const StateVector psi = phi_state(b);
    for (int m = 0; m < channel.size(); ++m) {
      // (K_m (x) 1) |psi| on the carrier pair.
      const Eigen::MatrixXcd& k = channel.at(m);
      Eigen::VectorXcd w = Eigen::VectorXcd::Zero(9);
      for (int i = 0; i < 3; ++i) {
        for (int l = 0; l < 3; ++l) {
          if (k(i, l) == Cx{0.0, 0.0}) continue;
          for (int j = 0; j < 3; ++j) w[3 * i + j] += k(i, l) * psi.amplitudes()[3 * l + j];
        }
      }
      const double p = w.squaredNorm();
      if (p <= 1e-15) continue;
      const StateVector post(SubsystemLayout({3, 3}), w / std::sqrt(p));
      const BitPair a = announce ? announce(m) : BitPair{0, 0};
      const std::vector<double> probs = outcome_probabilities(post, decode_set(b), carrier);
      const double fail = probs[2] + (a.bit(b) == 0 ? probs[1] : probs[0]);
      eps += 0.5 * p * fail;
    }
  }
  return eps;
}

double individual_bound(int n, double epsilon) {
  if (n < 1) throw std::invalid_argument("individual_bound: need n >= 1");
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("individual_bound: epsilon out of range [0, 1]");
  }
  const double inv = 1.0 / static_cast<double>(n);
  return 0.5 + 0.25 * inv - 0.5 * epsilon * (1.0 - inv);
}

Decomposition p_decomposition(double p, int n, double epsilon) {
  if (n < 1) throw std::invalid_argument("p_decomposition: need n >= 1");
  if (p <= 0.0 || p > 1.0) throw std::invalid_argument("p_decomposition: need 0 < p <= 1");
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("p_decomposition: epsilon out of range [0, 1]");
  }
  const double pn = p * static_cast<double>(n);
  if (pn < 1.0 - 1e-9) {
    throw std::invalid_argument("p_decomposition: p n must cover at least one run");
  }
  Decomposition out;
  out.p_i_cap = 0.75 * std::pow(1.0 - epsilon, pn - 1.0);
  out.p_ii_cap = 0.5 * std::pow(1.0 - epsilon, pn);
  out.combined = p * out.p_i_cap + (1.0 - p) * out.p_ii_cap;
  return out;
}

double collective_formula(double p, double pc) {
  if (p < 0.0 || p > 1.0 || pc < 0.0 || pc > 1.0) {
    throw std::invalid_argument("collective_formula: arguments must be probabilities");
  }
  return (0.5 + 0.25 * p) * pc;
}

Wilson wilson99(std::uint64_t successes, std::uint64_t trials) {
  if (successes > trials) throw std::invalid_argument("wilson99: successes exceed trials");
  if (trials == 0) return Wilson{0.0, 1.0};
  constexpr double z = 2.5758293035489004;  // 99.5th percentile of the unit normal
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return Wilson{std::max(0.0, center - half), std::min(1.0, center + half)};
}

BoundReport bound_report(double p_alice, double p_bob) {
  BoundReport out;
  out.p_alice = p_alice;
  out.p_bob = p_bob;
  out.two_pa_plus_pb = 2.0 * p_alice + p_bob;
  out.margin_vs_two = 2.0 - out.two_pa_plus_pb;
  out.margin_vs_three_halves = out.two_pa_plus_pb - 1.5;
  out.margin_vs_five_thirds = out.two_pa_plus_pb - 5.0 / 3.0;
  return out;
}

// ─────────────────── Monte Carlo estimation ───────────────────

std::string_view alice_kind_name(AliceKind kind) {
  switch (kind) {
    case AliceKind::honest: return "honest";
    case AliceKind::basis_attack: return "basis-attack";
    case AliceKind::collective: return "collective";
    case AliceKind::one_pair: return "one-pair";
    case AliceKind::channel_computational: return "channel";
  }
  return "unknown";
}

AliceKind alice_kind_from_name(std::string_view name) {
  for (AliceKind kind : {AliceKind::honest, AliceKind::basis_attack, AliceKind::collective,
                         AliceKind::one_pair, AliceKind::channel_computational}) {
    if (name == alice_kind_name(kind)) return kind;
  }
  throw std::invalid_argument("unknown alice strategy '" + std::string(name) + "'");
}

std::string_view bob_kind_name(BobKind kind) {
  return kind == BobKind::honest ? "honest" : "curious";
}

BobKind bob_kind_from_name(std::string_view name) {
  for (BobKind kind : {BobKind::honest, BobKind::curious}) {
    if (name == bob_kind_name(kind)) return kind;
  }
  throw std::invalid_argument("unknown bob strategy '" + std::string(name) + "'");
}

namespace {

struct Counters {
  std::uint64_t scored = 0;
  std::uint64_t successes = 0;
  std::uint64_t completed = 0;
  std::uint64_t target_correct = 0;
  std::uint64_t definite = 0;
  std::uint64_t ab_measure = 0;
  std::uint64_t ab_check = 0;
  std::uint64_t ab_set = 0;
  std::uint64_t ab_no_useful = 0;
  std::uint64_t ab_admissibility = 0;

  void absorb(const Counters& o) {
    scored += o.scored;
    successes += o.successes;
    completed += o.completed;
    target_correct += o.target_correct;
    definite += o.definite;
    ab_measure += o.ab_measure;
    ab_check += o.ab_check;
    ab_set += o.ab_set;
    ab_no_useful += o.ab_no_useful;
    ab_admissibility += o.ab_admissibility;
  }
};

std::unique_ptr<AliceStrategy> alice_for(const CheatScenario& s, const BitPair& bare_pair) {
  switch (s.alice) {
    case AliceKind::honest:
      if (s.protocol == ProtocolKind::cks_round) {
        return make_honest_alice({bare_pair});
      }
      return make_honest_alice();
    case AliceKind::basis_attack:
      return make_basis_attack_alice();
    case AliceKind::collective:
      return make_collective_triple_alice();
    case AliceKind::one_pair:
      return make_one_pair_collective_alice();
    case AliceKind::channel_computational:
      return make_channel_attack_alice(computational_basis_channel(), s.cheat_count);
  }
  throw std::logic_error("alice_for: unhandled kind");
}

std::unique_ptr<BobStrategy> bob_for(const CheatScenario& s) {
  return s.bob == BobKind::curious ? make_curious_bob() : make_honest_bob();
}

void tally_abort(Counters& c, AbortReason reason) {
  switch (reason) {
    case AbortReason::none: break;
    case AbortReason::bob_measurement: ++c.ab_measure; break;
    case AbortReason::check_mismatch: ++c.ab_check; break;
    case AbortReason::set_violation: ++c.ab_set; break;
    case AbortReason::no_useful_run: ++c.ab_no_useful; break;
    case AbortReason::admissibility_failure: ++c.ab_admissibility; break;
  }
}

void run_bare_trial(const CheatScenario& s, Rng& rng, Counters& c) {
  const BitPair pair{rng.bit(), rng.bit()};
  const int b = rng.bit();
  const auto alice = alice_for(s, pair);
  const auto bob = bob_for(s);
  const CksRound round = run_cks_round(*alice, *bob, b, rng);

  const bool done = round.outcome != Decode::abort;
  if (done) {
    ++c.completed;
    if (static_cast<int>(round.outcome) == pair.bit(b)) ++c.target_correct;
    if (round.alice_definite) ++c.definite;
  } else {
    ++c.ab_measure;
  }
  if (s.score == ScoreSide::alice_guess) {
    ++c.scored;
    if (round.alice_guess == b) ++c.successes;
  } else if (done && round.bob_guess) {
    ++c.scored;
    if (*round.bob_guess == pair.bit(1 - b)) ++c.successes;
  }
}

void run_protocol_trial(const CheatScenario& s, Rng& rng, Counters& c) {
  const auto alice = alice_for(s, BitPair{});
  const auto bob = bob_for(s);
  ProtocolConfig cfg;
  cfg.k = s.k;
  cfg.n = s.n;
  cfg.m = s.m;
  cfg.record_transcript = false;

  RunOutcome out;
  if (s.protocol == ProtocolKind::protocol_b) {
    out = run_protocol_b(cfg, *alice, *bob, rng).outcome;
  } else {
    if (s.n != 3 || s.m != 2) {
      throw std::invalid_argument("estimate: the general protocol is wired for n=3, m=2");
    }
    out = run_protocol_a(cfg, CodewordSet::triples(), *alice, *bob, rng).outcome;
  }

  tally_abort(c, out.abort);
  if (out.completed) {
    ++c.completed;
    if (out.bob_target_bit && out.bob_true_b &&
        *out.bob_target_bit == out.targets.bit(*out.bob_true_b)) {
      ++c.target_correct;
    }
    if (out.alice_definite_b) ++c.definite;
  }

  if (s.score == ScoreSide::alice_guess) {
    // Executions that died for lack of an encoding candidate carry no index
    // commitment to guess; everything else is scored, aborts as failures.
    if (out.abort != AbortReason::no_useful_run &&
        out.abort != AbortReason::admissibility_failure) {
      ++c.scored;
      if (out.completed && out.bob_true_b && out.alice_b_guess == *out.bob_true_b) {
        ++c.successes;
      }
    }
  } else if (out.completed && out.bob_other_guess && out.bob_true_b) {
    ++c.scored;
    if (*out.bob_other_guess == out.targets.bit(1 - *out.bob_true_b)) ++c.successes;
  }
}

}  // namespace

CheatEstimate estimate(const CheatScenario& scenario) {
  if (scenario.trials == 0) throw std::invalid_argument("estimate: need at least one trial");
  int workers = scenario.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  if (static_cast<std::uint64_t>(workers) > scenario.trials) {
    workers = static_cast<int>(scenario.trials);
  }
  workers = std::min(workers, 64);

  std::vector<Counters> parts(workers);
  std::vector<std::thread> threads;
  const std::uint64_t chunk = scenario.trials / workers;
  const std::uint64_t extra = scenario.trials % workers;
  std::uint64_t lo = 0;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t hi = lo + chunk + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
    threads.emplace_back([&scenario, &part = parts[w], lo, hi] {
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        Rng rng = Rng::for_trial(scenario.seed, idx);
        if (scenario.protocol == ProtocolKind::cks_round) {
          run_bare_trial(scenario, rng, part);
        } else {
          run_protocol_trial(scenario, rng, part);
        }
      }
    });
    lo = hi;
  }
  for (std::thread& t : threads) t.join();

  Counters total;
  for (const Counters& part : parts) total.absorb(part);

  CheatEstimate est;
  est.trials_total = scenario.trials;
  est.trials_scored = total.scored;
  est.successes = total.successes;
  est.completed = total.completed;
  est.target_correct = total.target_correct;
  est.definite_b = total.definite;
  est.aborts_measure = total.ab_measure;
  est.aborts_check = total.ab_check;
  est.aborts_set = total.ab_set;
  est.aborts_no_useful = total.ab_no_useful;
  est.aborts_admissibility = total.ab_admissibility;
  est.aborts_total = total.ab_measure + total.ab_check + total.ab_set + total.ab_no_useful +
                     total.ab_admissibility;
  est.p_hat = total.scored == 0
                  ? 0.0
                  : static_cast<double>(total.successes) / static_cast<double>(total.scored);
  const Wilson ci = wilson99(total.successes, total.scored);
  est.ci_low = ci.low;
  est.ci_high = ci.high;
  return est;
}

}  // namespace qotsim
