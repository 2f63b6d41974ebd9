#include "qotsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

namespace qotsim {

namespace {

constexpr std::uint64_t kDefaultSeed = 0xC0FFEEull;

// ───────────────────────── row builders ─────────────────────────

ScenarioRow interval_row(std::string name, std::uint64_t trials, double p_hat, Wilson ci,
                         double target, double tol) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = trials;
  row.p_hat = p_hat;
  row.ci_low = ci.low;
  row.ci_high = ci.high;
  row.target = target;
  row.margin = tol - std::abs(p_hat - target);
  row.verdict = row.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  return row;
}

ScenarioRow cap_row(std::string name, std::uint64_t trials, double value, double cap) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = trials;
  row.p_hat = value;
  row.ci_low = value;
  row.ci_high = value;
  row.target = cap;
  row.margin = cap - value;
  row.verdict = row.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  return row;
}

ScenarioRow floor_row(std::string name, std::uint64_t trials, double value, double floor) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = trials;
  row.p_hat = value;
  row.ci_low = value;
  row.ci_high = value;
  row.target = floor;
  row.margin = value - floor;
  row.verdict = row.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  return row;
}

ScenarioRow zero_count_row(std::string name, std::uint64_t trials, std::uint64_t count) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = trials;
  row.p_hat = static_cast<double>(count);
  row.ci_low = row.p_hat;
  row.ci_high = row.p_hat;
  row.target = 0.0;
  row.margin = -row.p_hat;
  row.verdict = count == 0 ? Verdict::pass : Verdict::fail;
  return row;
}

ScenarioRow info_row(std::string name, std::uint64_t trials, double p_hat, Wilson ci,
                     double target = 0.0) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = trials;
  row.p_hat = p_hat;
  row.ci_low = ci.low;
  row.ci_high = ci.high;
  row.target = target;
  row.margin = 0.0;
  row.verdict = Verdict::info;
  return row;
}

// Containment of an exact value in the estimate's confidence interval.
ScenarioRow containment_row(std::string name, const CheatEstimate& e, double exact) {
  ScenarioRow row;
  row.name = std::move(name);
  row.trials = e.trials_scored;
  row.p_hat = e.p_hat;
  row.ci_low = e.ci_low;
  row.ci_high = e.ci_high;
  row.target = exact;
  row.margin = std::min(exact - e.ci_low, e.ci_high - exact);
  row.verdict = row.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  return row;
}

// Monte Carlo tolerance: at least `floor_tol`, widened to four binomial
// standard deviations when the sample is small.
double mc_tol(double floor_tol, double target, std::uint64_t n) {
  if (n == 0) return floor_tol;
  const double sigma = std::sqrt(std::max(target * (1.0 - target), 1e-12) /
                                 static_cast<double>(n));
  return std::max(floor_tol, 4.0 * sigma);
}

int resolve_workers(const RunOptions& o) {
  if (o.workers) return *o.workers;
  if (const char* env = std::getenv("QOTSIM_WORKERS")) {
    try {
      return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("QOTSIM_WORKERS must be an integer");
    }
  }
  return 0;
}

CheatScenario base_scenario(const RunOptions& o, std::uint64_t default_trials) {
  CheatScenario s;
  s.trials = o.trials.value_or(default_trials);
  s.seed = o.seed.value_or(kDefaultSeed);
  s.workers = resolve_workers(o);
  return s;
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// ───────────────────────── catalog scenarios ─────────────────────────

std::vector<ScenarioRow> sc_honest_completeness(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 10000);
  s.protocol = ProtocolKind::protocol_b;
  s.k = o.k.value_or(4);
  const CheatEstimate e = estimate(s);

  const double acc = ratio(e.target_correct, e.completed);
  const double no_useful_target = std::pow(0.75, s.k);
  const double no_useful_rate = ratio(e.aborts_no_useful, e.trials_total);
  const std::uint64_t unexpected = e.aborts_total - e.aborts_no_useful;

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("honest-completeness/target-accuracy", e.completed, acc,
                              wilson99(e.target_correct, e.completed), 1.0, 0.0));
  rows.push_back(interval_row("honest-completeness/no-useful-abort-rate", e.trials_total,
                              no_useful_rate, wilson99(e.aborts_no_useful, e.trials_total),
                              no_useful_target, mc_tol(0.004, no_useful_target, e.trials_total)));
  rows.push_back(
      zero_count_row("honest-completeness/unexpected-aborts", e.trials_total, unexpected));
  rows.push_back(info_row("honest-completeness/alice-guess", e.trials_scored, e.p_hat,
                          Wilson{e.ci_low, e.ci_high}, 0.5));
  return rows;
}

std::vector<ScenarioRow> sc_cks_basis_attack(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 100000);
  s.protocol = ProtocolKind::cks_round;
  s.alice = AliceKind::basis_attack;
  const CheatEstimate e = estimate(s);

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("cks-basis-attack/p-learn-b", e.trials_scored, e.p_hat,
                              Wilson{e.ci_low, e.ci_high}, 0.75,
                              mc_tol(0.01, 0.75, e.trials_scored)));
  rows.push_back(zero_count_row("cks-basis-attack/aborts", e.trials_total, e.aborts_total));
  rows.push_back(info_row("cks-basis-attack/definite-b-rate", e.completed,
                          ratio(e.definite_b, e.completed),
                          wilson99(e.definite_b, e.completed), 0.5));
  return rows;
}

std::vector<ScenarioRow> sc_cks_bound_quantities(const RunOptions&) {
  const ConditionalStates states = cks_conditional_states();
  const double delta = delta_quantity(states);
  const double f = f_quantity(states);
  const double bob_floor = p_bob_bound(delta);
  const double alice_floor = p_alice_bound(f);

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("cks-bound-quantities/delta", 0, delta, Wilson{delta, delta}, 0.0,
                              kExactTol));
  rows.push_back(
      interval_row("cks-bound-quantities/fidelity-sum", 0, f, Wilson{f, f}, 4.0, kNormTol));
  rows.push_back(interval_row("cks-bound-quantities/bob-floor", 0, bob_floor,
                              Wilson{bob_floor, bob_floor}, 0.5, kExactTol));
  rows.push_back(interval_row("cks-bound-quantities/alice-floor", 0, alice_floor,
                              Wilson{alice_floor, alice_floor}, 0.75, kNormTol));
  return rows;
}

std::vector<ScenarioRow> sc_theorem1_sweep(const RunOptions& o) {
  const std::uint64_t trials = o.trials.value_or(1000);
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  std::uint64_t precondition_failures = 0;
  std::uint64_t counterexamples = 0;
  double max_view = 0.0;
  double max_pre = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = Rng::for_trial(seed, i);
    const Theorem1Report rep = theorem1_verify(random_reliable_spec(rng));
    if (!rep.reliability_ok) ++precondition_failures;
    if (!rep.views_equal) ++counterexamples;
    max_view = std::max(max_view, rep.view_distance);
    max_pre = std::max(max_pre, rep.pre_measurement_distance);
  }
  std::vector<ScenarioRow> rows;
  rows.push_back(zero_count_row("theorem1-sweep/precondition-failures", trials,
                                precondition_failures));
  rows.push_back(zero_count_row("theorem1-sweep/counterexamples", trials, counterexamples));
  rows.push_back(cap_row("theorem1-sweep/max-view-distance", trials, max_view, 1e-10));
  rows.push_back(info_row("theorem1-sweep/max-pre-measurement-distance", trials, max_pre,
                          Wilson{max_pre, max_pre}));
  return rows;
}

std::vector<ScenarioRow> sc_collective_attack(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 20000);
  s.protocol = ProtocolKind::protocol_b;
  s.alice = AliceKind::collective;
  s.k = o.k.value_or(4);
  const CheatEstimate e = estimate(s);

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("collective-attack/p-learn-b", e.trials_scored, e.p_hat,
                              Wilson{e.ci_low, e.ci_high}, 0.75,
                              mc_tol(0.01, 0.75, e.trials_scored)));
  rows.push_back(zero_count_row("collective-attack/check-failures", e.trials_total,
                                e.aborts_check + e.aborts_set));
  rows.push_back(interval_row("collective-attack/definite-b-rate", e.completed,
                              ratio(e.definite_b, e.completed),
                              wilson99(e.definite_b, e.completed), 0.5,
                              mc_tol(0.015, 0.5, e.completed)));
  rows.push_back(info_row("collective-attack/no-useful-rate", e.trials_total,
                          ratio(e.aborts_no_useful, e.trials_total),
                          wilson99(e.aborts_no_useful, e.trials_total),
                          std::pow(0.75, s.k)));
  return rows;
}

std::vector<ScenarioRow> sc_one_pair_attack(const RunOptions& o) {
  CheatScenario sa = base_scenario(o, 20000);
  sa.protocol = ProtocolKind::protocol_b;
  sa.alice = AliceKind::one_pair;
  sa.k = o.k.value_or(20);
  const CheatEstimate ea = estimate(sa);

  CheatScenario sb = sa;
  sb.alice = AliceKind::honest;
  sb.bob = BobKind::curious;
  sb.score = ScoreSide::bob_guess;
  sb.seed = sa.seed + 1;
  const CheatEstimate eb = estimate(sb);

  const double combined = 2.0 * ea.p_hat + eb.p_hat;

  std::vector<ScenarioRow> rows;
  rows.push_back(info_row("one-pair-attack/p-learn-b", ea.trials_scored, ea.p_hat,
                          Wilson{ea.ci_low, ea.ci_high}, 2.0 / 3.0));
  rows.push_back(info_row("one-pair-attack/p-learn-other", eb.trials_scored, eb.p_hat,
                          Wilson{eb.ci_low, eb.ci_high}, 0.5));
  rows.push_back(zero_count_row("one-pair-attack/check-failures", ea.trials_total,
                                ea.aborts_check + ea.aborts_set));
  rows.push_back(interval_row("one-pair-attack/two-pa-plus-pb", ea.trials_scored, combined,
                              Wilson{combined, combined}, 5.0 / 3.0, 0.02));
  return rows;
}

int resolve_channel_runs(const RunOptions& o) {
  int n = 30;
  if (o.n) {
    n = *o.n;
  } else if (o.zeta) {
    if (*o.zeta <= 0.0 || *o.zeta >= 1.0) {
      throw std::invalid_argument("zeta must lie in (0, 1)");
    }
    // Smallest run count divisible by three with n > 1/(4 zeta).
    const double threshold = 1.0 / (4.0 * *o.zeta);
    n = 3 * (static_cast<int>(std::floor(threshold / 3.0)) + 1);
  }
  if (n < 3 || n % 3 != 0) {
    throw std::invalid_argument("channel attack needs a run count divisible by 3");
  }
  return n;
}

std::vector<ScenarioRow> channel_rows(const RunOptions& o, int n, std::uint64_t default_trials,
                                      const std::string& prefix, CheatEstimate* out_estimate) {
  CheatScenario s = base_scenario(o, default_trials);
  s.protocol = ProtocolKind::protocol_b;
  s.alice = AliceKind::channel_computational;
  s.k = n / 3;
  s.cheat_count = 1;
  const CheatEstimate e = estimate(s);
  if (out_estimate != nullptr) *out_estimate = e;

  const double eps = epsilon_exact(computational_basis_channel());
  const double bound = individual_bound(n, eps);
  const Decomposition decomp = p_decomposition(1.0 / n, n, eps);
  const double sigma = std::sqrt(bound * (1.0 - bound) / std::max<std::uint64_t>(1, e.trials_scored));

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row(prefix + "/epsilon", 0, eps, Wilson{eps, eps}, 0.5, kExactTol));
  rows.push_back(interval_row(prefix + "/decomposition-consistency", 0, decomp.combined,
                              Wilson{decomp.combined, decomp.combined}, bound, kExactTol));
  rows.push_back(containment_row(prefix + "/p-hat-vs-formula", e, bound));
  rows.push_back(cap_row(prefix + "/p-hat-cap", e.trials_scored, e.p_hat, bound + 3.0 * sigma));
  return rows;
}

std::vector<ScenarioRow> sc_channel_attack(const RunOptions& o) {
  const int n = resolve_channel_runs(o);
  return channel_rows(o, n, 100000, "channel-attack(n=" + std::to_string(n) + ")", nullptr);
}

std::vector<ScenarioRow> sc_channel_attack_sweep(const RunOptions& o) {
  std::vector<ScenarioRow> rows;
  std::vector<double> p_hats;
  for (int n : {3, 15, 30}) {
    RunOptions local = o;
    local.n = n;
    local.zeta.reset();
    CheatEstimate e;
    std::vector<ScenarioRow> part = channel_rows(
        local, n, 100000, "channel-attack-sweep(n=" + std::to_string(n) + ")", &e);
    // The sweep keeps only the containment row per point; the arithmetic
    // identities are covered by the single-point scenario.
    rows.push_back(part[2]);
    p_hats.push_back(e.p_hat);
  }
  const double step1 = p_hats[0] - p_hats[1];
  const double step2 = p_hats[1] - p_hats[2];
  ScenarioRow mono;
  mono.name = "channel-attack-sweep/monotone-decrease";
  mono.trials = o.trials.value_or(100000);
  mono.p_hat = std::min(step1, step2);
  mono.ci_low = mono.p_hat;
  mono.ci_high = mono.p_hat;
  mono.target = 0.0;
  mono.margin = mono.p_hat;
  mono.verdict = mono.margin >= 0.0 ? Verdict::pass : Verdict::fail;
  rows.push_back(mono);
  return rows;
}

std::vector<ScenarioRow> sc_max_violation(const RunOptions& o) {
  CheatScenario honest = base_scenario(o, 100000);
  honest.protocol = ProtocolKind::protocol_b;
  honest.k = o.k.value_or(4);
  const CheatEstimate eh = estimate(honest);

  CheatScenario channel = base_scenario(o, 100000);
  channel.protocol = ProtocolKind::protocol_b;
  channel.alice = AliceKind::channel_computational;
  channel.k = 10;
  channel.cheat_count = 1;
  channel.seed = honest.seed + 1;
  const CheatEstimate ec = estimate(channel);

  CheatScenario curious = base_scenario(o, 100000);
  curious.protocol = ProtocolKind::protocol_b;
  curious.bob = BobKind::curious;
  curious.score = ScoreSide::bob_guess;
  curious.k = o.k.value_or(4);
  curious.seed = honest.seed + 2;
  const CheatEstimate eb = estimate(curious);

  const double pa = std::max(eh.p_hat, ec.p_hat);
  const BoundReport rep = bound_report(pa, eb.p_hat);

  std::vector<ScenarioRow> rows;
  rows.push_back(info_row("max-violation/p-alice-honest", eh.trials_scored, eh.p_hat,
                          Wilson{eh.ci_low, eh.ci_high}, 0.5));
  rows.push_back(info_row("max-violation/p-alice-channel", ec.trials_scored, ec.p_hat,
                          Wilson{ec.ci_low, ec.ci_high}, individual_bound(30, 0.5)));
  rows.push_back(info_row("max-violation/p-bob-curious", eb.trials_scored, eb.p_hat,
                          Wilson{eb.ci_low, eb.ci_high}, 0.5));
  rows.push_back(cap_row("max-violation/two-pa-plus-pb", eh.trials_scored, rep.two_pa_plus_pb,
                         1.52));
  return rows;
}

std::vector<ScenarioRow> sc_fuchs_vdg_sweep(const RunOptions& o) {
  const std::uint64_t trials = o.trials.value_or(1000);
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  std::uint64_t violations = 0;
  double min_slack = 1.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    Rng rng = Rng::for_trial(seed, i);
    const int d = 2 + rng.uniform_int(3);
    const DensityMatrix a = random_density(SubsystemLayout({d}), rng);
    const DensityMatrix b = random_density(SubsystemLayout({d}), rng);
    const FvdgCheck check = fuchs_vdg_check(a, b);
    if (!check.ok) ++violations;
    min_slack = std::min({min_slack, check.lower_slack, check.upper_slack});
  }
  std::vector<ScenarioRow> rows;
  rows.push_back(zero_count_row("fuchs-vdg-sweep/violations", trials, violations));
  rows.push_back(floor_row("fuchs-vdg-sweep/min-slack", trials, min_slack, -kNormTol));
  return rows;
}

std::vector<ScenarioRow> sc_helstrom_oracle(const RunOptions& o) {
  const std::uint64_t pairs = o.trials.value_or(100);
  const std::uint64_t samples = 1000;
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  std::uint64_t exceed = 0;
  double max_gap = 0.0;  // constructed optimum vs analytic value
  for (std::uint64_t i = 0; i < pairs; ++i) {
    Rng rng = Rng::for_trial(seed, i);
    const SubsystemLayout layout({3});
    const DensityMatrix rho0 = random_density(layout, rng);
    const DensityMatrix rho1 = random_density(layout, rng);
    const double best = helstrom_success(rho0, rho1);

    const Eigen::MatrixXcd p = helstrom_projector(rho0, rho1);
    const Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(3, 3) - p;
    const double constructed =
        0.5 * (p * rho0.matrix()).trace().real() + 0.5 * (q * rho1.matrix()).trace().real();
    max_gap = std::max(max_gap, std::abs(constructed - best));

    for (std::uint64_t s = 0; s < samples; ++s) {
      const Eigen::MatrixXcd u = random_unitary(3, rng);
      const int rank = 1 + rng.uniform_int(2);
      Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(3, 3);
      for (int c = 0; c < rank; ++c) proj += u.col(c) * u.col(c).adjoint();
      const Eigen::MatrixXcd comp = Eigen::MatrixXcd::Identity(3, 3) - proj;
      const double direct = 0.5 * (proj * rho0.matrix()).trace().real() +
                            0.5 * (comp * rho1.matrix()).trace().real();
      const double sampled = std::max(direct, 1.0 - direct);
      if (sampled > best + kNormTol) ++exceed;
    }
  }
  std::vector<ScenarioRow> rows;
  rows.push_back(zero_count_row("helstrom-oracle/sampled-exceeds-optimum", pairs * samples,
                                exceed));
  rows.push_back(cap_row("helstrom-oracle/constructed-matches", pairs, max_gap, kNormTol));
  return rows;
}

std::vector<ScenarioRow> sc_curious_bob(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 100000);
  s.protocol = ProtocolKind::protocol_b;
  s.bob = BobKind::curious;
  s.score = ScoreSide::bob_guess;
  s.k = o.k.value_or(4);
  const CheatEstimate e = estimate(s);

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("curious-bob/p-learn-other", e.trials_scored, e.p_hat,
                              Wilson{e.ci_low, e.ci_high}, 0.5,
                              mc_tol(0.01, 0.5, e.trials_scored)));
  rows.push_back(info_row("curious-bob/completed-rate", e.trials_total,
                          ratio(e.completed, e.trials_total),
                          wilson99(e.completed, e.trials_total)));
  return rows;
}

std::vector<ScenarioRow> sc_determinism_check(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 5000);
  s.protocol = ProtocolKind::protocol_b;
  s.alice = AliceKind::collective;
  s.k = o.k.value_or(4);

  CheatScenario s1 = s;
  s1.workers = 1;
  CheatScenario s4 = s;
  s4.workers = 4;
  const CheatEstimate e1 = estimate(s1);
  const CheatEstimate e4 = estimate(s4);

  const bool equal = e1.trials_scored == e4.trials_scored && e1.successes == e4.successes &&
                     e1.completed == e4.completed && e1.target_correct == e4.target_correct &&
                     e1.definite_b == e4.definite_b && e1.aborts_total == e4.aborts_total &&
                     e1.aborts_measure == e4.aborts_measure &&
                     e1.aborts_check == e4.aborts_check && e1.aborts_set == e4.aborts_set &&
                     e1.aborts_no_useful == e4.aborts_no_useful &&
                     e1.aborts_admissibility == e4.aborts_admissibility;

  std::vector<ScenarioRow> rows;
  ScenarioRow row;
  row.name = "determinism-check/workers-invariance";
  row.trials = s.trials;
  row.p_hat = equal ? 1.0 : 0.0;
  row.ci_low = row.p_hat;
  row.ci_high = row.p_hat;
  row.target = 1.0;
  row.margin = equal ? 0.0 : -1.0;
  row.verdict = equal ? Verdict::pass : Verdict::fail;
  rows.push_back(std::move(row));
  rows.push_back(info_row("determinism-check/p-learn-b", e1.trials_scored, e1.p_hat,
                          Wilson{e1.ci_low, e1.ci_high}, 0.75));
  return rows;
}

std::vector<ScenarioRow> sc_protocol_a_honest(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 10000);
  s.protocol = ProtocolKind::protocol_a;
  s.n = o.n.value_or(3);
  s.m = 2;
  const CheatEstimate e = estimate(s);

  const double acc = ratio(e.target_correct, e.completed);
  const double no_candidate_rate = ratio(e.aborts_admissibility, e.trials_total);
  const std::uint64_t unexpected =
      e.aborts_total - e.aborts_admissibility - e.aborts_no_useful;

  std::vector<ScenarioRow> rows;
  rows.push_back(interval_row("protocol-a-honest/target-accuracy", e.completed, acc,
                              wilson99(e.target_correct, e.completed), 1.0, 0.0));
  rows.push_back(interval_row("protocol-a-honest/no-candidate-abort-rate", e.trials_total,
                              no_candidate_rate,
                              wilson99(e.aborts_admissibility, e.trials_total), 0.75,
                              mc_tol(0.012, 0.75, e.trials_total)));
  rows.push_back(
      zero_count_row("protocol-a-honest/unexpected-aborts", e.trials_total, unexpected));
  rows.push_back(info_row("protocol-a-honest/alice-guess", e.trials_scored, e.p_hat,
                          Wilson{e.ci_low, e.ci_high}, 0.5));
  return rows;
}

std::vector<ScenarioRow> sc_custom(const RunOptions& o) {
  CheatScenario s = base_scenario(o, 10000);
  s.protocol = ProtocolKind::protocol_b;
  s.k = o.k.value_or(4);
  s.alice = alice_kind_from_name(o.alice.value_or("honest"));
  s.bob = bob_kind_from_name(o.bob.value_or("honest"));
  s.score = (s.alice == AliceKind::honest && s.bob == BobKind::curious)
                ? ScoreSide::bob_guess
                : ScoreSide::alice_guess;
  const CheatEstimate e = estimate(s);

  std::vector<ScenarioRow> rows;
  rows.push_back(info_row("custom/p-hat", e.trials_scored, e.p_hat,
                          Wilson{e.ci_low, e.ci_high}));
  rows.push_back(info_row("custom/completed-rate", e.trials_total,
                          ratio(e.completed, e.trials_total),
                          wilson99(e.completed, e.trials_total)));
  rows.push_back(info_row("custom/abort-rate", e.trials_total,
                          ratio(e.aborts_total, e.trials_total),
                          wilson99(e.aborts_total, e.trials_total)));
  rows.push_back(info_row("custom/definite-b-rate", e.completed,
                          ratio(e.definite_b, e.completed),
                          wilson99(e.definite_b, e.completed)));
  return rows;
}

struct CatalogEntry {
  const char* name;
  std::vector<ScenarioRow> (*run)(const RunOptions&);
};

constexpr CatalogEntry kCatalog[] = {
    {"honest-completeness", sc_honest_completeness},
    {"cks-basis-attack", sc_cks_basis_attack},
    {"cks-bound-quantities", sc_cks_bound_quantities},
    {"theorem1-sweep", sc_theorem1_sweep},
    {"collective-attack", sc_collective_attack},
    {"one-pair-attack", sc_one_pair_attack},
    {"channel-attack", sc_channel_attack},
    {"channel-attack-sweep", sc_channel_attack_sweep},
    {"max-violation", sc_max_violation},
    {"fuchs-vdg-sweep", sc_fuchs_vdg_sweep},
    {"helstrom-oracle", sc_helstrom_oracle},
    {"curious-bob", sc_curious_bob},
    {"determinism-check", sc_determinism_check},
    {"protocol-a-honest", sc_protocol_a_honest},
    {"custom", sc_custom},
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::info: return "INFO";
  }
  return "UNKNOWN";
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const CatalogEntry& entry : kCatalog) names.emplace_back(entry.name);
  return names;
}

std::vector<ScenarioRow> run_scenario(const RunOptions& options) {
  for (const CatalogEntry& entry : kCatalog) {
    if (options.scenario == entry.name) return entry.run(options);
  }
  throw std::invalid_argument("unknown scenario '" + options.scenario + "'");
}

std::string emit_report(std::span<const ScenarioRow> rows, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    out = "scenario,trials,p_hat,ci_low,ci_high,target,margin,verdict\n";
    for (const ScenarioRow& row : rows) {
      out += row.name;
      out += ',' + std::to_string(row.trials);
      out += ',' + fmt_double(row.p_hat);
      out += ',' + fmt_double(row.ci_low);
      out += ',' + fmt_double(row.ci_high);
      out += ',' + fmt_double(row.target);
      out += ',' + fmt_double(row.margin);
      out += ',';
      out += verdict_name(row.verdict);
      out += '\n';
    }
    return out;
  }
  for (const ScenarioRow& row : rows) {
    nlohmann::ordered_json j;
    j["scenario"] = row.name;
    j["trials"] = row.trials;
    j["p_hat"] = row.p_hat;
    j["ci_low"] = row.ci_low;
    j["ci_high"] = row.ci_high;
    j["target"] = row.target;
    j["margin"] = row.margin;
    j["verdict"] = verdict_name(row.verdict);
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

void apply_config_file(const std::string& path, RunOptions& opts, std::string& out_path,
                       std::string& format_name) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "scenario") {
      if (opts.scenario.empty()) opts.scenario = value.get<std::string>();
    } else if (key == "trials") {
      if (!opts.trials) opts.trials = value.get<std::uint64_t>();
    } else if (key == "seed") {
      if (!opts.seed) opts.seed = value.get<std::uint64_t>();
    } else if (key == "k") {
      if (!opts.k) opts.k = value.get<int>();
    } else if (key == "n") {
      if (!opts.n) opts.n = value.get<int>();
    } else if (key == "workers") {
      if (!opts.workers) opts.workers = value.get<int>();
    } else if (key == "zeta") {
      if (!opts.zeta) opts.zeta = value.get<double>();
    } else if (key == "alice") {
      if (!opts.alice) opts.alice = value.get<std::string>();
    } else if (key == "bob") {
      if (!opts.bob) opts.bob = value.get<std::string>();
    } else if (key == "out") {
      if (out_path.empty()) out_path = value.get<std::string>();
    } else if (key == "format") {
      if (format_name.empty()) format_name = value.get<std::string>();
    } else {
      throw std::invalid_argument("config file: unknown key '" + key + "'");
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"weak oblivious transfer simulator"};
  app.name("qotsim");

  RunOptions opts;
  std::string out_path;
  std::string format_name;
  std::string config_path;
  bool list_only = false;

  std::uint64_t trials_v = 0;
  std::uint64_t seed_v = 0;
  int k_v = 0;
  int n_v = 0;
  int workers_v = 0;
  double zeta_v = 0.0;
  std::string alice_v;
  std::string bob_v;

  app.add_option("--scenario", opts.scenario, "catalog scenario to run");
  CLI::Option* o_trials = app.add_option("--trials", trials_v, "number of executions");
  CLI::Option* o_seed = app.add_option("--seed", seed_v, "master seed");
  CLI::Option* o_k = app.add_option("--k", k_v, "triple count for the triple protocol");
  CLI::Option* o_n =
      app.add_option("--n", n_v, "run count (channel scenarios; must be divisible by 3)");
  CLI::Option* o_workers =
      app.add_option("--workers", workers_v,
                     "worker threads (0 = one per hardware thread; env QOTSIM_WORKERS)");
  CLI::Option* o_zeta =
      app.add_option("--zeta", zeta_v,
                     "target index-learning advantage; picks the smallest usable run count");
  CLI::Option* o_alice =
      app.add_option("--alice", alice_v,
                     "alice strategy for the custom scenario "
                     "(honest|basis-attack|collective|one-pair|channel)");
  CLI::Option* o_bob =
      app.add_option("--bob", bob_v, "bob strategy for the custom scenario (honest|curious)");
  app.add_option("--out", out_path, "write the report to this file instead of stdout");
  app.add_option("--format", format_name, "report format: csv (default) or jsonl");
  app.add_option("--config", config_path, "JSON file holding the same keys as the flags");
  app.add_flag("--list", list_only, "list scenario names and exit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (o_trials->count() > 0) opts.trials = trials_v;
  if (o_seed->count() > 0) opts.seed = seed_v;
  if (o_k->count() > 0) opts.k = k_v;
  if (o_n->count() > 0) opts.n = n_v;
  if (o_workers->count() > 0) opts.workers = workers_v;
  if (o_zeta->count() > 0) opts.zeta = zeta_v;
  if (o_alice->count() > 0) opts.alice = alice_v;
  if (o_bob->count() > 0) opts.bob = bob_v;

  if (list_only) {
    for (const std::string& name : scenario_names()) std::cout << name << '\n';
    return 0;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, opts, out_path, format_name);
    if (opts.scenario.empty()) {
      std::cerr << "qotsim: no scenario given (use --scenario or --list)\n";
      return 2;
    }
    ReportFormat format = ReportFormat::csv;
    if (!format_name.empty()) {
      if (format_name == "csv") {
        format = ReportFormat::csv;
      } else if (format_name == "jsonl") {
        format = ReportFormat::jsonl;
      } else {
        std::cerr << "qotsim: unknown format '" << format_name << "'\n";
        return 2;
      }
    }

    const std::vector<ScenarioRow> rows = run_scenario(opts);
    const std::string report = emit_report(rows, format);
    if (out_path.empty()) {
      std::cout << report;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "qotsim: cannot write '" << out_path << "'\n";
        return 2;
      }
      out << report;
    }
    const bool any_fail = std::any_of(rows.begin(), rows.end(), [](const ScenarioRow& r) {
      return r.verdict == Verdict::fail;
    });
    return any_fail ? 1 : 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qotsim: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace qotsim
