#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace xypurify {

enum class ProtocolEngine { closed_form, density_matrix };

/// One stochastic run of the two-node pumping protocol. Times are in units of
/// 1/J. Exactly one of target_rounds / target_fidelity must be set.
struct ProtocolConfig {
  double f = 0.75;
  std::optional<int> target_rounds;
  std::optional<double> target_fidelity;
  /// Probability that the non-destructive readout gives no verdict.
  double p_inconclusive = 0.0;
  std::uint64_t seed = 0;
  double J = 1.0;
  /// Duration of one purification gate; defaults to T = π/(6|J|).
  std::optional<double> gate_time;
  /// Extra evolution after a failure; defaults to π/|J| − T.
  std::optional<double> restore_extra_time;
  /// Classical latency added per message.
  double latency = 0.0;
  ProtocolEngine engine = ProtocolEngine::closed_form;
  long max_attempts = 100'000'000;

  /// Throws a domain or configuration error. An unreachable target fidelity
  /// is rejected with the fixed-point value in the message.
  void validate() const;
  double effective_gate_time() const;
  double effective_restore_extra_time() const;
};

struct ProtocolStats {
  long rounds_attempted = 0;
  long rounds_succeeded = 0;
  long pairs_consumed = 0;
  double total_time = 0.0;
  long messages_exchanged = 0;
  double final_fidelity = 0.0;
  /// Stationary fidelity after each successful round.
  std::vector<double> fidelity_history;
  /// Attempts spent on round k (index k−1), including the successful one.
  std::vector<long> attempts_per_round;
};

/// Probability that an attempt succeeds: both accepted outcomes, thinned by
/// the inconclusive-readout rate.
double attempt_success_probability(double f, double stored_fidelity, double p_inconclusive);

/// Trial `index` of the configuration. The RNG stream depends only on
/// (seed, index).
ProtocolStats run_trial(const ProtocolConfig& config, std::uint64_t index);

/// Trial 0.
ProtocolStats run_protocol(const ProtocolConfig& config);

/// Runs trials first_index .. first_index + trials − 1 on `workers` threads
/// (0 = hardware concurrency). The result vector is ordered by trial index and
/// does not depend on the worker count.
std::vector<ProtocolStats> run_trials(const ProtocolConfig& config, long trials, unsigned workers = 0,
                                      std::uint64_t first_index = 0);

struct RoundRate {
  int round = 0;
  long attempts = 0;
  long successes = 0;
  double empirical = 0.0;
  double expected = 0.0;
  /// sqrt(p(1 − p)/attempts) at the expected rate.
  double sigma = 0.0;
};

struct MonteCarloSummary {
  long trials = 0;
  double mean_attempts = 0.0;
  double attempts_half_width = 0.0;  ///< 95% normal-approximation half-width
  double mean_time = 0.0;
  double time_half_width = 0.0;
  double mean_final_fidelity = 0.0;
  double mean_messages = 0.0;
  std::vector<RoundRate> round_rates;
};

MonteCarloSummary summarize(const ProtocolConfig& config, std::span<const ProtocolStats> stats);

struct AnalyticResources {
  std::vector<double> fidelities;  ///< F_0 .. F_n
  std::vector<double> success_probabilities;
  double expected_attempts = 0.0;
  double expected_time = 0.0;
};

/// Expected attempts and time for the configured stopping rule from the
/// geometric waiting times of each round.
AnalyticResources analytic_resources(const ProtocolConfig& config);

struct ResourceRow {
  double f = 0.0;
  int rounds = 0;
  double mean_pairs = 0.0;
  double pairs_half_width = 0.0;
  double analytic_pairs = 0.0;
  double mean_time = 0.0;
  double time_half_width = 0.0;
  double achieved_fidelity = 0.0;
};

/// Pairs and time needed to reach `target_fidelity` for each f, with the
/// remaining settings taken from `base`.
std::vector<ResourceRow> resource_curve(std::span<const double> f_grid, double target_fidelity,
                                        const ProtocolConfig& base, long trials, unsigned workers = 0);

}  // namespace xypurify
