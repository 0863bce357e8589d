#include "xypurify/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "xypurify/density_matrix.hpp"
#include "xypurify/errors.hpp"
#include "xypurify/pumping.hpp"
#include "xypurify/purification.hpp"

namespace xypurify {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ index));
}

// Uniform double in [0, 1) from the top 53 bits; fixed across standard
// library implementations.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool finished(const ProtocolConfig& c, long succeeded, double current) {
  if (c.target_rounds) return succeeded >= *c.target_rounds;
  return current >= *c.target_fidelity;
}

constexpr double kZ95 = 1.959963984540054;

double half_width(double sum, double sum_sq, long n) {
  if (n < 2) return 0.0;
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / static_cast<double>(n - 1));
  return kZ95 * std::sqrt(var / static_cast<double>(n));
}

}  // namespace

void ProtocolConfig::validate() const {
  if (!(f >= 0.0 && f <= 1.0)) fail(ErrorKind::domain, "f must lie in [0, 1]");
  if (target_rounds.has_value() == target_fidelity.has_value()) {
    fail(ErrorKind::configuration, "exactly one of target_rounds and target_fidelity must be set");
  }
  if (target_rounds && *target_rounds < 0) fail(ErrorKind::configuration, "target_rounds must be non-negative");
  if (!(p_inconclusive >= 0.0 && p_inconclusive < 1.0)) {
    fail(ErrorKind::domain, "p_inconclusive must lie in [0, 1)");
  }
  if (J == 0.0 || !std::isfinite(J)) fail(ErrorKind::degenerate_coupling, "J must be finite and non-zero");
  if (!(effective_gate_time() >= 0.0)) fail(ErrorKind::configuration, "gate_time must be non-negative");
  if (!(effective_restore_extra_time() >= 0.0)) {
    fail(ErrorKind::configuration, "restore_extra_time must be non-negative");
  }
  if (!(latency >= 0.0)) fail(ErrorKind::configuration, "latency must be non-negative");
  if (max_attempts < 1) fail(ErrorKind::configuration, "max_attempts must be positive");
  if (target_fidelity) {
    if (!(*target_fidelity >= 0.0 && *target_fidelity <= 1.0)) {
      fail(ErrorKind::configuration, "target_fidelity must lie in [0, 1]");
    }
    if (*target_fidelity > f) {
      const double x = fixed_point(f);
      if (*target_fidelity >= x) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "target_fidelity " << *target_fidelity << " is unreachable: pumping with f=" << f
            << " saturates at the fixed point " << x;
        fail(ErrorKind::configuration, msg.str());
      }
    }
  }
}

double ProtocolConfig::effective_gate_time() const {
  return gate_time ? *gate_time : operational_time(J).T;
}

double ProtocolConfig::effective_restore_extra_time() const {
  return restore_extra_time ? *restore_extra_time : std::numbers::pi / std::abs(J) - operational_time(J).T;
}

double attempt_success_probability(double f, double stored_fidelity, double p_inconclusive) {
  return closed_form_general(f, stored_fidelity).success_probability() * (1.0 - p_inconclusive);
}

ProtocolStats run_trial(const ProtocolConfig& config, std::uint64_t index) {
  std::mt19937_64 rng = trial_engine(config.seed, index);
  const double gate = config.effective_gate_time();
  const double extra = config.effective_restore_extra_time();
  const double T = operational_time(config.J).T;

  ProtocolStats stats;
  double current = config.f;
  DensityMatrix stored = werner(config.f, kStationaryPair);
  long attempts_this_round = 0;
  while (!finished(config, stats.rounds_succeeded, current)) {
    if (stats.rounds_attempted >= config.max_attempts) {
      fail(ErrorKind::analysis, "trial exceeded max_attempts without reaching the target");
    }
    double p = 0.0;
    std::optional<RoundResult> round;
    if (config.engine == ProtocolEngine::closed_form) {
      p = attempt_success_probability(config.f, current, config.p_inconclusive);
    } else {
      round = run_round({config.f, stored, T, config.J});
      p = round->success_probability * (1.0 - config.p_inconclusive);
    }
    ++stats.rounds_attempted;
    ++attempts_this_round;
    stats.messages_exchanged += 2;
    stats.total_time += gate + 2.0 * config.latency;
    if (uniform(rng) < p) {
      ++stats.rounds_succeeded;
      if (round) {
        stored = std::move(round->post_state);
        current = fidelity(stored, kStationaryPair);
      } else {
        current = closed_form_general(config.f, current).fidelity;
      }
      stats.fidelity_history.push_back(current);
      stats.attempts_per_round.push_back(attempts_this_round);
      attempts_this_round = 0;
    } else {
      // Failure or inconclusive: restoration returns the stored pair.
      stats.total_time += extra;
    }
  }
  stats.pairs_consumed = stats.rounds_attempted;
  stats.final_fidelity = current;
  return stats;
}

ProtocolStats run_protocol(const ProtocolConfig& config) {
  config.validate();
  return run_trial(config, 0);
}

std::vector<ProtocolStats> run_trials(const ProtocolConfig& config, long trials, unsigned workers,
                                      std::uint64_t first_index) {
  config.validate();
  if (trials < 0) fail(ErrorKind::configuration, "trial count must be non-negative");
  std::vector<ProtocolStats> out(static_cast<std::size_t>(trials));
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, std::max(1L, trials)));

  std::atomic<long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr long kChunk = 256;
  auto work = [&] {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const long begin = next.fetch_add(kChunk);
        if (begin >= trials) break;
        const long end = std::min(trials, begin + kChunk);
        for (long i = begin; i < end; ++i) {
          out[static_cast<std::size_t>(i)] = run_trial(config, first_index + static_cast<std::uint64_t>(i));
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

MonteCarloSummary summarize(const ProtocolConfig& config, std::span<const ProtocolStats> stats) {
  MonteCarloSummary s;
  s.trials = static_cast<long>(stats.size());
  if (stats.empty()) return s;
  double a = 0.0, a2 = 0.0, t = 0.0, t2 = 0.0, fid = 0.0, msg = 0.0;
  std::vector<long> attempts;
  std::vector<long> successes;
  for (const auto& st : stats) {
    const double n = static_cast<double>(st.rounds_attempted);
    a += n;
    a2 += n * n;
    t += st.total_time;
    t2 += st.total_time * st.total_time;
    fid += st.final_fidelity;
    msg += static_cast<double>(st.messages_exchanged);
    const std::size_t done = st.attempts_per_round.size();
    const std::size_t rounds = done + (st.rounds_attempted > std::accumulate(st.attempts_per_round.begin(),
                                                                              st.attempts_per_round.end(), 0L)
                                           ? 1
                                           : 0);
    if (attempts.size() < rounds) {
      attempts.resize(rounds, 0);
      successes.resize(rounds, 0);
    }
    long used = 0;
    for (std::size_t k = 0; k < done; ++k) {
      attempts[k] += st.attempts_per_round[k];
      successes[k] += 1;
      used += st.attempts_per_round[k];
    }
    if (rounds > done) attempts[done] += st.rounds_attempted - used;
  }
  const double n = static_cast<double>(s.trials);
  s.mean_attempts = a / n;
  s.attempts_half_width = half_width(a, a2, s.trials);
  s.mean_time = t / n;
  s.time_half_width = half_width(t, t2, s.trials);
  s.mean_final_fidelity = fid / n;
  s.mean_messages = msg / n;

  // Expected per-round rates follow the closed-form fidelity sequence.
  double current = config.f;
  for (std::size_t k = 0; k < attempts.size(); ++k) {
    RoundRate r;
    r.round = static_cast<int>(k + 1);
    r.attempts = attempts[k];
    r.successes = successes[k];
    r.empirical = r.attempts > 0 ? static_cast<double>(r.successes) / static_cast<double>(r.attempts) : 0.0;
    r.expected = attempt_success_probability(config.f, current, config.p_inconclusive);
    r.sigma = r.attempts > 0 ? std::sqrt(r.expected * (1.0 - r.expected) / static_cast<double>(r.attempts)) : 0.0;
    s.round_rates.push_back(r);
    current = closed_form_general(config.f, current).fidelity;
  }
  return s;
}

AnalyticResources analytic_resources(const ProtocolConfig& config) {
  config.validate();
  AnalyticResources out;
  const double gate = config.effective_gate_time() + 2.0 * config.latency;
  const double extra = config.effective_restore_extra_time();
  double current = config.f;
  out.fidelities.push_back(current);
  int done = 0;
  while (!finished(config, done, current)) {
    const double p = attempt_success_probability(config.f, current, config.p_inconclusive);
    const double mean = 1.0 / p;
    out.success_probabilities.push_back(p);
    out.expected_attempts += mean;
    out.expected_time += mean * gate + (mean - 1.0) * extra;
    current = closed_form_general(config.f, current).fidelity;
    out.fidelities.push_back(current);
    if (++done > 1'000'000) fail(ErrorKind::analysis, "target not reached within 10^6 rounds");
  }
  return out;
}

std::vector<ResourceRow> resource_curve(std::span<const double> f_grid, double target_fidelity,
                                        const ProtocolConfig& base, long trials, unsigned workers) {
  std::vector<ResourceRow> rows;
  rows.reserve(f_grid.size());
  for (double f : f_grid) {
    ProtocolConfig c = base;
    c.f = f;
    c.target_rounds.reset();
    c.target_fidelity = target_fidelity;
    const AnalyticResources analytic = analytic_resources(c);
    const std::vector<ProtocolStats> stats = run_trials(c, trials, workers);
    const MonteCarloSummary s = summarize(c, stats);
    rows.push_back({
        .f = f,
        .rounds = static_cast<int>(analytic.success_probabilities.size()),
        .mean_pairs = s.mean_attempts,
        .pairs_half_width = s.attempts_half_width,
        .analytic_pairs = analytic.expected_attempts,
        .mean_time = s.mean_time,
        .time_half_width = s.time_half_width,
        .achieved_fidelity = s.mean_final_fidelity,
    });
  }
  return rows;
}

}  // namespace xypurify
