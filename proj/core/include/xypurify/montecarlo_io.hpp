#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include <nlohmann/json.hpp>

#include "xypurify/montecarlo.hpp"

namespace xypurify {

inline constexpr int kConfigSchemaVersion = 1;

struct MonteCarloRun {
  ProtocolConfig protocol;
  long trials = 1000;
};

/// Flat JSON document with a `schema_version` field. Unknown keys, wrong
/// types and unsupported versions raise a configuration error.
MonteCarloRun parse_run_config(const nlohmann::json& doc);
MonteCarloRun load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const ProtocolConfig& config);
nlohmann::json to_json(const MonteCarloRun& run, const MonteCarloSummary& summary,
                       const AnalyticResources& analytic);

/// Header `trial,rounds_attempted,rounds_succeeded,pairs_consumed,total_time,messages_exchanged,final_fidelity`.
void write_trials_csv(std::ostream& out, std::span<const ProtocolStats> stats);

}  // namespace xypurify
