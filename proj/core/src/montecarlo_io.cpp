#include "xypurify/montecarlo_io.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <string>

#include "xypurify/errors.hpp"
#include "xypurify/format.hpp"

namespace xypurify {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "schema_version", "f",       "target_rounds", "target_fidelity", "p_inconclusive", "seed", "J",
      "gate_time",      "restore_extra_time", "latency", "engine",   "max_attempts",    "trials"};
  return keys;
}

double get_number(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number()) fail(ErrorKind::configuration, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

long get_integer(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer()) fail(ErrorKind::configuration, std::string("'") + key + "' must be an integer");
  return v.get<long>();
}

}  // namespace

MonteCarloRun parse_run_config(const json& doc) {
  if (!doc.is_object()) fail(ErrorKind::configuration, "configuration must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!known_keys().contains(key)) fail(ErrorKind::configuration, "unknown configuration key '" + key + "'");
  }
  if (!doc.contains("schema_version")) fail(ErrorKind::configuration, "missing 'schema_version'");
  if (get_integer(doc, "schema_version") != kConfigSchemaVersion) {
    fail(ErrorKind::configuration, "unsupported schema_version (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }

  MonteCarloRun run;
  ProtocolConfig& c = run.protocol;
  if (!doc.contains("f")) fail(ErrorKind::configuration, "missing 'f'");
  c.f = get_number(doc, "f");
  if (doc.contains("target_rounds")) c.target_rounds = static_cast<int>(get_integer(doc, "target_rounds"));
  if (doc.contains("target_fidelity")) c.target_fidelity = get_number(doc, "target_fidelity");
  if (doc.contains("p_inconclusive")) c.p_inconclusive = get_number(doc, "p_inconclusive");
  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    const bool non_negative = s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0);
    if (!non_negative) fail(ErrorKind::configuration, "'seed' must be a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("J")) c.J = get_number(doc, "J");
  if (doc.contains("gate_time")) c.gate_time = get_number(doc, "gate_time");
  if (doc.contains("restore_extra_time")) c.restore_extra_time = get_number(doc, "restore_extra_time");
  if (doc.contains("latency")) c.latency = get_number(doc, "latency");
  if (doc.contains("max_attempts")) c.max_attempts = get_integer(doc, "max_attempts");
  if (doc.contains("engine")) {
    const json& e = doc.at("engine");
    const std::string name = e.is_string() ? e.get<std::string>() : "";
    if (name == "closed_form") {
      c.engine = ProtocolEngine::closed_form;
    } else if (name == "density_matrix") {
      c.engine = ProtocolEngine::density_matrix;
    } else {
      fail(ErrorKind::configuration, "'engine' must be \"closed_form\" or \"density_matrix\"");
    }
  }
  if (doc.contains("trials")) run.trials = get_integer(doc, "trials");
  if (run.trials < 1) fail(ErrorKind::configuration, "'trials' must be positive");
  c.validate();
  return run;
}

MonteCarloRun load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::configuration, "cannot open configuration file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::configuration, std::string("malformed configuration JSON: ") + e.what());
  }
  return parse_run_config(doc);
}

json to_json(const ProtocolConfig& c) {
  json out{
      {"f", c.f},
      {"p_inconclusive", c.p_inconclusive},
      {"seed", c.seed},
      {"J", c.J},
      {"gate_time", c.effective_gate_time()},
      {"restore_extra_time", c.effective_restore_extra_time()},
      {"latency", c.latency},
      {"engine", c.engine == ProtocolEngine::closed_form ? "closed_form" : "density_matrix"},
  };
  if (c.target_rounds) out["target_rounds"] = *c.target_rounds;
  if (c.target_fidelity) out["target_fidelity"] = *c.target_fidelity;
  return out;
}

json to_json(const MonteCarloRun& run, const MonteCarloSummary& s, const AnalyticResources& analytic) {
  json rates = json::array();
  for (const auto& r : s.round_rates) {
    rates.push_back({{"round", r.round},
                     {"attempts", r.attempts},
                     {"successes", r.successes},
                     {"empirical", r.empirical},
                     {"expected", r.expected},
                     {"sigma", r.sigma}});
  }
  return json{
      {"schema_version", kConfigSchemaVersion},
      {"config", to_json(run.protocol)},
      {"trials", s.trials},
      {"mean_attempts", s.mean_attempts},
      {"attempts_half_width", s.attempts_half_width},
      {"analytic_attempts", analytic.expected_attempts},
      {"mean_pairs_consumed", s.mean_attempts},
      {"mean_time", s.mean_time},
      {"time_half_width", s.time_half_width},
      {"analytic_time", analytic.expected_time},
      {"mean_messages", s.mean_messages},
      {"mean_final_fidelity", s.mean_final_fidelity},
      {"round_rates", rates},
  };
}

void write_trials_csv(std::ostream& out, std::span<const ProtocolStats> stats) {
  out << "trial,rounds_attempted,rounds_succeeded,pairs_consumed,total_time,messages_exchanged,final_fidelity\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const ProtocolStats& s = stats[i];
    out << i << ',' << s.rounds_attempted << ',' << s.rounds_succeeded << ',' << s.pairs_consumed << ','
        << format_number(s.total_time) << ',' << s.messages_exchanged << ',' << format_number(s.final_fidelity)
        << '\n';
  }
}

}  // namespace xypurify
