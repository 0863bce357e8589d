// xypurify: command-line front end. Every subcommand writes CSV or JSON to
// stdout (or --output) and exits 0 on success, 2 on rejected input and 3 on a
// numerical failure, with a JSON error object on stderr.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xypurify/cavity.hpp"
#include "xypurify/cnot_baseline.hpp"
#include "xypurify/errors.hpp"
#include "xypurify/format.hpp"
#include "xypurify/montecarlo.hpp"
#include "xypurify/montecarlo_io.hpp"
#include "xypurify/pumping.hpp"
#include "xypurify/purification.hpp"

namespace xp = xypurify;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr long kBatch = 10'000;

struct Output {
  std::string path;
  std::string format = "csv";
};

// Writes to the --output file, or stdout when none was given.
void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) xp::fail(xp::ErrorKind::configuration, "cannot write " + out.path);
  file << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Table output in the requested format; JSON is an array of row objects.
std::string table(const Output& out, const std::vector<std::string>& header,
                  const std::vector<std::vector<double>>& rows) {
  if (out.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json obj;
      for (std::size_t k = 0; k < header.size(); ++k) obj[header[k]] = r[k];
      arr.push_back(obj);
    }
    return dump(arr);
  }
  std::ostringstream text;
  for (std::size_t k = 0; k < header.size(); ++k) text << (k ? "," : "") << header[k];
  text << '\n';
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) text << (k ? "," : "") << xp::format_number(r[k]);
    text << '\n';
  }
  return text.str();
}

unsigned worker_count() {
  const char* env = std::getenv("XYPURIFY_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) xp::fail(xp::ErrorKind::configuration, "XYPURIFY_THREADS must be a positive integer");
  return static_cast<unsigned>(n);
}

void add_output(CLI::App* cmd, Output& out, bool json_default = false) {
  if (json_default) out.format = "json";
  cmd->add_option("-o,--output", out.path, "Output file (default: stdout)");
  cmd->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

json matrix_json(const Eigen::Matrix3d& m) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
  return rows;
}

// ---------------------------------------------------------------------------

struct RoundArgs {
  double f = 0.75;
  double f_prime = 0.75;
  std::optional<double> jt0;
  bool at_T = false;
  double J = 1.0;
  Output out;
};

void cmd_round(const RoundArgs& a) {
  if (a.at_T == a.jt0.has_value()) {
    xp::fail(xp::ErrorKind::configuration, "give exactly one of --at-T and --jt0");
  }
  if (a.J == 0.0) xp::fail(xp::ErrorKind::degenerate_coupling, "J must be non-zero");
  const double t0 = a.at_T ? xp::operational_time(a.J).T : *a.jt0 / a.J;
  const xp::RoundResult r = xp::run_round({a.f, xp::werner(a.f_prime, xp::kStationaryPair), t0, a.J});

  json doc{{"f", a.f},
           {"f_prime", a.f_prime},
           {"jt0", a.J * t0},
           {"fidelity", xp::fidelity(r.post_state, xp::kStationaryPair)},
           {"outcome_probability", r.outcome_probability},
           {"success_probability", r.success_probability},
           {"werner_deviation", r.werner_deviation}};
  if (a.at_T) {
    const xp::ClosedFormRound c = xp::closed_form_general(a.f, a.f_prime);
    doc["closed_form_fidelity"] = c.fidelity;
    doc["closed_form_outcome_probability"] = c.outcome_probability;
  } else if (a.f == a.f_prime) {
    doc["closed_form_fidelity"] = xp::closed_form_fidelity(t0, a.f, a.J);
    doc["closed_form_outcome_probability"] = xp::closed_form_outcome_probability(t0, a.f, a.J);
  }
  if (a.out.format == "json") {
    emit(a.out, dump(doc));
    return;
  }
  std::vector<std::string> header;
  std::vector<double> row;
  for (const auto& [k, v] : doc.items()) {
    header.push_back(k);
    row.push_back(v.get<double>());
  }
  emit(a.out, table(a.out, header, {row}));
}

struct Fig5Args {
  std::string panel = "a";
  double f = 0.75;
  int points = 61;
  double lo = 0.5;
  double hi = 1.0;
  Output out;
};

void cmd_fig5(const Fig5Args& a) {
  if (a.points < 2) xp::fail(xp::ErrorKind::domain, "--points must be at least 2");
  std::vector<std::vector<double>> rows;
  if (a.panel == "a") {
    // Jt0 over [0, π/3]; an odd point count places a row at π/6.
    for (double jt : xp::linspace(0.0, std::numbers::pi / 3.0, a.points)) {
      rows.push_back({jt, xp::closed_form_fidelity(jt, a.f, 1.0), xp::closed_form_outcome_probability(jt, a.f, 1.0)});
    }
    emit(a.out, table(a.out, {"jt0", "fidelity", "outcome_probability"}, rows));
  } else if (a.panel == "b") {
    const std::vector<double> grid = xp::linspace(a.lo, a.hi, a.points);
    for (const auto& r : xp::compare_figure5b(grid)) {
      rows.push_back({r.f, r.xy_fidelity, r.cnot_fidelity, r.scheme_c_two_rounds});
    }
    emit(a.out, table(a.out, {"f", "xy_fidelity", "cnot_fidelity", "scheme_c_two_rounds"}, rows));
  } else {
    const std::vector<double> grid = xp::linspace(a.lo, a.hi, a.points);
    for (double f : grid) {
      for (double fp : grid) {
        const xp::ClosedFormRound r = xp::closed_form_general(f, fp);
        rows.push_back({f, fp, r.fidelity, r.outcome_probability});
      }
    }
    emit(a.out, table(a.out, {"f", "f_prime", "fidelity", "outcome_probability"}, rows));
  }
}

struct Fig6Args {
  int points = 9;
  double lo = 0.55;
  double hi = 0.95;
  int n_max = 8;
  Output out;
};

void cmd_fig6(const Fig6Args& a) {
  const std::vector<double> grid = xp::linspace(a.lo, a.hi, a.points);
  const std::vector<xp::Figure6Row> data = xp::figure6_data(grid, std::max(a.n_max, 4));
  std::vector<std::vector<double>> rows;
  for (const auto& r : data) {
    if (r.n > a.n_max) continue;
    double inc1 = 0.0;
    double inc4 = 0.0;
    for (const auto& s : data) {
      if (s.f != r.f) continue;
      if (s.n == 1) inc1 = s.increment;
      if (s.n == 4) inc4 = s.increment;
    }
    rows.push_back({r.f, static_cast<double>(r.n), r.gain, r.increment, r.final_fidelity, inc1, inc4});
  }
  emit(a.out, table(a.out, {"f", "n", "gain", "increment", "final_fidelity", "increment_n1", "increment_n4"}, rows));
}

struct PumpArgs {
  double f = 0.75;
  int rounds = 6;
  std::string mode = "closed_form";
  double epsilon = 1e-3;
  double J = 1.0;
  Output out;
};

void cmd_pump(const PumpArgs& a) {
  const xp::PumpMode mode = a.mode == "simulation" ? xp::PumpMode::simulation : xp::PumpMode::closed_form;
  xp::PumpOptions opts;
  opts.J = a.J;
  opts.epsilon = a.epsilon;
  const xp::PumpTrace t = xp::pump(a.f, a.rounds, mode, opts);
  if (a.out.format == "csv") {
    std::vector<std::vector<double>> rows;
    for (const auto& r : t.rounds) rows.push_back({static_cast<double>(r.n), r.fidelity, r.increment, r.success_probability});
    emit(a.out, table(a.out, {"n", "fidelity", "increment", "success_probability"}, rows));
    return;
  }
  json rounds = json::array();
  for (const auto& r : t.rounds) {
    rounds.push_back({{"n", r.n},
                      {"fidelity", r.fidelity},
                      {"increment", r.increment},
                      {"success_probability", r.success_probability}});
  }
  json doc{{"f", t.f},
           {"mode", a.mode},
           {"rounds", rounds},
           {"fixed_point", t.fixed_point},
           {"n_optimal", t.n_optimal},
           {"gain", t.gain()}};
  doc["saturated_at"] = t.saturated_at ? json(*t.saturated_at) : json(nullptr);
  emit(a.out, dump(doc));
}

struct CavityArgs {
  double delta = 50.0;
  double ell = 1.0;
  double w = 1.0;
  double g0 = 1.0;
  double v = 1.0;
  int doublings = 0;
  bool force = false;
  Output out;
};

void cmd_validate_cavity(const CavityArgs& a) {
  if (!(a.g0 > 0.0)) xp::fail(xp::ErrorKind::geometry, "g0 must be positive");
  const double d = xp::solve_geometry(a.ell, a.w);
  xp::CavityGeometry geom = xp::CavityGeometry::centered(a.g0, a.w, a.ell, d, a.v, a.delta);
  geom.validate();
  if (!geom.adiabatic() && !a.force) {
    std::ostringstream msg;
    msg << "|Delta|/g0 = " << std::abs(a.delta / a.g0) << " is below " << geom.adiabatic_ratio_min
        << ": the effective XY description needs a rather large detuning, |Delta| >> g0 (use --force to run anyway)";
    xp::fail(xp::ErrorKind::configuration, msg.str());
  }
  const xp::AgreementReport r = xp::xy_agreement(geom);
  json doc{{"delta", a.delta},
           {"ell", a.ell},
           {"w", a.w},
           {"g0", a.g0},
           {"v", a.v},
           {"d", r.d},
           {"adiabatic", geom.adiabatic()},
           {"t_prime", r.t_prime},
           {"mean_coupling", r.mean_coupling},
           {"J", r.J},
           {"xy_angle", r.xy_angle},
           {"operational_velocity", r.operational_velocity},
           {"C", matrix_json(r.C)},
           {"C12", r.C(0, 1)},
           {"integral_relative_error", r.integral_relative_error},
           {"full_vs_effective", r.full_vs_effective},
           {"full_vs_mean", r.full_vs_mean},
           {"effective_vs_mean", r.effective_vs_mean},
           {"mean_vs_xy_corrected", r.mean_vs_xy_corrected},
           {"mean_displacement", r.mean_displacement},
           {"dipole_vs_asymptotic", r.dipole_vs_asymptotic},
           {"asymptotic_displacement", r.asymptotic_displacement},
           {"max_leakage", r.max_leakage},
           {"leakage_bound", r.leakage_bound},
           {"norm_drift", r.norm_drift},
           {"commutator_ratio", r.commutator_ratio}};
  if (a.doublings > 0) {
    json study = json::array();
    for (const auto& p : xp::convergence_study(geom, a.doublings)) {
      study.push_back({{"delta", p.delta}, {"distance", p.distance}, {"order", p.order}});
    }
    doc["convergence"] = study;
  }
  emit(a.out, dump(doc));
}

struct MonteCarloArgs {
  std::string config;
  std::string trials_csv;
  Output out;
};

void cmd_montecarlo(const MonteCarloArgs& a) {
  const xp::MonteCarloRun run = xp::load_run_config(a.config);
  const unsigned workers = worker_count();
  const xp::AnalyticResources analytic = xp::analytic_resources(run.protocol);
  std::vector<xp::ProtocolStats> stats;
  stats.reserve(static_cast<std::size_t>(run.trials));
  for (long begin = 0; begin < run.trials; begin += kBatch) {
    const long n = std::min(kBatch, run.trials - begin);
    auto batch = xp::run_trials(run.protocol, n, workers, static_cast<std::uint64_t>(begin));
    const xp::MonteCarloSummary partial = xp::summarize(run.protocol, batch);
    std::cerr << "batch " << begin / kBatch << ": trials " << begin << ".." << begin + n - 1
              << " mean_attempts=" << xp::format_number(partial.mean_attempts) << '\n';
    std::move(batch.begin(), batch.end(), std::back_inserter(stats));
  }
  const xp::MonteCarloSummary summary = xp::summarize(run.protocol, stats);
  emit(a.out, dump(xp::to_json(run, summary, analytic)));
  if (!a.trials_csv.empty()) {
    std::ofstream csv(a.trials_csv, std::ios::binary);
    if (!csv) xp::fail(xp::ErrorKind::configuration, "cannot write " + a.trials_csv);
    xp::write_trials_csv(csv, stats);
  }
}

struct ResourcesArgs {
  double lo = 0.6;
  double hi = 0.95;
  int points = 8;
  double target = 0.85;
  long trials = 10'000;
  std::uint64_t seed = 0;
  double p_inconclusive = 0.0;
  Output out;
};

void cmd_resources(const ResourcesArgs& a) {
  xp::ProtocolConfig base;
  base.seed = a.seed;
  base.p_inconclusive = a.p_inconclusive;
  const std::vector<double> grid = xp::linspace(a.lo, a.hi, a.points);
  std::vector<std::vector<double>> rows;
  for (const auto& r : xp::resource_curve(grid, a.target, base, a.trials, worker_count())) {
    rows.push_back({r.f, static_cast<double>(r.rounds), r.mean_pairs, r.pairs_half_width, r.analytic_pairs,
                    r.mean_time, r.time_half_width, r.achieved_fidelity});
  }
  emit(a.out, table(a.out,
                    {"f", "rounds", "mean_pairs", "pairs_half_width", "analytic_pairs", "mean_time",
                     "time_half_width", "achieved_fidelity"},
                    rows));
}

void report_error(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement purification with an XY three-qubit gate"};
  app.require_subcommand(1);

  RoundArgs round_args;
  auto* round = app.add_subcommand("round", "One purification round: simulation and closed form");
  round->add_option("--f", round_args.f, "Fidelity of the conveyed pairs")->required();
  round->add_option("--fprime", round_args.f_prime, "Fidelity of the stationary pair")->required();
  round->add_flag("--at-T", round_args.at_T, "Evolve for the operational time T = pi/(6J)");
  round->add_option("--jt0", round_args.jt0, "Evolution angle J t0");
  round->add_option("--J", round_args.J, "XY coupling");
  add_output(round, round_args.out, true);

  Fig5Args fig5_args;
  auto* fig5 = app.add_subcommand("fig5", "Round fidelity curves (panels a, b, c)");
  fig5->add_option("--panel", fig5_args.panel)->check(CLI::IsMember({"a", "b", "c"}))->required();
  fig5->add_option("--f", fig5_args.f, "Werner fidelity for panel a");
  fig5->add_option("--points", fig5_args.points, "Grid points per axis");
  fig5->add_option("--lo", fig5_args.lo, "Lower fidelity bound (panels b, c)");
  fig5->add_option("--hi", fig5_args.hi, "Upper fidelity bound (panels b, c)");
  add_output(fig5, fig5_args.out);

  Fig6Args fig6_args;
  auto* fig6 = app.add_subcommand("fig6", "Pumping gain and per-round increment");
  fig6->add_option("--points", fig6_args.points);
  fig6->add_option("--lo", fig6_args.lo);
  fig6->add_option("--hi", fig6_args.hi);
  fig6->add_option("--n-max", fig6_args.n_max)->check(CLI::PositiveNumber);
  add_output(fig6, fig6_args.out);

  PumpArgs pump_args;
  auto* pump = app.add_subcommand("pump", "Entanglement pumping trace");
  pump->add_option("--f", pump_args.f)->required();
  pump->add_option("--rounds", pump_args.rounds);
  pump->add_option("--mode", pump_args.mode)->check(CLI::IsMember({"closed_form", "simulation"}));
  pump->add_option("--epsilon", pump_args.epsilon);
  pump->add_option("--J", pump_args.J);
  add_output(pump, pump_args.out, true);

  CavityArgs cavity_args;
  auto* cavity = app.add_subcommand("validate-cavity", "Compare cavity dynamics with the XY ring Hamiltonian");
  cavity->add_option("--delta", cavity_args.delta, "Detuning in units of g0");
  cavity->add_option("--ell", cavity_args.ell, "Stationary-atom offset in units of w");
  cavity->add_option("--w", cavity_args.w, "Cavity waist");
  cavity->add_option("--g0", cavity_args.g0, "Vacuum Rabi frequency");
  cavity->add_option("--v", cavity_args.v, "Conveyor velocity in w g0");
  cavity->add_option("--convergence", cavity_args.doublings, "Number of detuning doublings to study");
  cavity->add_flag("--force", cavity_args.force, "Run outside the adiabatic regime");
  add_output(cavity, cavity_args.out, true);

  MonteCarloArgs mc_args;
  auto* mc = app.add_subcommand("montecarlo", "Stochastic protocol simulation from a JSON config");
  mc->add_option("--config", mc_args.config)->required();
  mc->add_option("--trials-csv", mc_args.trials_csv, "Per-trial summary CSV");
  add_output(mc, mc_args.out, true);

  ResourcesArgs res_args;
  auto* res = app.add_subcommand("resources", "Pairs and time needed to reach a target fidelity");
  res->add_option("--lo", res_args.lo);
  res->add_option("--hi", res_args.hi);
  res->add_option("--points", res_args.points);
  res->add_option("--target", res_args.target)->required();
  res->add_option("--trials", res_args.trials);
  res->add_option("--seed", res_args.seed);
  res->add_option("--p-inconclusive", res_args.p_inconclusive);
  add_output(res, res_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitValidation;
  }

  const std::vector<std::pair<CLI::App*, std::function<void()>>> dispatch{
      {round, [&] { cmd_round(round_args); }},
      {fig5, [&] { cmd_fig5(fig5_args); }},
      {fig6, [&] { cmd_fig6(fig6_args); }},
      {pump, [&] { cmd_pump(pump_args); }},
      {cavity, [&] { cmd_validate_cavity(cavity_args); }},
      {mc, [&] { cmd_montecarlo(mc_args); }},
      {res, [&] { cmd_resources(res_args); }},
  };
  try {
    for (const auto& [cmd, run] : dispatch) {
      if (cmd->parsed()) run();
    }
  } catch (const xp::Error& e) {
    report_error(xp::to_string(e.kind()), e.what());
    return xp::is_validation(e.kind()) ? kExitValidation : kExitNumeric;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kExitNumeric;
  }
  return 0;
}
