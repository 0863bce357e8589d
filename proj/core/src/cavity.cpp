#include "xypurify/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "xypurify/errors.hpp"
#include "xypurify/xy_dynamics.hpp"

namespace xypurify {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<Complex, 4>;

// Index of |e_k> for atom k (1-based) in the three-qubit register.
Eigen::Index excitation_index(int atom) { return Eigen::Index{1} << (3 - atom); }

template <class System>
Trajectory integrate(System&& system, const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                     const IntegratorOptions& options) {
  geom.validate();
  if (!(window.end > window.start)) fail(ErrorKind::domain, "integration window must have positive length");
  const double span = window.end - window.start;
  const double max_dt = options.max_step_fraction * geom.w / geom.v;
  const double min_dt = options.min_step_fraction * span;

  auto stepper = odeint::make_controlled(options.atol, options.rtol, odeint::runge_kutta_dopri5<State>());

  Trajectory out;
  State x = initial.c;
  double t = window.start;
  double dt = std::min({options.initial_step, max_dt, span});
  const double norm0 = initial.norm_squared();
  auto record = [&](double time, const State& s) {
    const double leak = std::norm(s[0]);
    out.max_leakage = std::max(out.max_leakage, leak);
    AmplitudeState a{time, s};
    out.norm_drift = std::max(out.norm_drift, std::abs(a.norm_squared() - norm0));
    if (options.record_all) out.samples.push_back(a);
  };
  out.samples.push_back({t, x});
  record(t, x);
  if (options.record_all) out.samples.pop_back();

  while (t < window.end) {
    dt = std::min({dt, max_dt, window.end - t});
    if (dt < min_dt && window.end - t > min_dt) {
      std::ostringstream msg;
      msg << "step size underflow at t=" << t << " (dt=" << dt << "); the detuning |Delta|/g0="
          << std::abs(geom.delta / geom.g0) << " makes the system too stiff for rtol=" << options.rtol
          << "; loosen the tolerance or reduce |Delta|";
      fail(ErrorKind::stiffness, msg.str());
    }
    if (out.accepted_steps + out.rejected_steps > options.max_steps) {
      fail(ErrorKind::stiffness, "integration exceeded the step budget; reduce |Delta| or widen the tolerances");
    }
    if (stepper.try_step(system, x, t, dt) == odeint::success) {
      ++out.accepted_steps;
      record(t, x);
    } else {
      ++out.rejected_steps;
    }
  }
  if (!options.record_all) out.samples.clear();
  if (out.samples.empty() || out.samples.front().t != window.start) {
    out.samples.insert(out.samples.begin(), AmplitudeState{window.start, initial.c});
  }
  if (out.samples.back().t != t) out.samples.push_back({t, x});
  return out;
}

double vector_distance(const State& a, const Vector& b) {
  double acc = 0.0;
  for (int k = 1; k <= 3; ++k) acc += std::norm(a[static_cast<std::size_t>(k)] - b(excitation_index(k)));
  return std::sqrt(acc);
}

double vector_distance(const State& a, const State& b) {
  double acc = 0.0;
  for (std::size_t k = 1; k <= 3; ++k) acc += std::norm(a[k] - b[k]);
  return std::sqrt(acc);
}

Eigen::Matrix3d dipole_matrix(const CavityGeometry& geom, double t) {
  Eigen::Vector3d g(coupling(geom, 1, t), coupling(geom, 2, t), coupling(geom, 3, t));
  Eigen::Matrix3d h = g * g.transpose() / geom.delta;
  h.diagonal().setZero();
  return h;
}

}  // namespace

CavityGeometry CavityGeometry::centered(double g0, double w, double ell, double d, double v, double delta) {
  CavityGeometry g;
  g.g0 = g0;
  g.w = w;
  g.ell = ell;
  g.d = d;
  g.v = v;
  g.delta = delta;
  g.z0 = {-0.5 * d, 0.5 * d};
  return g;
}

void CavityGeometry::validate() const {
  if (!(g0 > 0.0)) fail(ErrorKind::geometry, "g0 must be positive");
  if (!(w > 0.0)) fail(ErrorKind::geometry, "waist w must be positive");
  if (!(v > 0.0)) fail(ErrorKind::geometry, "conveyor velocity must be positive");
  if (!(std::abs(delta) > 0.0) || !std::isfinite(delta)) fail(ErrorKind::geometry, "detuning must be non-zero");
  if (!(d >= 0.0)) fail(ErrorKind::geometry, "pair spacing d must be non-negative");
  if (std::abs(std::abs(z0[0] - z0[1]) - d) > 1e-9 * std::max(1.0, d)) {
    fail(ErrorKind::geometry, "initial positions must be separated by d");
  }
}

bool CavityGeometry::adiabatic() const { return std::abs(delta) >= adiabatic_ratio_min * g0; }

double CavityGeometry::mean_coupling() const { return g0 * std::exp(-ell * ell / (2.0 * w * w)); }

double CavityGeometry::interaction_time() const { return std::sqrt(std::numbers::pi) * w / v; }

double CavityGeometry::c12() const {
  return std::exp((2.0 * ell * ell - d * d) / (2.0 * w * w)) / std::sqrt(2.0);
}

TimeWindow default_window(const CavityGeometry& geom, double half_width) {
  geom.validate();
  if (!(half_width > 0.0)) fail(ErrorKind::domain, "window half-width must be positive");
  const double reach = half_width * geom.w;
  const double lead = std::max(geom.z0[0], geom.z0[1]);
  const double trail = std::min(geom.z0[0], geom.z0[1]);
  return {(-reach - lead) / geom.v, (reach - trail) / geom.v};
}

double coupling(const CavityGeometry& geom, int atom, double t) {
  switch (atom) {
    case 1:
    case 2: {
      const double z = geom.z0[static_cast<std::size_t>(atom - 1)] + geom.v * t;
      return geom.g0 * std::exp(-z * z / (geom.w * geom.w));
    }
    case 3:
      return geom.g0 * std::exp(-geom.ell * geom.ell / (geom.w * geom.w));
    default:
      fail(ErrorKind::domain, "atom index must be 1, 2 or 3");
  }
}

double AmplitudeState::norm_squared() const {
  double s = 0.0;
  for (const auto& a : c) s += std::norm(a);
  return s;
}

Trajectory integrate_full(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                          const IntegratorOptions& options) {
  const Complex i(0.0, 1.0);
  auto system = [&geom, i](const State& c, State& dcdt, double t) {
    const double g1 = coupling(geom, 1, t);
    const double g2 = coupling(geom, 2, t);
    const double g3 = coupling(geom, 3, t);
    dcdt[0] = i * geom.delta * c[0] + g1 * c[1] + g2 * c[2] + g3 * c[3];
    dcdt[1] = -g1 * c[0];
    dcdt[2] = -g2 * c[0];
    dcdt[3] = -g3 * c[0];
  };
  return integrate(system, geom, initial, window, options);
}

Trajectory integrate_effective(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                               const IntegratorOptions& options) {
  const Complex minus_i(0.0, -1.0);
  AmplitudeState start = initial;
  start.c[0] = 0.0;
  auto system = [&geom, minus_i](const State& c, State& dcdt, double t) {
    const std::array<double, 3> g{coupling(geom, 1, t), coupling(geom, 2, t), coupling(geom, 3, t)};
    const Complex projected = g[0] * c[1] + g[1] * c[2] + g[2] * c[3];
    dcdt[0] = 0.0;
    for (std::size_t k = 0; k < 3; ++k) dcdt[k + 1] = minus_i * g[k] * projected / geom.delta;
  };
  return integrate(system, geom, start, window, options);
}

Trajectory integrate_dipole(const CavityGeometry& geom, const AmplitudeState& initial, TimeWindow window,
                            const IntegratorOptions& options) {
  const Complex minus_i(0.0, -1.0);
  AmplitudeState start = initial;
  start.c[0] = 0.0;
  auto system = [&geom, minus_i](const State& c, State& dcdt, double t) {
    const std::array<double, 3> g{coupling(geom, 1, t), coupling(geom, 2, t), coupling(geom, 3, t)};
    const Complex projected = g[0] * c[1] + g[1] * c[2] + g[2] * c[3];
    dcdt[0] = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      dcdt[k + 1] = minus_i * g[k] * (projected - g[k] * c[k + 1]) / geom.delta;
    }
  };
  return integrate(system, geom, start, window, options);
}

AsymptoticHamiltonian asymptotic_hamiltonian(const CavityGeometry& geom, TimeWindow window) {
  geom.validate();
  AsymptoticHamiltonian out;
  out.t_prime = geom.interaction_time();

  // Fraction of ∫ exp(−(z0 + vt)²/w²) dt falling outside the window.
  for (int atom : {1, 2}) {
    const double z = geom.z0[static_cast<std::size_t>(atom - 1)];
    const double a = (z + geom.v * window.start) / geom.w;
    const double b = (z + geom.v * window.end) / geom.w;
    const double tail = 0.5 * std::erfc(-a) + 0.5 * std::erfc(b);
    out.tail_mass = std::max(out.tail_mass, tail);
  }
  if (out.tail_mass > 1e-8) {
    fail(ErrorKind::truncation, "integration window truncates the coupling envelope (tail mass " +
                                    std::to_string(out.tail_mass) + " > 1e-8)");
  }

  out.C << 0.0, geom.c12(), 1.0, geom.c12(), 0.0, 1.0, 1.0, 1.0, 0.0;
  const double prefactor = geom.g0 * geom.g0 * std::exp(-geom.ell * geom.ell / (geom.w * geom.w));
  out.H_inf = prefactor / geom.delta * out.C;

  using boost::math::quadrature::gauss_kronrod;
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      auto integrand = [&geom, i, j](double t) { return coupling(geom, i, t) * coupling(geom, j, t); };
      const double value = gauss_kronrod<double, 61>::integrate(integrand, window.start, window.end, 20, 1e-14);
      out.integrals(i - 1, j - 1) = out.integrals(j - 1, i - 1) = value;
      const double expected = prefactor * out.C(i - 1, j - 1) * out.t_prime;
      out.max_relative_error = std::max(out.max_relative_error, std::abs(value - expected) / expected);
    }
  }
  return out;
}

AsymptoticHamiltonian asymptotic_hamiltonian(const CavityGeometry& geom) {
  return asymptotic_hamiltonian(geom, default_window(geom));
}

double minimum_feasible_ell(double w) { return w * std::sqrt(std::log(2.0) / 2.0); }

double solve_geometry(double ell, double w) {
  if (!(w > 0.0)) fail(ErrorKind::geometry, "waist w must be positive");
  const double d2 = 2.0 * ell * ell - w * w * std::log(2.0);
  if (d2 < 0.0) {
    std::ostringstream msg;
    msg << "C12 = 1 is infeasible for ell = " << ell << ": need ell >= w*sqrt(ln2/2) = " << minimum_feasible_ell(w);
    fail(ErrorKind::geometry, msg.str());
  }
  return std::sqrt(d2);
}

AgreementReport xy_agreement(const CavityGeometry& geom, const IntegratorOptions& options) {
  geom.validate();
  if (std::abs(geom.c12() - 1.0) > 1e-9) {
    fail(ErrorKind::geometry, "geometry is not solved for C12 = 1 (C12 = " + std::to_string(geom.c12()) + ")");
  }
  AgreementReport report;
  const TimeWindow window = default_window(geom);
  const AsymptoticHamiltonian asym = asymptotic_hamiltonian(geom, window);

  const double g = geom.mean_coupling();
  const double stark = g * g / geom.delta;
  report.d = geom.d;
  report.t_prime = asym.t_prime;
  report.mean_coupling = g;
  report.J = 0.5 * stark;
  report.xy_angle = report.J * report.t_prime;
  report.operational_velocity =
      std::sqrt(std::numbers::pi) * geom.w / (std::numbers::pi / (6.0 * std::abs(report.J)));
  report.C = asym.C;
  report.integral_relative_error = asym.max_relative_error;
  report.leakage_bound = 4.0 * (geom.g0 / geom.delta) * (geom.g0 / geom.delta);

  const XYHamiltonian ring = build_xy(report.J);
  const Matrix u_mean = unitary_from_hermitian(mean_hamiltonian(ring, stark), report.t_prime);
  const Matrix u_xy = frame_correction(stark, report.t_prime) * evolve_triplet(ring, report.t_prime).matrix;

  const Eigen::Matrix3cd u_inf = unitary_from_hermitian(asym.H_inf.cast<Complex>(), asym.t_prime);

  for (int atom = 1; atom <= 3; ++atom) {
    AmplitudeState start{window.start, {}};
    start.c[static_cast<std::size_t>(atom)] = 1.0;
    Vector psi = Vector::Zero(8);
    psi(excitation_index(atom)) = 1.0;

    const Trajectory full = integrate_full(geom, start, window, options);
    const Trajectory eff = integrate_effective(geom, start, window, options);
    const Vector mean = u_mean * psi;
    const Vector xy = u_xy * psi;

    report.full_vs_effective = std::max(report.full_vs_effective, vector_distance(full.final_state().c, eff.final_state().c));
    report.full_vs_mean = std::max(report.full_vs_mean, vector_distance(full.final_state().c, mean));
    report.effective_vs_mean = std::max(report.effective_vs_mean, vector_distance(eff.final_state().c, mean));
    report.mean_vs_xy_corrected = std::max(report.mean_vs_xy_corrected, (mean - xy).norm());
    report.mean_displacement = std::max(report.mean_displacement, (mean - psi).norm());
    const Trajectory dipole = integrate_dipole(geom, start, window, options);
    const Eigen::Vector3cd asymptotic = u_inf.col(atom - 1);
    State asym_state{};
    for (std::size_t k = 1; k <= 3; ++k) asym_state[k] = asymptotic(static_cast<Eigen::Index>(k - 1));
    report.dipole_vs_asymptotic =
        std::max(report.dipole_vs_asymptotic, vector_distance(dipole.final_state().c, asym_state));
    report.asymptotic_displacement =
        std::max(report.asymptotic_displacement, (asymptotic - Eigen::Vector3cd::Unit(atom - 1)).norm());
    report.max_leakage = std::max(report.max_leakage, full.max_leakage);
    report.norm_drift = std::max({report.norm_drift, full.norm_drift, eff.norm_drift});
  }

  constexpr int kSamples = 41;
  std::vector<Eigen::Matrix3d> samples;
  double max_norm = 0.0;
  for (int k = 0; k < kSamples; ++k) {
    const double t = window.start + (window.end - window.start) * k / (kSamples - 1);
    samples.push_back(dipole_matrix(geom, t));
    max_norm = std::max(max_norm, samples.back().norm());
  }
  double max_comm = 0.0;
  for (const auto& a : samples) {
    for (const auto& b : samples) max_comm = std::max(max_comm, (a * b - b * a).norm());
  }
  report.commutator_ratio = max_norm > 0.0 ? max_comm / (max_norm * max_norm) : 0.0;
  return report;
}

std::vector<ConvergencePoint> convergence_study(const CavityGeometry& geom, int doublings,
                                                const IntegratorOptions& options) {
  if (doublings < 1) fail(ErrorKind::domain, "convergence study needs at least one doubling");
  std::vector<ConvergencePoint> points;
  CavityGeometry scaled = geom;
  for (int k = 0; k <= doublings; ++k) {
    const AgreementReport r = xy_agreement(scaled, options);
    ConvergencePoint p{scaled.delta, r.full_vs_mean, 0.0};
    if (!points.empty()) p.order = std::log2(points.back().distance / p.distance);
    points.push_back(p);
    scaled.delta *= 2.0;
  }
  return points;
}

}  // namespace xypurify
