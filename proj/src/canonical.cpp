#include "ebe/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ebe/errors.hpp"
#include "ebe/stationary.hpp"

namespace ebe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_nearest_neighbour(const LadderSystem& sys, const BathModel& bath) {
  sys.validate();
  const std::size_t n = sys.levels();
  require(sys.transitions.size() == n - 1,
          "canonical_experiment: ladder needs exactly one transition per adjacent level pair");
  const double spacing = sys.transitions.front().E_t;
  const double f = fermi(spacing, bath.T), fc = fermi(-spacing, bath.T);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& t = sys.transitions[k];
    require(t.i == k && t.j == k + 1,
            "canonical_experiment: transitions must link consecutive levels in order");
    require(std::abs(t.E_t - spacing) <= 1e-12 * spacing,
            "canonical_experiment: levels must be equally spaced");
    const double g = t.gamma_p + t.gamma_m;
    require(g > 0.0, "canonical_experiment: every transition needs a positive coupling");
    require(std::abs(t.gamma_p - g * f) <= 1e-12 * g && std::abs(t.gamma_m - g * fc) <= 1e-12 * g,
            "canonical_experiment: rates must follow the bath's Fermi factors");
  }
}

}  // namespace

std::vector<std::optional<double>> ratio_profile(std::span<const double> p) {
  require(p.size() >= 2, "ratio_profile: need at least two populations");
  double sum = 0.0;
  for (double x : p) {
    require(std::isfinite(x) && x >= -1e-12, "ratio_profile: populations must be >= 0");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "ratio_profile: populations must sum to 1");
  std::vector<std::optional<double>> r(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (p[i] >= kPopulationFloor && p[i + 1] >= kPopulationFloor) r[i] = std::log(p[i + 1] / p[i]);
  return r;
}

double delta_parameter(double a, const BathModel& bath, double E) {
  require(a > 0.0 && std::isfinite(a), "delta_parameter: a must be > 0");
  bath.validate();
  return std::log(a * fermi(-E, bath.T) / fermi(E, bath.T));
}

InvarianceCheck invariance_condition(std::span<const double> gammas) {
  InvarianceCheck check;
  if (gammas.size() < 2) return check;
  const double g0 = gammas[0];
  check.defect.resize(gammas.size() - 1);
  check.holds = g0 > 0.0;
  for (std::size_t i = 0; i + 1 < gammas.size(); ++i) {
    check.defect[i] = gammas[i + 1] - gammas[i] - g0;
    if (std::abs(check.defect[i]) > 1e-12 * std::abs(g0)) check.holds = false;
  }
  return check;
}

double thermalization_ode_rhs(double a, const BathModel& bath, double E, double gamma0) {
  require(a > 0.0 && std::isfinite(a), "thermalization_ode_rhs: a must be > 0");
  require(gamma0 > 0.0, "thermalization_ode_rhs: gamma0 must be > 0");
  const double f = fermi(E, bath.T);
  const double fc = fermi(-E, bath.T);
  return gamma0 * (a * fc + f / a - 1.0);
}

double lambda_ode_rhs(double lambda, const TwoLevelSystem& sys) {
  return -(sys.gamma_p + sys.gamma_m) * lambda + (sys.gamma_p - sys.gamma_m);
}

double lambda_solution(double lambda0, double t, const TwoLevelSystem& sys) {
  const double s = sys.gamma_p + sys.gamma_m;
  if (s == 0.0) return lambda0;
  const double fixed = (sys.gamma_p - sys.gamma_m) / s;
  return fixed + (lambda0 - fixed) * std::exp(-s * t);
}

double lambda_from_state(const ComplexMatrix& rho, const TwoLevelSystem& sys) {
  return 2.0 * (rho * sys.hamiltonian()).trace().real() / sys.E;
}

CanonicalDiagnostics canonical_experiment(const LadderSystem& sys, const BathModel& bath,
                                          double T0, const CanonicalOptions& options) {
  require(T0 > 0.0 && std::isfinite(T0), "canonical_experiment: T0 must be > 0");
  bath.validate();
  check_nearest_neighbour(sys, bath);

  const std::size_t n = sys.levels();
  const std::size_t margin = options.edge_margin.value_or(n / 2);
  require(margin < n - 1, "canonical_experiment: edge_margin leaves no ratio entries");
  const double spacing = sys.transitions.front().E_t;
  const double gamma0 = sys.transitions.front().gamma_p + sys.transitions.front().gamma_m;

  const RhsSpec spec = RhsSpec::eben(sys);
  const auto traj = propagate(spec, gibbs_state(spec.hamiltonian, T0), options.t_final,
                              options.dt, options.method, options.record_every);

  CanonicalDiagnostics out;
  out.clean_entries = n - 1 - margin;
  out.times = traj.times;

  // ln a from the one-variable equation, RK4 on the propagation grid.
  auto ode = [&](double y) { return thermalization_ode_rhs(std::exp(y), bath, spacing, gamma0); };
  double y = -spacing / T0;
  double t_ode = 0.0;

  for (std::size_t k = 0; k < traj.size(); ++k) {
    while (t_ode < traj.times[k] - 1e-12) {
      const double h = std::min(options.dt, traj.times[k] - t_ode);
      const double k1 = ode(y), k2 = ode(y + 0.5 * h * k1), k3 = ode(y + 0.5 * h * k2),
                   k4 = ode(y + h * k3);
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t_ode += h;
    }

    const auto populations = traj.states[k].real_diagonal();
    auto profile = ratio_profile(populations);

    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < out.clean_entries; ++i)
      if (profile[i]) {
        sum += *profile[i];
        ++count;
      }
    const double mean = count ? sum / static_cast<double>(count) : kNaN;
    double spread = 0.0;
    for (std::size_t i = 0; i < out.clean_entries; ++i)
      if (profile[i]) spread = std::max(spread, std::abs(*profile[i] - mean));

    const double top = traj.diagnostics[k].top_population;
    const bool clean = top < kTruncationLeak && count > 0;

    out.ratio_profiles.push_back(std::move(profile));
    out.mean_ratio.push_back(mean);
    out.max_nonuniformity.push_back(count ? spread : kNaN);
    out.a_series.push_back(std::exp(mean));
    out.delta_series.push_back(count ? delta_parameter(std::exp(mean), bath, spacing) : kNaN);
    out.ln_a_ode.push_back(y);
    out.top_population.push_back(top);
    out.clean.push_back(clean);
    if (clean) {
      out.max_ode_deviation = std::max(out.max_ode_deviation, std::abs(y - mean));
      out.max_clean_nonuniformity = std::max(out.max_clean_nonuniformity, spread);
    }
  }
  return out;
}

}  // namespace ebe
