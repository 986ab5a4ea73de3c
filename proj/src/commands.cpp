#include "ebe/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebe/canonical.hpp"
#include "ebe/errors.hpp"
#include "ebe/kernels.hpp"
#include "ebe/matrix_io.hpp"
#include "ebe/stationary.hpp"

namespace ebe {

namespace {

constexpr double kSpectralWarn = 1e-10;
constexpr std::size_t kSpectralCheckMaxDim = 16;

std::string header_comment(const std::string& command, const RunOptions& options) {
  return "# ebe " + command + " seed=" + std::to_string(options.seed) + "\n";
}

// [output] path names the simulate trajectory; other subcommands use fixed names.
std::filesystem::path trajectory_file(const ScenarioConfig& cfg, const RunOptions& options) {
  return options.out_dir / (cfg.output_path.empty() ? "trajectory.csv" : cfg.output_path);
}

// Basis in which populations and coherences are reported: energy eigenbasis
// for the two-level system, the level basis for ladders.
ComplexMatrix reporting_basis(const ScenarioConfig& cfg) {
  if (cfg.system_type == SystemType::TwoLevel) return hermitian_eig(cfg.two_level.hamiltonian()).vectors;
  return ComplexMatrix::identity(cfg.dim());
}

void warn_on_spectrum(const RhsSpec& spec, RunResult& result) {
  if (spec.dim() > kSpectralCheckMaxDim) return;
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& l : general_eigenvalues(build_superoperator(spec)))
    abscissa = std::max(abscissa, l.real());
  if (abscissa > kSpectralWarn)
    result.warnings.push_back("generator has an eigenvalue with positive real part (" +
                              format_double(abscissa) + "); dynamics are not contractive");
}

ComplexMatrix random_density_matrix(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix g(n);
  for (auto& z : g.data()) z = {normal(rng), normal(rng)};
  ComplexMatrix rho = g * g.adjoint();
  rho *= 1.0 / rho.trace().real();
  return rho;
}

ComplexMatrix random_populations(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) sum += (x = uniform(rng) + 1e-3);
  for (auto& x : p) x /= sum;
  return ComplexMatrix::diagonal(p);
}

// Position-weighted sum of all entries.
double fold_checksum(const ComplexMatrix& m) {
  double acc = 0.0;
  const auto d = m.data();
  const double scale = 1.0 / static_cast<double>(d.size());
  for (std::size_t k = 0; k < d.size(); ++k)
    acc += (1.0 + static_cast<double>(k) * scale) * (d[k].real() + 0.5 * d[k].imag());
  return acc;
}

std::string checksum_digest(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9e", x);
  return buf;
}

}  // namespace

RunResult run_simulate(const ScenarioConfig& cfg, const RunOptions& options) {
  RunResult result;
  const RhsSpec spec = make_rhs(cfg);
  const ComplexMatrix rho0 = make_initial_state(cfg);
  warn_on_spectrum(spec, result);
  const auto traj = propagate(spec, rho0, cfg.t_final, cfg.dt, cfg.method, cfg.record_every);
  if (traj.positivity_warning)
    result.warnings.push_back("minimum eigenvalue dropped below -1e-8 along the trajectory");
  if (traj.truncation_warning)
    result.warnings.push_back("top-level population exceeded 1e-6 (ladder truncation leak)");

  const std::size_t n = cfg.dim();
  const ComplexMatrix basis = reporting_basis(cfg);
  const ComplexMatrix basis_adj = basis.adjoint();
  auto pairs = cfg.coherences;
  if (pairs.empty())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  const bool pops = cfg.what == OutputWhat::Populations || cfg.what == OutputWhat::All;
  const bool cohs = cfg.what == OutputWhat::Coherences || cfg.what == OutputWhat::All;
  const bool diag = cfg.what == OutputWhat::Diagnostics || cfg.what == OutputWhat::All;

  std::string csv = header_comment("simulate", options);
  CsvRow head;
  head << "t";
  if (pops)
    for (std::size_t i = 0; i < n; ++i) head << ("p_" + std::to_string(i));
  if (cohs)
    for (auto [i, j] : pairs) head << ("abs_rho_" + std::to_string(i) + "_" + std::to_string(j));
  if (diag) head << "trace_dev" << "herm_dev" << "min_eig" << "top_pop";
  csv += head.str();

  for (std::size_t k = 0; k < traj.size(); ++k) {
    const ComplexMatrix rho = basis_adj * traj.states[k] * basis;
    const auto& d = traj.diagnostics[k];
    CsvRow row;
    row << traj.times[k];
    if (pops)
      for (std::size_t i = 0; i < n; ++i) row << rho(i, i).real();
    if (cohs)
      for (auto [i, j] : pairs) row << std::abs(rho(i, j));
    if (diag)
      row << d.trace_deviation << d.hermiticity_deviation << d.min_eigenvalue << d.top_population;
    csv += row.str();
  }
  const auto path = trajectory_file(cfg, options);
  write_file_atomic(path, csv);
  result.files.push_back(path);
  return result;
}

RunResult run_fixed_point(const ScenarioConfig& cfg, const RunOptions& options) {
  RunResult result;
  const RhsSpec spec = make_rhs(cfg);
  warn_on_spectrum(spec, result);
  const auto bath_T = cfg.bath_temperature();
  const auto report = fixed_point(spec, bath_T);
  if (report.multiplicity > 1)
    result.warnings.push_back("stationary state is not unique (null-space multiplicity " +
                              std::to_string(report.multiplicity) + ")");

  const std::size_t n = cfg.dim();
  const ComplexMatrix basis = reporting_basis(cfg);
  const ComplexMatrix rho = basis.adjoint() * report.rho_stationary * basis;

  std::string csv = header_comment("fixed-point", options);
  CsvRow head;
  head << "residual" << "gibbs_distance" << "spectral_gap" << "null_eigenvalue" << "multiplicity"
       << "commutator_norm" << "bath_T";
  for (std::size_t i = 0; i < n; ++i) head << ("p_" + std::to_string(i));
  csv += head.str();
  CsvRow row;
  row << report.residual << report.gibbs_distance << report.spectral_gap << report.null_eigenvalue
      << report.multiplicity << report.commutator_norm
      << bath_T.value_or(std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < n; ++i) row << rho(i, i).real();
  csv += row.str();

  const auto path = options.out_dir / "fixed_point.csv";
  write_file_atomic(path, csv);
  std::ostringstream state;
  write_matrix(state, report.rho_stationary);
  const auto state_path = options.out_dir / "stationary_state.txt";
  write_file_atomic(state_path, state.str());
  result.files = {path, state_path};
  return result;
}

RunResult run_verify_algebra(const ScenarioConfig& cfg, const RunOptions& options) {
  struct Draw {
    TwoLevelSystem sys;
    ComplexMatrix rho{2};
  };
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<Draw> draws(cfg.verify_draws);
  for (auto& d : draws) {
    d.sys.E = std::pow(10.0, 2.0 * uniform(rng) - 1.0);
    std::array<double, 3> v{};
    double norm = 0.0;
    do {
      for (auto& x : v) x = normal(rng);
      norm = std::hypot(v[0], v[1], v[2]);
    } while (norm < 1e-8);
    for (auto& x : v) x /= norm;
    d.sys.eps = v;
    d.sys.gamma_p = 2.0 * uniform(rng);
    d.sys.gamma_m = 2.0 * uniform(rng) + 1e-3;
    d.rho = random_density_matrix(2, rng);
  }

  std::vector<AlgebraReport> reports(draws.size());
  std::vector<double> equivalence(draws.size());
  const auto count = static_cast<std::ptrdiff_t>(draws.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto& d = draws[k];
    const ComplexMatrix h = d.sys.hamiltonian();
    reports[k] = verify_jump_algebra(jump_operators(h), h, d.sys.E);
    const auto jumps = canonical_jumps(d.sys);
    const ComplexMatrix diff = ebe_two_level(d.rho, d.sys) - gkls_dissipator(d.rho, jumps);
    equivalence[k] = diff.norm() / (d.sys.gamma_p + d.sys.gamma_m);
  }

  std::string csv = header_comment("verify-algebra", options);
  csv += "draw,E,eps_x,eps_y,eps_z,sigma_p_sq,sigma_m_sq,commutator,anticommutator,triple_p,"
         "triple_m,eigenoperator,ebe_gkls,max_residual,pass\n";
  double worst = 0.0;
  for (std::size_t k = 0; k < draws.size(); ++k) {
    const auto& r = reports[k];
    const auto& s = draws[k].sys;
    const double max_res = std::max(r.max_residual(), equivalence[k]);
    worst = std::max(worst, max_res);
    CsvRow row;
    row << k << s.E << s.eps[0] << s.eps[1] << s.eps[2] << r.sigma_p_squared << r.sigma_m_squared
        << r.commutator << r.anticommutator << r.triple_p << r.triple_m << r.eigenoperator
        << equivalence[k] << max_res << (max_res <= tol::kAlgebra);
    csv += row.str();
  }
  const auto path = options.out_dir / "verify_algebra.csv";
  write_file_atomic(path, csv);

  RunResult result;
  result.files.push_back(path);
  if (worst > tol::kAlgebra) {
    result.exit_code = 2;
    result.warnings.push_back("max residual " + format_double(worst) + " exceeds 1e-12");
  }
  return result;
}

RunResult run_canonical(const ScenarioConfig& cfg, const RunOptions& options) {
  require(cfg.system_type != SystemType::TwoLevel,
          "canonical: needs an [oscillator] (or nearest-neighbour [explicit]) system");
  require(cfg.bath.has_value(), "canonical: needs a bath temperature (bath_T)");
  require(cfg.canonical_T0 > 0.0, "canonical: [canonical] T0 is required");

  CanonicalOptions opts;
  opts.t_final = cfg.t_final;
  opts.dt = cfg.dt;
  opts.method = cfg.method;
  opts.record_every = cfg.record_every;
  opts.edge_margin = cfg.edge_margin;
  const auto diag = canonical_experiment(cfg.ladder, *cfg.bath, cfg.canonical_T0, opts);

  const std::size_t entries = cfg.ladder.levels() - 1;
  std::string csv = header_comment("canonical", options);
  CsvRow head;
  head << "t" << "mean_ln_ratio" << "a" << "delta" << "max_nonuniformity" << "ln_a_ode"
       << "top_pop" << "clean";
  for (std::size_t i = 0; i < entries; ++i) head << ("r_" + std::to_string(i));
  csv += head.str();
  for (std::size_t k = 0; k < diag.times.size(); ++k) {
    CsvRow row;
    row << diag.times[k] << diag.mean_ratio[k] << diag.a_series[k] << diag.delta_series[k]
        << diag.max_nonuniformity[k] << diag.ln_a_ode[k] << diag.top_population[k]
        << static_cast<bool>(diag.clean[k]);
    for (const auto& r : diag.ratio_profiles[k])
      row << r.value_or(std::numeric_limits<double>::quiet_NaN());
    csv += row.str();
  }
  const auto path = options.out_dir / "canonical.csv";
  write_file_atomic(path, csv);

  RunResult result;
  result.files.push_back(path);
  const auto check = invariance_condition(cfg.couplings.empty() ? std::vector<double>{} : cfg.couplings);
  result.notes.push_back("max clean non-uniformity " + format_double(diag.max_clean_nonuniformity) +
                            ", max |ln a_ode - ln a| " + format_double(diag.max_ode_deviation) +
                            ", invariance condition " + (check.holds ? "holds" : "fails"));
  return result;
}

RunResult run_bench(const ScenarioConfig& cfg, const RunOptions& options) {
  ScenarioConfig ebe_cfg = cfg, gkls_cfg = cfg;
  ebe_cfg.kind = cfg.system_type == SystemType::TwoLevel ? DissipatorKind::EBE2 : DissipatorKind::EBEN;
  gkls_cfg.kind = DissipatorKind::GKLS;
  ebe_cfg.unitary = gkls_cfg.unitary = false;
  ebe_cfg.Gamma_pd = gkls_cfg.Gamma_pd = 0.0;
  ebe_cfg.two_level.Gamma_pd = gkls_cfg.two_level.Gamma_pd = 0.0;
  const RhsSpec ebe_spec = make_rhs(ebe_cfg);
  const RhsSpec gkls_spec = make_rhs(gkls_cfg);

  const std::size_t n = cfg.dim();
  std::mt19937_64 rng(options.seed);
  std::vector<ComplexMatrix> pool;
  pool.reserve(cfg.bench_pool);
  for (std::size_t k = 0; k < cfg.bench_pool; ++k)
    pool.push_back(cfg.system_type == SystemType::TwoLevel ? random_density_matrix(n, rng)
                                                           : random_populations(n, rng));

  struct Timing {
    double ns_per_apply;
    double checksum;
  };
  auto measure = [&](const RhsSpec& spec) {
    ComplexMatrix out(n);
    double checksum = 0.0;
    for (std::size_t k = 0; k < cfg.bench_applications; ++k) {
      master_rhs_into(pool[k % pool.size()], spec, out);
      checksum += fold_checksum(out);
    }
    std::vector<double> samples;
    double sink = 0.0;
    for (std::size_t rep = 0; rep < cfg.bench_repeats; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      for (std::size_t k = 0; k < cfg.bench_applications; ++k) {
        master_rhs_into(pool[k % pool.size()], spec, out);
        sink += out(0, 0).real();
      }
      const auto stop = std::chrono::steady_clock::now();
      samples.push_back(std::chrono::duration<double, std::nano>(stop - start).count() /
                        static_cast<double>(cfg.bench_applications));
    }
    std::nth_element(samples.begin(), samples.begin() + samples.size() / 2, samples.end());
    volatile double keep = sink;
    (void)keep;
    return Timing{samples[samples.size() / 2], checksum};
  };

  double max_diff = 0.0;
  for (const auto& rho : pool) {
    ComplexMatrix a(n), b(n);
    master_rhs_into(rho, ebe_spec, a);
    master_rhs_into(rho, gkls_spec, b);
    max_diff = std::max(max_diff, (a - b).max_abs());
  }

  const Timing ebe = measure(ebe_spec);
  const Timing gkls = measure(gkls_spec);
  const std::string ebe_digest = checksum_digest(ebe.checksum);
  const std::string gkls_digest = checksum_digest(gkls.checksum);
  const bool match = ebe_digest == gkls_digest;
  const std::size_t transitions =
      cfg.system_type == SystemType::TwoLevel ? 1 : cfg.ladder.transitions.size();

  std::string csv = header_comment("bench", options);
  csv += "kernel,dim,transitions,applications,ns_per_apply,ratio_ebe_over_gkls,checksum,"
         "checksum_match,max_abs_diff\n";
  const double ratio = ebe.ns_per_apply / gkls.ns_per_apply;
  for (const auto& [name, t, digest] :
       {std::tuple{"ebe", ebe, ebe_digest}, std::tuple{"gkls", gkls, gkls_digest}}) {
    CsvRow row;
    row << name << n << transitions << cfg.bench_applications << t.ns_per_apply << ratio << digest
        << match << max_diff;
    csv += row.str();
  }
  const auto path = options.out_dir / "bench.csv";
  write_file_atomic(path, csv);

  RunResult result;
  result.files.push_back(path);
  if (!match) {
    result.exit_code = 2;
    result.warnings.push_back("EBE and GKLS checksums differ: " + ebe_digest + " vs " + gkls_digest);
  }
  return result;
}

RunResult run(const std::string& subcommand, const ScenarioConfig& cfg, const RunOptions& options) {
  if (subcommand == "simulate") return run_simulate(cfg, options);
  if (subcommand == "fixed-point") return run_fixed_point(cfg, options);
  if (subcommand == "verify-algebra") return run_verify_algebra(cfg, options);
  if (subcommand == "canonical") return run_canonical(cfg, options);
  if (subcommand == "bench") return run_bench(cfg, options);
  throw ValidationError("unknown subcommand '" + subcommand + "'");
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto error_record = [&](const char* kind, int code, const std::vector<std::string>& messages) {
    nlohmann::json record = {{"status", "error"}, {"kind", kind}, {"exit_code", code},
                             {"errors", messages}};
    err << record.dump() << "\n";
    return code;
  };

  CLI::App app{"Elemental Bloch equation toolkit"};
  std::string subcommand;
  std::string config_path;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = ".";
  app.add_option("subcommand", subcommand, "simulate | fixed-point | verify-algebra | canonical | bench")
      ->required()
      ->check(CLI::IsMember({"simulate", "fixed-point", "verify-algebra", "canonical", "bench"}));
  app.add_option("--config", config_path, "scenario file")->required();
  app.add_option("--seed", seed, "seed for random draws");
  app.add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    return error_record("usage", 1, {e.what()});
  }

  try {
    const ScenarioConfig cfg = load_config(config_path);
    std::filesystem::create_directories(out_dir);
    const RunResult result = run(subcommand, cfg, RunOptions{seed, out_dir});
    for (const auto& w : result.warnings) err << "warning: " << w << "\n";
    for (const auto& f : result.files) out << f.string() << "\n";
    for (const auto& note : result.notes) out << note << "\n";
    if (result.exit_code != 0) return error_record("numerical", result.exit_code, result.warnings);
    return 0;
  } catch (const ConfigErrors& e) {
    return error_record("validation", 1, e.errors());
  } catch (const ValidationError& e) {
    return error_record("validation", 1, {e.what()});
  } catch (const NumericalError& e) {
    return error_record("numerical", 2, {e.what()});
  } catch (const std::exception& e) {
    return error_record("numerical", 2, {e.what()});
  }
}

}  // namespace ebe
