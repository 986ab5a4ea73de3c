#include "ebe/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ebe/errors.hpp"
#include "ebe/matrix_io.hpp"
#include "ebe/stationary.hpp"

namespace ebe {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char delim) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(delim, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view s) {
  const std::string t = trim(s);
  const char* first = t.data();
  const char* last = first + t.size();
  if (first != last && *first == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || t.empty()) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_index(std::string_view s) {
  const std::string t = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) return std::nullopt;
  return v;
}

// Reads one section, remembering which keys were consumed and collecting errors.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree, std::vector<std::string>& errors)
      : name_(std::move(name)), tree_(tree), errors_(errors) {}

  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::optional<std::string> raw(const std::string& key) const {
    if (!tree_) return std::nullopt;
    used_.insert(key);
    auto v = tree_->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  std::optional<double> number(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    auto v = to_double(*s);
    if (!v || !std::isfinite(*v)) {
      error(key, "expected a finite number, got '" + *s + "'");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::size_t> index(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    auto v = to_index(*s);
    if (!v) error(key, "expected a non-negative integer, got '" + *s + "'");
    return v;
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    std::vector<double> out;
    for (const auto& part : split(*s, ',')) {
      auto v = to_double(part);
      if (!v || !std::isfinite(*v)) {
        error(key, "expected a comma-separated list of numbers, got '" + *s + "'");
        return std::nullopt;
      }
      out.push_back(*v);
    }
    return out;
  }

  std::optional<bool> flag(const std::string& key) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "yes" || *s == "1") return true;
    if (*s == "false" || *s == "no" || *s == "0") return false;
    error(key, "expected true or false, got '" + *s + "'");
    return std::nullopt;
  }

  template <class T>
  std::optional<T> choice(const std::string& key, const std::map<std::string, T>& options) {
    auto s = raw(key);
    if (!s) return std::nullopt;
    auto it = options.find(*s);
    if (it != options.end()) return it->second;
    std::string names;
    for (const auto& [name, _] : options) names += (names.empty() ? "" : "|") + name;
    error(key, "expected one of " + names + ", got '" + *s + "'");
    return std::nullopt;
  }

  void error(const std::string& key, const std::string& message) {
    errors_.push_back("[" + name_ + "] " + key + ": " + message);
  }

  void report_unknown() {
    if (!tree_) return;
    for (const auto& [key, _] : *tree_)
      if (!used_.count(key)) errors_.push_back("[" + name_ + "] unknown key '" + key + "'");
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::vector<std::string>& errors_;
  mutable std::set<std::string> used_;
};

std::optional<std::pair<std::size_t, std::size_t>> parse_pair(const std::string& s) {
  const auto parts = split(s, '-');
  if (parts.size() != 2) return std::nullopt;
  auto a = to_index(parts[0]), b = to_index(parts[1]);
  if (!a || !b) return std::nullopt;
  return std::make_pair(*a, *b);
}

void read_two_level(Section& sec, ScenarioConfig& cfg, std::vector<std::string>& errors) {
  auto& sys = cfg.two_level;
  if (auto e = sec.number("E")) sys.E = *e;
  else if (!sec.has("E")) sec.error("E", "required");
  if (sys.E <= 0.0) sec.error("E", "must be > 0");

  if (auto eps = sec.numbers("eps")) {
    if (eps->size() != 3) {
      sec.error("eps", "expected three components eps_x, eps_y, eps_z");
    } else {
      sys.eps = {(*eps)[0], (*eps)[1], (*eps)[2]};
      const double n = std::hypot(sys.eps[0], sys.eps[1], sys.eps[2]);
      if (std::abs(n - 1.0) > 1e-9)
        sec.error("eps", "must be a unit vector, |eps| = 1 within 1e-9 (got |eps| = " +
                             format_double(n) + ")");
    }
  }

  const auto gp = sec.number("gamma_p"), gm = sec.number("gamma_m");
  const auto gamma = sec.number("gamma"), bath_T = sec.number("bath_T");
  if (gamma) {
    if (gp || gm) sec.error("gamma", "give either gamma_p/gamma_m or gamma with bath_T, not both");
    if (!bath_T) sec.error("gamma", "needs bath_T to derive gamma_p and gamma_m");
  } else if (!gp || !gm) {
    sec.error("gamma_p", "rates required: gamma_p and gamma_m, or gamma with bath_T");
  }
  if (bath_T && *bath_T <= 0.0) sec.error("bath_T", "must be > 0");
  if (gamma && *gamma < 0.0) sec.error("gamma", "must be >= 0");
  if (gp && *gp < 0.0) sec.error("gamma_p", "must be >= 0");
  if (gm && *gm < 0.0) sec.error("gamma_m", "must be >= 0");

  if (bath_T && *bath_T > 0.0) cfg.bath = BathModel{gamma.value_or(0.0), *bath_T};
  if (gamma && bath_T && *bath_T > 0.0 && *gamma >= 0.0 && sys.E > 0.0) {
    const auto rates = rates_from_bath(*cfg.bath, sys.E);
    sys.gamma_p = rates.gamma_p;
    sys.gamma_m = rates.gamma_m;
  } else {
    sys.gamma_p = gp.value_or(0.0);
    sys.gamma_m = gm.value_or(0.0);
  }
  if (auto g = sec.number("Gamma_pd")) {
    if (*g < 0.0) sec.error("Gamma_pd", "must be >= 0 (it is a dephasing rate)");
    sys.Gamma_pd = *g;
  }
  cfg.Gamma_pd = sys.Gamma_pd;
  (void)errors;
}

void read_oscillator(Section& sec, ScenarioConfig& cfg, std::vector<std::string>& errors) {
  const auto n = sec.index("N");
  const auto spacing = sec.number("spacing");
  const auto rule = sec.choice<CouplingKind>(
      "coupling_rule", {{"harmonic", CouplingKind::Harmonic},
                        {"constant", CouplingKind::Constant},
                        {"table", CouplingKind::Table}});
  const auto gamma = sec.number("gamma");
  const auto table = sec.numbers("couplings");
  const auto bath_T = sec.number("bath_T");

  bool ok = true;
  if (!n || *n < 2) sec.error("N", "required, >= 2"), ok = false;
  if (!spacing || *spacing <= 0.0) sec.error("spacing", "required, > 0"), ok = false;
  if (!bath_T || *bath_T <= 0.0) sec.error("bath_T", "required, > 0"), ok = false;
  const CouplingKind kind = rule.value_or(CouplingKind::Harmonic);
  if (kind == CouplingKind::Table) {
    if (!table) sec.error("couplings", "required for coupling_rule = table"), ok = false;
    else if (n && table->size() != *n - 1)
      sec.error("couplings", "needs N-1 = " + std::to_string(*n - 1) + " entries"), ok = false;
  } else if (!gamma || *gamma < 0.0) {
    sec.error("gamma", "required, >= 0"), ok = false;
  }
  if (auto g = sec.number("Gamma_pd")) {
    if (*g < 0.0) sec.error("Gamma_pd", "must be >= 0 (it is a dephasing rate)"), ok = false;
    cfg.Gamma_pd = *g;
  }
  if (!ok) return;

  cfg.levels = *n;
  cfg.spacing = *spacing;
  cfg.coupling = kind == CouplingKind::Table ? CouplingRule::from_table(*table)
                 : kind == CouplingKind::Harmonic ? CouplingRule::harmonic(*gamma)
                                                  : CouplingRule::constant(*gamma);
  cfg.bath = BathModel{gamma.value_or(1.0), *bath_T};
  try {
    cfg.couplings = cfg.coupling.materialize(*n - 1);
    cfg.ladder = build_oscillator(*n, *spacing, cfg.coupling, *cfg.bath);
  } catch (const ValidationError& e) {
    errors.push_back(std::string("[oscillator] ") + e.what());
  }
}

void read_explicit(Section& sec, ScenarioConfig& cfg, std::vector<std::string>& errors) {
  const auto energies = sec.numbers("energies");
  const auto spec = sec.raw("transitions");
  if (!energies || energies->size() < 2) sec.error("energies", "required, at least two levels");
  if (!spec) sec.error("transitions", "required, e.g. 0-1:0.1:0.3, 1-2:0.05:0.2");
  if (auto T = sec.number("bath_T")) {
    if (*T <= 0.0) sec.error("bath_T", "must be > 0");
    else cfg.bath = BathModel{0.0, *T};
  }
  if (auto g = sec.number("Gamma_pd")) {
    if (*g < 0.0) sec.error("Gamma_pd", "must be >= 0 (it is a dephasing rate)");
    cfg.Gamma_pd = *g;
  }
  if (!energies || !spec || energies->size() < 2) return;

  std::vector<TransitionSpec> transitions;
  bool ok = true;
  for (const auto& item : split(*spec, ',')) {
    const auto fields = split(item, ':');
    auto pair = fields.size() == 3 ? parse_pair(fields[0]) : std::nullopt;
    auto gp = fields.size() == 3 ? to_double(fields[1]) : std::nullopt;
    auto gm = fields.size() == 3 ? to_double(fields[2]) : std::nullopt;
    if (!pair || !gp || !gm) {
      sec.error("transitions", "entry '" + item + "' is not i-j:gamma_p:gamma_m");
      ok = false;
      continue;
    }
    transitions.push_back({pair->first, pair->second, *gp, *gm, 0.0});
  }
  if (!ok) return;
  try {
    cfg.ladder = make_ladder(*energies, std::move(transitions));
  } catch (const ValidationError& e) {
    errors.push_back(std::string("[explicit] ") + e.what());
  }
}

}  // namespace

std::optional<double> ScenarioConfig::bath_temperature() const {
  if (bath) return bath->T;
  if (system_type == SystemType::TwoLevel) return detailed_balance_temperature(two_level);
  return std::nullopt;
}

ScenarioConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  {
    std::istringstream in{std::string(text)};
    try {
      pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ValidationError("config syntax error at line " + std::to_string(e.line()) + ": " +
                            e.message());
    }
  }

  std::vector<std::string> errors;
  auto section = [&](const std::string& name) {
    auto child = tree.get_child_optional(pt::ptree::path_type(name, '\0'));
    return Section(name, child ? &*child : nullptr, errors);
  };

  static const std::set<std::string> known = {"two_level", "oscillator", "explicit",  "dissipator",
                                              "initial",   "integration", "output",   "verify",
                                              "bench",     "canonical"};
  for (const auto& [name, child] : tree) {
    if (!known.count(name))
      errors.push_back("unknown section [" + name + "]");
    else if (child.empty() && !child.data().empty())
      errors.push_back("'" + name + "' must be a section, not a key");
  }

  ScenarioConfig cfg;
  Section two = section("two_level"), osc = section("oscillator"), expl = section("explicit");
  const int blocks = int(two.present()) + int(osc.present()) + int(expl.present());
  if (blocks != 1) {
    errors.push_back("exactly one system block required: [two_level], [oscillator] or [explicit] (found " +
                     std::to_string(blocks) + ")");
  }
  if (two.present()) {
    cfg.system_type = SystemType::TwoLevel;
    read_two_level(two, cfg, errors);
  } else if (osc.present()) {
    cfg.system_type = SystemType::Oscillator;
    read_oscillator(osc, cfg, errors);
  } else if (expl.present()) {
    cfg.system_type = SystemType::Explicit;
    read_explicit(expl, cfg, errors);
  }
  const bool is_two_level = cfg.system_type == SystemType::TwoLevel;

  Section dis = section("dissipator");
  const auto kind = dis.choice<std::string>(
      "kind", {{"ebe", "ebe"}, {"ebe2", "ebe2"}, {"eben", "eben"}, {"gkls", "gkls"}});
  const std::string k = kind.value_or("ebe");
  if (k == "gkls") cfg.kind = DissipatorKind::GKLS;
  else if (k == "ebe") cfg.kind = is_two_level ? DissipatorKind::EBE2 : DissipatorKind::EBEN;
  else if (k == "ebe2") {
    cfg.kind = DissipatorKind::EBE2;
    if (!is_two_level) dis.error("kind", "ebe2 requires a [two_level] system");
  } else {
    cfg.kind = DissipatorKind::EBEN;
    if (is_two_level) dis.error("kind", "eben requires an [oscillator] or [explicit] system");
  }
  if (auto u = dis.flag("unitary")) cfg.unitary = *u;

  Section init = section("initial");
  const auto init_kind = init.choice<InitialKind>(
      "type", {{"gibbs", InitialKind::Gibbs}, {"level", InitialKind::Level},
               {"matrix", InitialKind::Matrix}});
  cfg.initial = init_kind.value_or(InitialKind::Level);
  if (cfg.initial == InitialKind::Gibbs) {
    if (auto T = init.number("T")) {
      if (*T <= 0.0) init.error("T", "must be > 0");
      cfg.initial_T = *T;
    } else if (auto bt = cfg.bath_temperature()) {
      cfg.initial_T = *bt;
    } else {
      init.error("T", "required: no bath temperature to default to");
    }
  } else if (cfg.initial == InitialKind::Level) {
    cfg.initial_level = init.index("index").value_or(0);
    if (blocks == 1 && cfg.initial_level >= cfg.dim())
      init.error("index", "level index out of range");
  } else {
    if (auto f = init.raw("file")) {
      cfg.initial_file = base_dir / *f;
      if (!std::filesystem::exists(cfg.initial_file))
        init.error("file", "matrix file '" + cfg.initial_file.string() + "' does not exist");
    } else {
      init.error("file", "required for type = matrix");
    }
  }

  Section integ = section("integration");
  if (auto v = integ.number("t_final")) {
    if (*v < 0.0) integ.error("t_final", "must be >= 0");
    cfg.t_final = *v;
  }
  if (auto v = integ.number("dt")) {
    if (*v <= 0.0) integ.error("dt", "must be > 0");
    cfg.dt = *v;
  }
  if (auto m = integ.choice<Method>("method", {{"expm", Method::Expm}, {"rk4", Method::RK4}}))
    cfg.method = *m;
  if (auto r = integ.index("record_every")) {
    if (*r == 0) integ.error("record_every", "must be >= 1");
    cfg.record_every = *r;
  }

  Section out = section("output");
  if (auto p = out.raw("path")) cfg.output_path = *p;
  if (auto w = out.choice<OutputWhat>(
          "what", {{"populations", OutputWhat::Populations},
                   {"coherences", OutputWhat::Coherences},
                   {"diagnostics", OutputWhat::Diagnostics},
                   {"all", OutputWhat::All}}))
    cfg.what = *w;
  if (auto c = out.raw("coherences")) {
    for (const auto& item : split(*c, ',')) {
      auto pair = parse_pair(item);
      if (!pair) {
        out.error("coherences", "entry '" + item + "' is not i-j");
        continue;
      }
      if (blocks == 1 && (pair->first >= cfg.dim() || pair->second >= cfg.dim()))
        out.error("coherences", "pair '" + item + "' out of range");
      cfg.coherences.push_back(*pair);
    }
  }

  Section ver = section("verify");
  if (auto d = ver.index("draws")) {
    if (*d == 0) ver.error("draws", "must be >= 1");
    cfg.verify_draws = *d;
  }

  Section bench = section("bench");
  if (auto a = bench.index("applications")) {
    if (*a == 0) bench.error("applications", "must be >= 1");
    cfg.bench_applications = *a;
  }
  if (auto r = bench.index("repeats")) {
    if (*r == 0) bench.error("repeats", "must be >= 1");
    cfg.bench_repeats = *r;
  }
  if (auto p = bench.index("pool")) {
    if (*p == 0) bench.error("pool", "must be >= 1");
    cfg.bench_pool = *p;
  }

  Section can = section("canonical");
  if (auto T0 = can.number("T0")) {
    if (*T0 <= 0.0) can.error("T0", "must be > 0");
    cfg.canonical_T0 = *T0;
  }
  if (auto m = can.index("edge_margin")) cfg.edge_margin = *m;

  for (Section* s : {&two, &osc, &expl, &dis, &init, &integ, &out, &ver, &bench, &can})
    s->report_unknown();

  if (errors.empty() && is_two_level) {
    try {
      cfg.two_level.validate();
    } catch (const ValidationError& e) {
      errors.push_back(std::string("[two_level] ") + e.what());
    }
  }
  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

RhsSpec make_rhs(const ScenarioConfig& cfg) {
  RhsSpec spec = [&] {
    if (cfg.system_type == SystemType::TwoLevel) {
      return cfg.kind == DissipatorKind::GKLS ? RhsSpec::gkls_two_level(cfg.two_level)
                                              : RhsSpec::ebe2(cfg.two_level);
    }
    if (cfg.kind == DissipatorKind::GKLS)
      return RhsSpec::gkls(cfg.ladder.hamiltonian(), pairwise_jumps(cfg.ladder), cfg.Gamma_pd);
    return RhsSpec::eben(cfg.ladder, cfg.Gamma_pd);
  }();
  spec.include_unitary = cfg.unitary;
  spec.validate();
  return spec;
}

ComplexMatrix make_initial_state(const ScenarioConfig& cfg) {
  const ComplexMatrix h = cfg.system_type == SystemType::TwoLevel ? cfg.two_level.hamiltonian()
                                                                   : cfg.ladder.hamiltonian();
  switch (cfg.initial) {
    case InitialKind::Gibbs:
      return gibbs_state(h, cfg.initial_T);
    case InitialKind::Level: {
      const std::size_t n = h.dim();
      require(cfg.initial_level < n, "initial level index out of range");
      ComplexMatrix rho(n);
      if (cfg.system_type == SystemType::TwoLevel) {
        // Level k is the k-th eigenstate of H in ascending energy.
        const auto eig = hermitian_eig(h);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            rho(r, c) = eig.vectors(r, cfg.initial_level) *
                        std::conj(eig.vectors(c, cfg.initial_level));
      } else {
        rho(cfg.initial_level, cfg.initial_level) = 1.0;
      }
      return rho;
    }
    case InitialKind::Matrix: {
      ComplexMatrix rho = read_matrix_file(cfg.initial_file);
      require(rho.dim() == h.dim(), "initial matrix dimension does not match the system");
      return rho;
    }
  }
  throw ValidationError("unknown initial state kind");
}

}  // namespace ebe
