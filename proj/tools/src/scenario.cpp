#include "reicqed/cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "reicqed/cli/config.hpp"
#include "reicqed/constants.hpp"
#include "reicqed/errors.hpp"

namespace reicqed::cli {

namespace {

struct TaskName {
  Task task;
  const char* name;
};

constexpr TaskName kTasks[] = {{Task::Params, "params"},           {Task::Spectrum, "spectrum"},
                               {Task::Map, "map"},                 {Task::Pamp, "pamp"},
                               {Task::Transmission, "transmission"}, {Task::Critical, "critical"},
                               {Task::Fidelity, "fidelity"},       {Task::Feasibility, "feasibility"}};

using Schema = std::vector<FieldSpec>;

void add_grid(Schema& s, const std::string& base, Dim dim, Sign sign) {
  s.push_back({base + "_min", dim, sign});
  s.push_back({base + "_max", dim, sign});
  s.push_back({base + "_points", Dim::Count});
}

const Schema& scenario_schema() {
  static const Schema s{{"name", Dim::Text}, {"task", Dim::Text}, {"catalog", Dim::Text}, {"ions", Dim::TextList}};
  return s;
}

const Schema& ion_schema() {
  static const Schema s{{"name", Dim::Text},          {"lambda_a", Dim::Length},
                        {"t_spon", Dim::Time},        {"mu", Dim::Dipole},
                        {"n_host", Dim::Number},      {"gamma_p", Dim::Frequency, Sign::NonNegative},
                        {"t_d", Dim::Time},           {"source", Dim::Text}};
  return s;
}

const Schema& cavity_schema() {
  static const Schema s{{"radius", Dim::Length, Sign::NonNegative},
                        {"thickness", Dim::Length, Sign::NonNegative},
                        {"n_cavity", Dim::Number},
                        {"lambda_c", Dim::Length},
                        {"v", Dim::Volume},
                        {"q_r", Dim::Number},
                        {"q_m", Dim::Number},
                        {"q_s", Dim::Number},
                        {"kappa_out", Dim::Frequency, Sign::NonNegative},
                        {"beta", Dim::Frequency, Sign::NonNegative}};
  return s;
}

const Schema& rates_schema() {
  static const Schema s{{"g", Dim::Frequency, Sign::NonNegative},        {"kappa", Dim::Frequency, Sign::NonNegative},
                        {"kappa_out", Dim::Frequency, Sign::NonNegative}, {"gamma", Dim::Frequency, Sign::NonNegative},
                        {"gamma_p", Dim::Frequency, Sign::NonNegative},   {"delta_ca", Dim::Frequency, Sign::Any},
                        {"delta_la", Dim::Frequency, Sign::Any},          {"beta", Dim::Frequency, Sign::NonNegative}};
  return s;
}

const Schema& task_schema(Task t) {
  static const std::map<Task, Schema> schemas = [] {
    std::map<Task, Schema> m;
    m[Task::Params] = {{"eo_voltage", Dim::Voltage, Sign::Any}, {"eo_rate", Dim::DisplacementPerVolt}};
    Schema sp;
    add_grid(sp, "detuning", Dim::Frequency, Sign::Any);
    sp.push_back({"backend", Dim::Text});
    sp.push_back({"probe", Dim::Frequency});
    sp.push_back({"n_fock", Dim::Count});
    m[Task::Spectrum] = sp;
    Schema mp;
    add_grid(mp, "laser", Dim::Frequency, Sign::Any);
    add_grid(mp, "cavity", Dim::Frequency, Sign::Any);
    m[Task::Map] = mp;
    Schema pa;
    add_grid(pa, "power", Dim::Power, Sign::NonNegative);
    pa.insert(pa.end(), {{"delta_c", Dim::Frequency},
                         {"chi2", Dim::DisplacementPerVolt},
                         {"pump_linewidth", Dim::Frequency},
                         {"theta", Dim::Angle, Sign::Any},
                         {"pump_kappa_out", Dim::Frequency},
                         {"anchor_power", Dim::Power},
                         {"anchor_enhancement", Dim::Number},
                         {"rwa_n_fock", Dim::Count}});
    add_grid(pa, "detuning", Dim::Frequency, Sign::Any);
    m[Task::Pamp] = pa;
    Schema tr;
    add_grid(tr, "detuning", Dim::Frequency, Sign::Any);
    tr.push_back({"n_fock", Dim::Count});
    tr.push_back({"probe", Dim::Frequency});
    m[Task::Transmission] = tr;
    Schema cr;
    add_grid(cr, "kappa_out", Dim::Frequency, Sign::Positive);
    m[Task::Critical] = cr;
    Schema fi;
    add_grid(fi, "t_gate", Dim::Time, Sign::Positive);
    add_grid(fi, "kappa_out", Dim::Frequency, Sign::Positive);
    fi.push_back({"t_d", Dim::Time});
    fi.push_back({"t_d_list", Dim::TimeList});
    fi.push_back({"compare_gamma", Dim::Frequency});
    m[Task::Fidelity] = fi;
    Schema fe;
    add_grid(fe, "k", Dim::Number, Sign::Positive);
    add_grid(fe, "q", Dim::Number, Sign::Positive);
    m[Task::Feasibility] = fe;
    return m;
  }();
  return schemas.at(t);
}

void read_grid(const BoundSection& b, const std::string& base, Grid& g, bool log) {
  g.min = b.number(base + "_min").value_or(g.min);
  g.max = b.number(base + "_max").value_or(g.max);
  g.points = b.count(base + "_points").value_or(g.points);
  if (g.points < 2) b.fail(base + "_points", base + " grid needs at least 2 points");
  if (!(g.max > g.min)) b.fail(base + "_max", base + " grid needs max > min");
  if (log && !(g.min > 0.0)) b.fail(base + "_min", base + " grid is logarithmic and needs min > 0");
}

IonSpecies read_ion(const ConfigDocument& doc, const ConfigSection& sec) {
  BoundSection b(doc, sec, ion_schema());
  IonSpecies ion;
  ion.name = b.required_text("name");
  ion.lambda_a = b.required_number("lambda_a");
  ion.t_spon = b.number("t_spon");
  ion.mu = b.number("mu");
  ion.n_host = b.number("n_host").value_or(1.0);
  ion.gamma_p = b.number("gamma_p").value_or(0.0);
  ion.t_d = b.number("t_d");
  ion.source = b.text("source").value_or("");
  try {
    ion.validate();
  } catch (const ValidationError& e) {
    b.fail("name", e.what());
  }
  return ion;
}

CavityDesign read_cavity(const ConfigDocument& doc, const ConfigSection& sec) {
  BoundSection b(doc, sec, cavity_schema());
  CavityDesign c;
  c.radius = b.number("radius").value_or(0.0);
  c.thickness = b.number("thickness").value_or(0.0);
  c.n_cavity = b.number("n_cavity").value_or(1.0);
  c.lambda_c = b.number("lambda_c").value_or(0.0);
  c.V = b.required_number("v");
  c.Q_r = b.number("q_r");
  c.Q_m = b.number("q_m");
  c.Q_s = b.number("q_s");
  c.kappa_out = b.number("kappa_out").value_or(0.0);
  c.beta = b.number("beta").value_or(0.0);
  try {
    c.validate();
  } catch (const ValidationError& e) {
    b.fail("v", e.what());
  }
  return c;
}

void read_task(const BoundSection& b, Scenario& s) {
  switch (s.task) {
    case Task::Params:
      s.params.eo_voltage = b.number("eo_voltage");
      s.params.eo_rate = b.number("eo_rate");
      if (s.params.eo_voltage.has_value() != s.params.eo_rate.has_value()) {
        b.fail("eo_voltage", "eo_voltage and eo_rate must be given together");
      }
      break;
    case Task::Spectrum: {
      auto& o = s.spectrum;
      read_grid(b, "detuning", o.detuning, false);
      if (auto be = b.text("backend")) {
        if (*be == "eigen") o.backend = SpectrumBackend::Eigen;
        else if (*be == "numeric") o.backend = SpectrumBackend::Numeric;
        else if (*be == "both") o.backend = SpectrumBackend::Both;
        else b.fail("backend", "backend must be one of eigen, numeric, both");
      }
      o.probe = b.number("probe").value_or(o.probe);
      o.n_fock = b.count("n_fock").value_or(o.n_fock);
      break;
    }
    case Task::Map:
      read_grid(b, "laser", s.map.laser, false);
      read_grid(b, "cavity", s.map.cavity, false);
      break;
    case Task::Pamp: {
      auto& o = s.pamp;
      read_grid(b, "power", o.power, false);
      o.delta_c = b.number("delta_c").value_or(o.delta_c);
      o.chi2 = b.number("chi2").value_or(o.chi2);
      o.pump_linewidth = b.number("pump_linewidth").value_or(o.pump_linewidth);
      o.theta = b.number("theta").value_or(o.theta);
      o.pump_kappa_out = b.number("pump_kappa_out");
      o.anchor_power = b.number("anchor_power").value_or(o.anchor_power);
      o.anchor_enhancement = b.number("anchor_enhancement").value_or(o.anchor_enhancement);
      if (!(o.anchor_enhancement >= 1.0)) b.fail("anchor_enhancement", "anchor_enhancement must be >= 1");
      o.rwa_n_fock = b.count("rwa_n_fock").value_or(o.rwa_n_fock);
      read_grid(b, "detuning", o.detuning, false);
      break;
    }
    case Task::Transmission:
      read_grid(b, "detuning", s.transmission.detuning, false);
      s.transmission.n_fock = b.count("n_fock").value_or(s.transmission.n_fock);
      s.transmission.probe = b.number("probe").value_or(s.transmission.probe);
      break;
    case Task::Critical:
      read_grid(b, "kappa_out", s.critical.kappa_out, true);
      break;
    case Task::Fidelity: {
      auto& o = s.fidelity;
      read_grid(b, "t_gate", o.t_gate, true);
      read_grid(b, "kappa_out", o.kappa_out, true);
      o.t_d = b.number("t_d");
      o.t_d_list = b.numbers("t_d_list").value_or(std::vector<double>{});
      o.compare_gamma = b.number("compare_gamma");
      break;
    }
    case Task::Feasibility:
      read_grid(b, "k", s.feasibility.k, true);
      read_grid(b, "q", s.feasibility.q, true);
      break;
  }
}

class Writer {
 public:
  void section(const std::string& name, bool array = false) {
    if (!out_.str().empty()) out_ << "\n";
    out_ << (array ? "[[" : "[") << name << (array ? "]]" : "]") << "\n";
  }
  void text(const std::string& key, const std::string& v) { out_ << key << " = " << quote(v) << "\n"; }
  void number(const std::string& key, double v) { out_ << key << " = " << format_number(v) << "\n"; }
  void quantity(const std::string& base, Dim d, double v) {
    out_ << base << "_" << si_suffix(d) << " = " << format_number(v) << "\n";
  }
  void quantity(const std::string& base, Dim d, const std::optional<double>& v) {
    if (v) quantity(base, d, *v);
  }
  void count(const std::string& key, std::size_t v) { out_ << key << " = " << v << "\n"; }
  void grid(const std::string& base, Dim d, const Grid& g) {
    if (d == Dim::Number) {
      number(base + "_min", g.min);
      number(base + "_max", g.max);
    } else {
      quantity(base + "_min", d, g.min);
      quantity(base + "_max", d, g.max);
    }
    count(base + "_points", g.points);
  }
  void quantities(const std::string& base, Dim d, const std::vector<double>& v) {
    out_ << base << "_" << si_suffix(d) << " = [";
    for (std::size_t i = 0; i < v.size(); ++i) out_ << (i ? ", " : "") << format_number(v[i]);
    out_ << "]\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

const char* backend_name(SpectrumBackend b) {
  switch (b) {
    case SpectrumBackend::Eigen: return "eigen";
    case SpectrumBackend::Numeric: return "numeric";
    default: return "both";
  }
}

std::vector<IonSpecies> ions_from(const ConfigDocument& doc) {
  std::vector<IonSpecies> out;
  for (const auto& sec : doc.sections) {
    if (sec.name == "ion" && sec.is_array) out.push_back(read_ion(doc, sec));
  }
  return out;
}

void check_unique_names(const std::vector<IonSpecies>& ions, const std::string& where) {
  for (std::size_t i = 0; i < ions.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (ions[i].name == ions[j].name) throw ValidationError(where + ": ion '" + ions[i].name + "' listed twice");
    }
  }
}

}  // namespace

const char* to_string(Task t) {
  for (const auto& tn : kTasks) {
    if (tn.task == t) return tn.name;
  }
  return "?";
}

std::vector<double> linear(const Grid& g) {
  std::vector<double> v(g.points);
  for (std::size_t i = 0; i < g.points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(g.points - 1);
    v[i] = g.min + (g.max - g.min) * u;
  }
  v.back() = g.max;
  return v;
}

std::vector<double> logarithmic(const Grid& g) {
  std::vector<double> v(g.points);
  const double a = std::log(g.min), b = std::log(g.max);
  for (std::size_t i = 0; i < g.points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(g.points - 1);
    v[i] = std::exp(a + (b - a) * u);
  }
  v.front() = g.min;
  v.back() = g.max;
  return v;
}

std::vector<IonSpecies> load_catalog(const std::string& path) {
  const auto doc = read_config(path);
  for (const auto& sec : doc.sections) {
    if (sec.name.empty() && sec.entries.empty()) continue;
    if (!(sec.name == "ion" && sec.is_array)) {
      const int line = sec.entries.empty() ? sec.line : sec.entries.front().line;
      throw ValidationError(path + ":" + std::to_string(line) + ": catalogs hold only [[ion]] sections");
    }
  }
  auto ions = ions_from(doc);
  check_unique_names(ions, path);
  return ions;
}

namespace {

Scenario build(const ConfigDocument& doc, const std::string& base_dir) {
  Scenario s;
  const ConfigSection* head = nullptr;
  const ConfigSection* cavity = nullptr;
  const ConfigSection* rates = nullptr;
  const ConfigSection* task_sec = nullptr;
  std::string task_sec_name;
  for (const auto& sec : doc.sections) {
    const int line = sec.line ? sec.line : (sec.entries.empty() ? 0 : sec.entries.front().line);
    auto fail = [&](const std::string& m) { throw ValidationError(doc.source + ":" + std::to_string(line) + ": " + m); };
    if (sec.name.empty()) {
      if (!sec.entries.empty()) fail("keys must appear inside a section");
      continue;
    }
    if (sec.name == "ion") {
      if (!sec.is_array) fail("ions are declared with [[ion]]");
      continue;
    }
    if (sec.is_array) fail("[[" + sec.name + "]] is not an array section");
    if (sec.name == "scenario") head = &sec;
    else if (sec.name == "cavity") cavity = &sec;
    else if (sec.name == "rates") rates = &sec;
    else {
      bool known = false;
      for (const auto& tn : kTasks) known = known || sec.name == tn.name;
      if (!known) fail("unknown section [" + sec.name + "]");
      if (task_sec) fail("only one task section is allowed ([" + task_sec_name + "] already given)");
      task_sec = &sec;
      task_sec_name = sec.name;
    }
  }
  if (!head) throw ValidationError(doc.source + ": missing [scenario] section");
  BoundSection h(doc, *head, scenario_schema());
  s.name = h.text("name").value_or(std::filesystem::path(doc.source).stem().string());
  const std::string task = h.required_text("task");
  bool found = false;
  for (const auto& tn : kTasks) {
    if (task == tn.name) s.task = tn.task, found = true;
  }
  if (!found) h.fail("task", "unknown task '" + task + "'");
  if (task_sec && task_sec_name != task) {
    throw ValidationError(doc.source + ":" + std::to_string(task_sec->line) + ": section [" + task_sec_name +
                          "] does not apply to task '" + task + "'");
  }

  if (auto cat = h.text("catalog")) {
    std::filesystem::path p(*cat);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    const auto catalog = load_catalog(p.string());
    if (auto names = h.texts("ions")) {
      for (const auto& n : *names) {
        bool hit = false;
        for (const auto& ion : catalog) {
          if (ion.name == n) s.ions.push_back(ion), hit = true;
        }
        if (!hit) h.fail("ions", "ion '" + n + "' is not in catalog " + p.string());
      }
    } else {
      s.ions = catalog;
    }
  } else if (h.has("ions")) {
    h.fail("ions", "'ions' selects from a catalog; set 'catalog' as well");
  }
  for (auto& ion : ions_from(doc)) s.ions.push_back(std::move(ion));
  check_unique_names(s.ions, doc.source);

  if (cavity) s.cavity = read_cavity(doc, *cavity);
  if (rates) {
    BoundSection b(doc, *rates, rates_schema());
    auto& o = s.rates;
    o.g = b.number("g");
    o.kappa = b.number("kappa");
    o.kappa_out = b.number("kappa_out");
    o.gamma = b.number("gamma");
    o.gamma_p = b.number("gamma_p");
    o.delta_ca = b.number("delta_ca");
    o.delta_la = b.number("delta_la");
    o.beta = b.number("beta");
  }
  if (task_sec) {
    read_task(BoundSection(doc, *task_sec, task_schema(s.task)), s);
  } else {
    // Defaults still have to be checked for tasks whose options are fixed.
    read_task(BoundSection(doc, ConfigSection{to_string(s.task), false, head->line, {}}, task_schema(s.task)), s);
  }
  if (s.task == Task::Feasibility && s.ions.empty()) {
    throw ValidationError(doc.source + ": the feasibility task needs at least one ion");
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path();
  return build(read_config(path), dir.empty() ? "." : dir.string());
}

Scenario parse_scenario_text(const std::string& text, const std::string& source, const std::string& base_dir) {
  return build(parse_config(text, source), base_dir);
}

std::string serialize(const Scenario& s) {
  Writer w;
  w.section("scenario");
  w.text("name", s.name);
  w.text("task", to_string(s.task));
  for (const auto& ion : s.ions) {
    w.section("ion", true);
    w.text("name", ion.name);
    w.quantity("lambda_a", Dim::Length, ion.lambda_a);
    w.quantity("t_spon", Dim::Time, ion.t_spon);
    w.quantity("mu", Dim::Dipole, ion.mu);
    w.number("n_host", ion.n_host);
    w.quantity("gamma_p", Dim::Frequency, ion.gamma_p);
    w.quantity("t_d", Dim::Time, ion.t_d);
    if (!ion.source.empty()) w.text("source", ion.source);
  }
  if (s.cavity) {
    const auto& c = *s.cavity;
    w.section("cavity");
    w.quantity("radius", Dim::Length, c.radius);
    w.quantity("thickness", Dim::Length, c.thickness);
    w.number("n_cavity", c.n_cavity);
    if (c.lambda_c > 0.0) w.quantity("lambda_c", Dim::Length, c.lambda_c);
    w.quantity("v", Dim::Volume, c.V);
    if (c.Q_r) w.number("q_r", *c.Q_r);
    if (c.Q_m) w.number("q_m", *c.Q_m);
    if (c.Q_s) w.number("q_s", *c.Q_s);
    w.quantity("kappa_out", Dim::Frequency, c.kappa_out);
    w.quantity("beta", Dim::Frequency, c.beta);
  }
  const auto& r = s.rates;
  if (r != RateOverrides{}) {
    w.section("rates");
    w.quantity("g", Dim::Frequency, r.g);
    w.quantity("kappa", Dim::Frequency, r.kappa);
    w.quantity("kappa_out", Dim::Frequency, r.kappa_out);
    w.quantity("gamma", Dim::Frequency, r.gamma);
    w.quantity("gamma_p", Dim::Frequency, r.gamma_p);
    w.quantity("delta_ca", Dim::Frequency, r.delta_ca);
    w.quantity("delta_la", Dim::Frequency, r.delta_la);
    w.quantity("beta", Dim::Frequency, r.beta);
  }
  w.section(to_string(s.task));
  switch (s.task) {
    case Task::Params:
      w.quantity("eo_voltage", Dim::Voltage, s.params.eo_voltage);
      w.quantity("eo_rate", Dim::DisplacementPerVolt, s.params.eo_rate);
      break;
    case Task::Spectrum:
      w.grid("detuning", Dim::Frequency, s.spectrum.detuning);
      w.text("backend", backend_name(s.spectrum.backend));
      w.quantity("probe", Dim::Frequency, s.spectrum.probe);
      w.count("n_fock", s.spectrum.n_fock);
      break;
    case Task::Map:
      w.grid("laser", Dim::Frequency, s.map.laser);
      w.grid("cavity", Dim::Frequency, s.map.cavity);
      break;
    case Task::Pamp: {
      const auto& o = s.pamp;
      w.grid("power", Dim::Power, o.power);
      w.quantity("delta_c", Dim::Frequency, o.delta_c);
      w.quantity("chi2", Dim::DisplacementPerVolt, o.chi2);
      w.quantity("pump_linewidth", Dim::Frequency, o.pump_linewidth);
      w.quantity("theta", Dim::Angle, o.theta);
      w.quantity("pump_kappa_out", Dim::Frequency, o.pump_kappa_out);
      w.quantity("anchor_power", Dim::Power, o.anchor_power);
      w.number("anchor_enhancement", o.anchor_enhancement);
      w.count("rwa_n_fock", o.rwa_n_fock);
      w.grid("detuning", Dim::Frequency, o.detuning);
      break;
    }
    case Task::Transmission:
      w.grid("detuning", Dim::Frequency, s.transmission.detuning);
      w.count("n_fock", s.transmission.n_fock);
      w.quantity("probe", Dim::Frequency, s.transmission.probe);
      break;
    case Task::Critical:
      w.grid("kappa_out", Dim::Frequency, s.critical.kappa_out);
      break;
    case Task::Fidelity: {
      const auto& o = s.fidelity;
      w.grid("t_gate", Dim::Time, o.t_gate);
      w.grid("kappa_out", Dim::Frequency, o.kappa_out);
      w.quantity("t_d", Dim::Time, o.t_d);
      if (!o.t_d_list.empty()) w.quantities("t_d_list", Dim::TimeList, o.t_d_list);
      w.quantity("compare_gamma", Dim::Frequency, o.compare_gamma);
      break;
    }
    case Task::Feasibility:
      w.grid("k", Dim::Number, s.feasibility.k);
      w.grid("q", Dim::Number, s.feasibility.q);
      break;
  }
  return w.str();
}

ResolvedRates resolve_rates(const Scenario& s) {
  ResolvedRates out;
  auto& r = out.rates;
  const IonSpecies* ion = s.ions.empty() ? nullptr : &s.ions.front();
  if (ion) {
    const auto res = resolve(*ion);
    r.gamma = 1.0 / (constants::two_pi * *res.t_spon);
    r.gamma_p = res.gamma_p;
    if (s.cavity) r.g = coupling_g(res, *s.cavity);
  }
  if (s.cavity) {
    const auto& cav = *s.cavity;
    if (cav.Q_r || cav.Q_m || cav.Q_s) {
      const double Q = q_combine(cav.Q_r, cav.Q_m, cav.Q_s);
      const double lambda = cav.lambda_c > 0.0 ? cav.lambda_c : (ion ? ion->lambda_a : 0.0);
      if (!(lambda > 0.0)) throw ValidationError("cavity lambda_c is needed to turn Q into kappa");
      if (!std::isinf(Q)) r.kappa = kappa_from_q(lambda, Q);
    }
    r.kappa_out = cav.kappa_out;
  }
  if (s.cavity) out.beta = s.cavity->beta;

  auto apply = [&](const char* name, double& field, const std::optional<double>& v) {
    if (!v) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s: %.6e -> %.6e Hz", name, field, *v);
    out.overrides.emplace_back(buf);
    field = *v;
  };
  const auto& o = s.rates;
  apply("g", r.g, o.g);
  apply("kappa", r.kappa, o.kappa);
  apply("kappa_out", r.kappa_out, o.kappa_out);
  apply("gamma", r.gamma, o.gamma);
  apply("gamma_p", r.gamma_p, o.gamma_p);
  apply("delta_ca", r.delta_ca, o.delta_ca);
  apply("delta_la", r.delta_la, o.delta_la);
  apply("beta", out.beta, o.beta);
  r.validate();
  return out;
}

}  // namespace reicqed::cli
