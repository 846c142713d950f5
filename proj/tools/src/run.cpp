#include "reicqed/cli/run.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>

#include "json.hpp"

#include "reicqed/cli/output.hpp"
#include "reicqed/cli/plot.hpp"
#include "reicqed/constants.hpp"
#include "reicqed/gatesim.hpp"
#include "reicqed/jcmodel.hpp"
#include "reicqed/squeeze.hpp"
#include "reicqed/wgmio.hpp"

#ifndef REICQED_VERSION
#define REICQED_VERSION "0.0.0"
#endif

namespace reicqed::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class Context {
 public:
  Context(const Scenario& s, const RunOptions& o, std::ostream& out, std::ostream& log)
      : s(s), opt(o), out(out), log(log) {}

  const Scenario& s;
  const RunOptions& opt;
  std::ostream& out;
  std::ostream& log;
  RunManifest manifest;

  std::string path(const std::string& name) const { return (fs::path(opt.out_dir) / name).string(); }

  void emit(const std::string& name, const std::string& bytes) {
    write_file(path(name), bytes);
    manifest.outputs.push_back({name, bytes.size(), hex64(fnv1a64(bytes))});
  }
  void csv(const std::string& name, const Table& t) { emit(name, to_csv(t)); }
  void json(const std::string& name, const ordered_json& j) { emit(name, j.dump(2) + "\n"); }

  void plot(const std::string& csv_name, const PlotSpec& spec) {
    if (!opt.plot) return;
    const std::string svg = fs::path(csv_name).replace_extension(".svg").string();
    emit_plot(path(csv_name), spec, path(svg));
    std::ifstream in(path(svg), std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    manifest.outputs.push_back({svg, bytes.size(), hex64(fnv1a64(bytes))});
  }

  void check(const std::string& name, double value, double tol, bool diagnostic = false) {
    const bool ok = std::isfinite(value) && value <= tol;
    manifest.checks.push_back({name, value, tol, ok, diagnostic});
    log << "verify: " << name << " = " << value << " (tolerance " << tol << ") "
        << (ok ? "ok" : (diagnostic ? "exceeded, reported only" : "FAILED")) << "\n";
  }

  ResolvedRates rates() {
    auto r = resolve_rates(s);
    for (const auto& o : r.overrides) log << "rate override " << o << "\n";
    manifest.overrides = r.overrides;
    return r;
  }

  ResolvedRates dynamic_rates() {
    auto r = rates();
    if (!(r.rates.kappa_all() > 0.0 || r.rates.gamma > 0.0)) {
      throw ValidationError("task '" + std::string(to_string(s.task)) +
                            "' needs nonzero decay rates; give a cavity Q budget or [rates] kappa");
    }
    return r;
  }

  const IonSpecies& primary_ion(const char* why) const {
    if (s.ions.empty()) throw ValidationError(std::string("an ion is required for ") + why);
    return s.ions.front();
  }
};

ordered_json peaks_json(const std::vector<Peak>& peaks) {
  ordered_json a = ordered_json::array();
  for (const auto& p : peaks) {
    a.push_back({{"position_hz", p.position},
                 {"height", p.height},
                 {"width_hz", std::isfinite(p.width) ? ordered_json(p.width) : ordered_json(nullptr)}});
  }
  return a;
}

Table spectrum_table(const SpectrumResult& r) {
  Table t{{"detuning_hz", "amplitude"}, {}};
  for (std::size_t i = 0; i < r.detuning.size(); ++i) t.add({r.detuning[i], r.amplitude[i]});
  return t;
}

LinePlot spectrum_plot(const std::string& title) {
  return {"detuning_hz", {"amplitude"}, "laser - ion detuning (MHz)", "normalized amplitude", title, 1e-6};
}

double reference_wavelength(const Scenario& s) { return s.ions.empty() ? 980e-9 : s.ions.front().lambda_a; }

void task_params(Context& c) {
  auto rr = c.rates();
  const auto& r = rr.rates;
  ordered_json j;
  if (!c.s.ions.empty()) {
    const auto ion = resolve(c.s.ions.front());
    j["ion"] = {{"name", ion.name}, {"lambda_a_m", ion.lambda_a}, {"t_spon_s", *ion.t_spon}, {"mu_cm", *ion.mu},
                {"n_host", ion.n_host}, {"chi_local", chi_local(ion.n_host)}};
    if (c.opt.verify) {
      IonSpecies back = ion;
      back.t_spon.reset();
      c.check("lifetime round trip (relative)", std::abs(lifetime_from_dipole(back) / *ion.t_spon - 1.0), 1e-12);
    }
  }
  if (c.s.cavity) {
    const auto& cav = *c.s.cavity;
    const double Q = q_combine(cav.Q_r, cav.Q_m, cav.Q_s);
    ordered_json cj{{"q_total", std::isinf(Q) ? ordered_json(nullptr) : ordered_json(Q)}};
    if (!c.s.ions.empty()) {
      const auto& ion = c.s.ions.front();
      const double lambda = cav.lambda_c > 0.0 ? cav.lambda_c : ion.lambda_a;
      const double k = cav.V / (lambda * lambda * lambda);
      cj["k"] = k;
      cj["q_threshold"] = q_threshold(ion, k);
      if (!std::isinf(Q)) cj["strong_coupling_fom"] = strong_coupling_fom(ion, Q, k);
    }
    j["cavity"] = cj;
  }
  ordered_json rj{{"g_hz", r.g},          {"kappa_hz", r.kappa},       {"kappa_out_hz", r.kappa_out},
                  {"gamma_hz", r.gamma},  {"gamma_p_hz", r.gamma_p},   {"delta_ca_hz", r.delta_ca},
                  {"delta_la_hz", r.delta_la}, {"beta_hz", rr.beta}};
  if (r.kappa_all() > 0.0 && r.gamma > 0.0) rj["cooperativity"] = cooperativity(r);
  j["rates"] = rj;
  if (c.s.params.eo_voltage) {
    const double lambda = c.s.cavity && c.s.cavity->lambda_c > 0.0 ? c.s.cavity->lambda_c : reference_wavelength(c.s);
    const auto eo = eo_tuning(*c.s.params.eo_voltage, *c.s.params.eo_rate, lambda);
    j["eo_tuning"] = {{"voltage_v", *c.s.params.eo_voltage}, {"delta_lambda_m", eo.delta_lambda},
                      {"delta_nu_hz", eo.delta_nu}};
  }
  c.json("params.json", j);
  c.out << "g = " << r.g << " Hz, kappa = " << r.kappa << " Hz, kappa_out = " << r.kappa_out
        << " Hz, gamma = " << r.gamma << " Hz, gamma_p = " << r.gamma_p << " Hz\n";
  if (rj.contains("cooperativity")) c.out << "cooperativity = " << rj["cooperativity"].get<double>() << "\n";
}

void task_spectrum(Context& c) {
  const auto r = c.dynamic_rates().rates;
  const auto& o = c.s.spectrum;
  const auto grid = linear(o.detuning);
  const double step = grid[1] - grid[0];
  const bool want_eigen = o.backend != SpectrumBackend::Numeric || c.opt.verify;
  const bool want_numeric = o.backend != SpectrumBackend::Eigen || c.opt.verify;
  ordered_json peaks;
  std::optional<SpectrumResult> eig, num;
  if (want_eigen) {
    eig = spectrum_eigen(build_jc(r, o.n_fock), grid, {reference_wavelength(c.s), 0.01});
    c.csv("spectrum_eigen.csv", spectrum_table(*eig));
    c.plot("spectrum_eigen.csv", spectrum_plot("eigenstate spectrum"));
    peaks["eigen"] = peaks_json(eig->peaks);
  }
  if (want_numeric) {
    NumericSpectrumOptions no;
    no.n_fock = o.n_fock;
    num = spectrum_numeric(r, grid, o.probe, no);
    c.csv("spectrum_numeric.csv", spectrum_table(*num));
    c.plot("spectrum_numeric.csv", spectrum_plot("steady-state spectrum"));
    peaks["numeric"] = peaks_json(num->peaks);
  }
  c.json("spectrum_peaks.json", peaks);
  for (const auto* res : {&eig, &num}) {
    if (!*res) continue;
    c.out << (res == &eig ? "eigen" : "numeric") << " peaks (Hz):";
    for (const auto& p : (*res)->peaks) c.out << " " << p.position;
    c.out << "\n";
  }
  if (c.opt.verify) {
    c.check("peak count difference", std::abs(static_cast<double>(eig->peaks.size()) -
                                              static_cast<double>(num->peaks.size())), 0.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < std::min(eig->peaks.size(), num->peaks.size()); ++i) {
      worst = std::max(worst, std::abs(eig->peaks[i].position - num->peaks[i].position));
    }
    c.check("eigen vs numeric peak offset (grid steps)", worst / step, 1.0 + 1e-9);
  }
}

void task_map(Context& c) {
  const auto r = c.dynamic_rates().rates;
  const auto laser = linear(c.s.map.laser), cavity = linear(c.s.map.cavity);
  const auto m = spectrum_map(r, laser, cavity, {reference_wavelength(c.s), 0.01});
  Table t{{"laser_detuning_hz", "cavity_detuning_hz", "amplitude"}, {}};
  for (std::size_t ic = 0; ic < cavity.size(); ++ic) {
    for (std::size_t il = 0; il < laser.size(); ++il) t.add({laser[il], cavity[ic], m.at(ic, il)});
  }
  c.csv("map.csv", t);
  c.plot("map.csv", Heatmap{"laser_detuning_hz", "cavity_detuning_hz", "amplitude", "laser - ion detuning (MHz)",
                            "cavity - ion detuning (MHz)", "normalized amplitude", "spectrum map", 1e-6, 1e-6});
  c.out << "map: " << cavity.size() << " x " << laser.size() << " points\n";
  if (c.opt.verify) {
    const auto it = std::min_element(cavity.begin(), cavity.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    const auto ic = static_cast<std::size_t>(it - cavity.begin());
    CqedRates col = r;
    col.delta_ca = r.delta_ca + cavity[ic];
    std::vector<double> colv(laser.size());
    for (std::size_t il = 0; il < laser.size(); ++il) colv[il] = m.at(ic, il);
    const auto a = find_peaks(laser, colv);
    std::vector<double> ref_pos;
    try {
      for (const auto& p : spectrum_eigen(build_jc(col, 3), laser, {reference_wavelength(c.s), 0.01}).peaks) {
        ref_pos.push_back(p.position);
      }
    } catch (const ValidationError&) {
      c.log << "verify: column reference spectrum has lines outside the laser grid; skipped\n";
      return;
    }
    double worst = a.size() == ref_pos.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.size(), ref_pos.size()); ++i) {
      worst = std::max(worst, std::abs(a[i].position - ref_pos[i]));
    }
    c.check("map column vs single spectrum peak offset (grid steps)", worst / (laser[1] - laser[0]), 1e-9);
  }
}

void task_pamp(Context& c) {
  const auto r = c.dynamic_rates().rates;
  const auto& o = c.s.pamp;
  const auto& ion = c.primary_ion("the pump frequency");
  if (!c.s.cavity) throw ValidationError("the pamp task needs a [cavity] for the mode volume");
  PumpDrive d;
  d.omega0 = constants::two_pi * constants::c / ion.lambda_a;
  d.chi2 = o.chi2;
  d.V = c.s.cavity->V;
  d.theta = o.theta;
  if (o.pump_kappa_out) d.pump_kappa_out = to_angular(*o.pump_kappa_out);
  const double pw = to_angular(o.pump_linewidth), dc = to_angular(o.delta_c);
  d.calibration = calibrate(d, pw, dc, o.anchor_power, o.anchor_enhancement);
  c.manifest.calibration["pump_calibration"] = d.calibration;
  c.manifest.calibration["anchor_power_w"] = o.anchor_power;
  c.manifest.calibration["anchor_enhancement"] = o.anchor_enhancement;
  c.log << "pump calibration factor " << d.calibration << " (anchor " << o.anchor_power << " W -> g_eff/g = "
        << o.anchor_enhancement << ")\n";

  const auto rows = enhancement_curve(r, d, pw, dc, linear(o.power));
  Table t{{"power_w", "omega_rad_s", "r", "g_eff_hz"}, {}};
  for (const auto& row : rows) t.add({row.power_w, row.omega, row.r, row.g_eff_hz});
  c.csv("enhancement.csv", t);
  c.plot("enhancement.csv", LinePlot{"power_w", {"g_eff_hz"}, "pump power (nW)", "g_eff (MHz)",
                                     "parametric enhancement", 1e9, 1e-6});

  PumpDrive at = d;
  at.power = o.anchor_power;
  const auto frame = squeeze_params(dc, omega_from_power(at, pw), o.theta);
  const auto eff = effective_model(frame, r);
  const auto grid = linear(o.detuning);
  const EigenSpectrumOptions eo{ion.lambda_a, 0.01};
  const auto undriven = spectrum_eigen(build_jc(r, 3), grid, eo);
  const auto driven = spectrum_eigen(build_jc(eff, 3), grid, eo);
  c.csv("spectrum_undriven.csv", spectrum_table(undriven));
  c.csv("spectrum_driven.csv", spectrum_table(driven));
  c.plot("spectrum_undriven.csv", spectrum_plot("without parametric drive"));
  c.plot("spectrum_driven.csv", spectrum_plot("with parametric drive at the anchor power"));

  const auto rwa = validate_rwa(r, frame, o.rwa_n_fock);
  ordered_json rj{{"r", frame.r},
                  {"enhancement", frame.enhancement()},
                  {"delta_alpha_rad_s", frame.delta_alpha},
                  {"ratio_delta_alpha_over_g_sinh_r", rwa.ratio},
                  {"max_rel_deviation", rwa.max_rel_deviation},
                  {"questionable", rwa.questionable},
                  {"rwa_levels_rad_s", rwa.rwa_levels},
                  {"full_levels_rad_s", rwa.full_levels}};
  c.json("rwa_report.json", rj);
  if (rwa.questionable) {
    c.log << "warning: rotating-wave reduction is questionable at the anchor (max relative deviation "
          << rwa.max_rel_deviation << ")\n";
  }
  c.out << "anchor: r = " << frame.r << ", g_eff = " << eff.g << " Hz; RWA deviation " << rwa.max_rel_deviation
        << "\n";

  if (c.opt.verify) {
    const double Om = 0.5 * dc;
    const double expect = std::sqrt(dc * dc - Om * Om);
    double worst = 0.0;
    for (double sp : pamp_level_spacings(dc, Om)) worst = std::max(worst, std::abs(sp / expect - 1.0));
    c.check("Bogoliubov spacing at Omega/delta_c = 0.5 (relative)", worst, 1e-6);
    double cosh_dev = 0.0;
    for (const auto& row : rows) cosh_dev = std::max(cosh_dev, std::abs(row.g_eff_hz / (r.g * std::cosh(row.r)) - 1.0));
    if (r.g > 0.0) c.check("g_eff / (g cosh r) - 1", cosh_dev, 1e-12);
  }
}

void task_transmission(Context& c) {
  const auto rr = c.dynamic_rates();
  const auto& r = rr.rates;
  const auto& o = c.s.transmission;
  const auto grid = linear(o.detuning);
  const auto curve = transmission_curve(r, rr.beta, grid);
  Table t{{"detuning_hz", "t_down", "t_up", "contrast"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) t.add({grid[i], curve.t_down[i], curve.t_up[i], curve.contrast[i]});
  c.csv("transmission.csv", t);
  c.plot("transmission.csv", LinePlot{"detuning_hz", {"t_down", "t_up"}, "cavity - laser detuning (MHz)",
                                      "transmission", "spin-conditional transmission", 1e-6});
  const auto imax = std::max_element(curve.contrast.begin(), curve.contrast.end()) - curve.contrast.begin();
  c.out << "max contrast " << curve.contrast[static_cast<std::size_t>(imax)] << " at " << grid[static_cast<std::size_t>(imax)]
        << " Hz\n";
  if (c.opt.verify) {
    NumericTransmissionOptions no;
    no.n_fock = o.n_fock;
    const auto sys = build_backscatter(r, rr.beta, o.probe, o.n_fock);
    const auto down = intensity(transmission_numeric(sys, SpinState::Down, grid, no));
    const auto up = intensity(transmission_numeric(sys, SpinState::Up, grid, no));
    const auto sw = intensity(transmission_numeric_standing_wave(r, o.probe, grid, no));
    double d_dn = 0.0, d_sw = 0.0, d_up = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      d_dn = std::max(d_dn, std::abs(down[i] - curve.t_down[i]));
      d_sw = std::max(d_sw, std::abs(sw[i] - curve.t_up[i]));
      d_up = std::max(d_up, std::abs(up[i] - curve.t_up[i]));
    }
    c.check("empty-cavity branch vs numeric, max |dT|", d_dn, 1e-4);
    c.check("coupled branch vs standing-wave numeric, max |dT|", d_sw, 1e-2);
    c.check("coupled branch vs two-mode numeric, max |dT|", d_up, 1e-2, true);
  }
}

void task_critical(Context& c) {
  const auto rr = c.dynamic_rates();
  const auto grid = logarithmic(c.s.critical.kappa_out);
  const auto res = critical_coupling_search(rr.rates, rr.beta, grid);
  Table t{{"kappa_out_hz", "t_resonance"}, {}};
  for (double k : grid) t.add({k, std::norm(t_empty_point(rr.rates, rr.beta, k, 0.0))});
  c.csv("critical_scan.csv", t);
  c.plot("critical_scan.csv", LinePlot{"kappa_out_hz", {"t_resonance"}, "external coupling kappa_out (MHz)",
                                       "on-resonance transmission", "critical coupling", 1e-6, 1.0, true});
  c.json("critical.json", ordered_json{{"kappa_out_hz", res.kappa_out}, {"t_min", res.t_min}, {"beta_hz", res.beta}});
  c.out << "critical coupling: kappa_out = " << res.kappa_out << " Hz, T_min = " << res.t_min << "\n";
  if (c.opt.verify) {
    const double k = critical_kappa_out(rr.rates.kappa, rr.beta);
    c.check("search vs sqrt(kappa^2 + 4 beta^2) (relative)", std::abs(res.kappa_out / k - 1.0), 1e-4);
  }
}

void task_fidelity(Context& c) {
  auto rr = c.dynamic_rates();
  const auto& o = c.s.fidelity;
  std::optional<double> T_d = o.t_d;
  if (!T_d && !c.s.ions.empty()) T_d = c.s.ions.front().t_d;
  if (!T_d) throw ValidationError("the fidelity task needs t_d in [fidelity] or on the ion");
  double kout = 0.0;
  if (c.s.rates.kappa_out) {
    kout = rr.rates.kappa_out;
    c.log << "kappa_out fixed by override at " << kout << " Hz; critical-coupling search skipped\n";
  } else {
    const auto cc = critical_coupling_search(rr.rates, rr.beta, logarithmic(o.kappa_out));
    kout = cc.kappa_out;
    c.log << "critical coupling at kappa_out = " << kout << " Hz (T_min " << cc.t_min << ")\n";
  }
  c.manifest.calibration["kappa_out_hz"] = kout;
  const auto tg = logarithmic(o.t_gate);
  const auto curve = fidelity_curve(rr.rates, rr.beta, kout, tg, *T_d);
  Table t{{"t_gate_s", "fidelity"}, {}};
  for (std::size_t i = 0; i < tg.size(); ++i) t.add({tg[i], curve.F[i]});
  c.csv("fidelity.csv", t);
  c.plot("fidelity.csv", LinePlot{"t_gate_s", {"fidelity"}, "gate time (us)", "fidelity", "gate fidelity", 1e6,
                                  1.0, true});
  ordered_json j{{"t_opt_s", curve.t_opt}, {"f_max", curve.F_max}, {"kappa_out_hz", kout},
                 {"beta_hz", rr.beta},     {"t_d_s", *T_d}};
  if (o.compare_gamma) {
    CqedRates alt = rr.rates;
    alt.gamma = *o.compare_gamma;
    const auto ac = fidelity_curve(alt, rr.beta, kout, tg, *T_d);
    j["compare_gamma"] = {{"gamma_hz", alt.gamma}, {"t_opt_s", ac.t_opt}, {"f_max", ac.F_max},
                          {"delta_f_max", ac.F_max - curve.F_max}};
  }
  if (!o.t_d_list.empty()) {
    GateScenario gs{rr.rates, rr.beta, kout, tg};
    const auto rows = decoherence_extension(gs, o.t_d_list);
    Table dt{{"t_d_s", "t_opt_s", "f_max"}, {}};
    for (const auto& row : rows) dt.add({row.T_d, row.t_opt, row.F_max});
    c.csv("decoherence.csv", dt);
  }
  c.json("optimum.json", j);
  c.out << "optimum: t_opt_s=" << format_csv_number(curve.t_opt) << " f_max=" << format_csv_number(curve.F_max)
        << "\n";
  if (c.opt.verify) {
    const auto p = gaussian_envelope(curve.t_opt);
    const double a = fidelity_from_overlaps(pulse_overlaps(rr.rates, rr.beta, kout, p), curve.t_opt, *T_d);
    const double b = fidelity_from_overlaps(pulse_overlaps_on_grid(rr.rates, rr.beta, kout, p), curve.t_opt, *T_d);
    c.check("adaptive vs grid quadrature at t_opt, |dF|", std::abs(a - b), 1e-6);
  }
}

std::string slug(const std::string& name) {
  std::string out;
  for (char ch : name) {
    if (std::isalnum(static_cast<unsigned char>(ch))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    else if (!out.empty() && out.back() != '_') out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "ion" : out;
}

void task_feasibility(Context& c) {
  const auto& o = c.s.feasibility;
  const auto k = logarithmic(o.k), q = logarithmic(o.q);
  const auto m = feasibility_map(c.s.ions, k, q);
  Table t{{"ion", "k", "Q", "fom", "feasible"}, {}};
  for (const auto& p : m.points) t.add({p.ion, p.k, p.Q, p.fom, p.feasible});
  c.csv("feasibility.csv", t);
  double worst = 0.0;
  for (std::size_t i = 0; i < m.contours.size(); ++i) {
    const auto& ct = m.contours[i];
    Table ctab{{"k", "q_threshold"}, {}};
    for (std::size_t j = 0; j < ct.k.size(); ++j) {
      ctab.add({ct.k[j], ct.q_threshold[j]});
      worst = std::max(worst, std::abs(strong_coupling_fom(c.s.ions[i], ct.q_threshold[j], ct.k[j]) - 1.0));
    }
    const std::string name = "contour_" + slug(ct.ion) + ".csv";
    c.csv(name, ctab);
    c.plot(name, LinePlot{"k", {"q_threshold"}, "normalized mode volume V/lambda^3", "threshold Q",
                          ct.ion + " strong-coupling threshold", 1.0, 1.0, true, true});
    c.out << ct.ion << ": Q threshold " << ct.q_threshold.front() << " .. " << ct.q_threshold.back() << "\n";
  }
  if (c.opt.verify) c.check("figure of merit on the contour, max |fom - 1|", worst, 1e-9);
}

ordered_json manifest_json(const RunManifest& m) {
  ordered_json outs = ordered_json::array();
  for (const auto& f : m.outputs) outs.push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.fnv1a}});
  ordered_json checks = ordered_json::array();
  for (const auto& k : m.checks) {
    checks.push_back({{"name", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"passed", k.passed},
                      {"diagnostic", k.diagnostic}});
  }
  ordered_json cal = ordered_json::object();
  for (const auto& [k, v] : m.calibration) cal[k] = v;
  return {{"tool_version", m.tool_version}, {"scenario", m.scenario_name},
          {"task", m.task},                 {"scenario_hash", m.scenario_hash},
          {"unit_convention", m.unit_convention}, {"calibration", cal},
          {"rate_overrides", m.overrides},  {"verify", checks},
          {"wall_clock_s", m.wall_clock_s}, {"outputs", outs}};
}

}  // namespace

const char* tool_version() { return REICQED_VERSION; }

std::string scenario_hash(const Scenario& s) { return hex64(fnv1a64(serialize(s))); }

RunManifest run(const Scenario& s, const RunOptions& options, std::ostream& out, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + options.out_dir + ": " + ec.message());
  Context c(s, options, out, log);
  auto& m = c.manifest;
  m.tool_version = tool_version();
  m.scenario_name = s.name;
  m.task = to_string(s.task);
  m.scenario_hash = scenario_hash(s);
  m.unit_convention = "ordinary frequency: rates and detunings in Hz (omega / 2 pi); SI otherwise";
  switch (s.task) {
    case Task::Params: task_params(c); break;
    case Task::Spectrum: task_spectrum(c); break;
    case Task::Map: task_map(c); break;
    case Task::Pamp: task_pamp(c); break;
    case Task::Transmission: task_transmission(c); break;
    case Task::Critical: task_critical(c); break;
    case Task::Fidelity: task_fidelity(c); break;
    case Task::Feasibility: task_feasibility(c); break;
  }
  m.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(c.path("manifest.json"), manifest_json(m).dump(2) + "\n");
  std::string failed;
  for (const auto& k : m.checks) {
    if (!k.passed && !k.diagnostic) failed += (failed.empty() ? "" : "; ") + k.name;
  }
  if (!failed.empty()) throw VerificationError("verification failed: " + failed);
  return m;
}

}  // namespace reicqed::cli
