#include "qfb/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "qfb/csv.hpp"
#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"
#include "qfb/selfcheck.hpp"
#include "qfb/spectrum.hpp"
#include "qfb/stability.hpp"
#include "qfb/stationary.hpp"

namespace qfb {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"stationary", "evolve",    "jacobian", "roots",
                                             "critical-r", "sweep",     "check"};
  return s;
}

std::string error_json(const std::exception& e) {
  json j;
  if (const auto* q = dynamic_cast<const Error*>(&e)) {
    j["error"] = {{"category", to_string(q->category())},
                  {"module", q->module()},
                  {"field", q->field()},
                  {"message", q->what()}};
  } else {
    j["error"] = {{"category", "internal"}, {"module", ""}, {"field", ""}, {"message", e.what()}};
  }
  return j.dump();
}

namespace {

class Run {
 public:
  Run(std::string_view sub, const RunConfig& cfg)
      : sub_(sub), cfg_(cfg), start_(std::chrono::steady_clock::now()) {
    dir_ = cfg.output_dir;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
      throw Error(ErrorCategory::config, "cli", "output_dir",
                  "cannot create " + dir_.string() + ": " + ec.message());
  }

  json& diagnostics() { return diag_; }

  void table(const std::string& suffix, const std::string& schema, const CsvTable& t) {
    const std::string name = cfg_.tag + suffix + ".csv";
    t.write(dir_ / name);
    outputs_.push_back({{"file", name},
                        {"schema", schema},
                        {"schema_version", csv_schema_version},
                        {"columns", t.columns()},
                        {"rows", t.rows()}});
  }

  void finish(std::ostream& out, const json& summary) {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["schema_version"] = manifest_schema_version;
    m["tool"] = "qfb";
    m["tool_version"] = tool_version;
    m["subcommand"] = sub_;
    m["config"] = cfg_.to_json();
    try {
      const PhysicalParams p = cfg_.params();
      m["derived"] = {{"kappa", p.kappa()},
                      {"tau_g", p.tau_g()},
                      {"tau", p.tau()},
                      {"G0", p.G0()},
                      {"delta_phi_normalized", p.delta_phi()}};
    } catch (const Error&) {
      m["derived"] = nullptr;
    }
    m["outputs"] = outputs_;
    m["diagnostics"] = diag_;
    m["wall_time_s"] = wall;
    std::ofstream os(dir_ / (cfg_.tag + ".manifest.json"));
    os << std::setw(2) << m << '\n';
    out << summary.dump() << '\n';
  }

 private:
  std::string sub_;
  RunConfig cfg_;
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  json outputs_ = json::array();
  json diag_ = json::object();
};

EigenMethod parse_method(const std::string& m) {
  if (m == "dense") return EigenMethod::dense;
  if (m == "secular") return EigenMethod::secular;
  return EigenMethod::automatic;
}

Window window_of(const RunConfig& cfg) {
  return {parse_angle(cfg.window_lo), parse_angle(cfg.window_hi)};
}

int cmd_stationary(const RunConfig& cfg, std::ostream& out) {
  Run run("stationary", cfg);
  const PhysicalParams p = cfg.params();
  const ModeGrid grid = cfg.grid(p);
  const DarkState dark = dark_state(p, grid);

  CsvTable t({"delta", "re_c", "im_c"});
  const auto d = grid.detunings();
  const auto b = dark.psi.bath();
  for (std::size_t j = 0; j < d.size(); ++j) t.add_row({d[j], b[j].real(), b[j].imag()});
  run.table("", "qfb.stationary", t);

  json s = {{"alpha_grid", dark.alpha_grid},
            {"alpha_closed", dark.alpha_closed},
            {"residual", dark.residual},
            {"approximate", dark.approximate},
            {"c_e", dark.psi.ce().real()},
            {"c_c", dark.psi.cc().real()},
            {"norm", dark.psi.norm()}};
  run.diagnostics() = s;
  run.finish(out, s);
  return exit_ok;
}

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
  Run run("evolve", cfg);
  const PhysicalParams p = cfg.params();
  const ModeGrid grid = cfg.grid(p);
  const DarkState dark = dark_state(p, grid);

  WaveFunction psi;
  if (cfg.initial == "dark") {
    psi = dark.psi;
  } else if (cfg.initial == "excited") {
    psi = WaveFunction(grid.size());
    psi.ce() = 1.0;
  } else {
    const double phase = std::arg(dark.psi.cc()) + cfg.delta_cc_phase;
    std::optional<double> ce_phase;
    if (cfg.delta_ce_phase != "auto") ce_phase = parse_angle(cfg.delta_ce_phase);
    psi = perturb_stationary(dark, std::polar(cfg.delta_cc * dark.alpha_grid, phase), ce_phase);
  }

  IntegrateOptions opt;
  opt.snapshot_stride = static_cast<std::size_t>(cfg.snapshot_stride);
  const Trajectory tr = integrate(psi, p, grid, cfg.t_end, cfg.dt, opt);

  CsvTable t({"t", "p_e", "p_c", "p_bath"});
  for (std::size_t k = 0; k < tr.size(); ++k)
    t.add_row({tr.times[k], tr.p_e[k], tr.p_c[k], tr.p_bath[k]});
  run.table("", "qfb.evolve", t);

  if (!tr.snapshots.empty()) {
    CsvTable s({"t", "index", "re", "im"});
    for (std::size_t k = 0; k < tr.snapshots.size(); ++k) {
      const auto a = tr.snapshots[k].amplitudes();
      for (std::size_t i = 0; i < a.size(); ++i)
        s.add_row({tr.snapshot_times[k], static_cast<std::int64_t>(i), a[i].real(), a[i].imag()});
    }
    run.table(".snapshots", "qfb.snapshots", s);
  }

  const double a2 = dark.alpha_grid * dark.alpha_grid;
  double flat = 0.0;
  for (double pc : tr.p_c) flat = std::max(flat, std::abs(pc - a2));
  json d = {{"steps", tr.size() - 1},
            {"dt_used", tr.dt},
            {"norm_drift", tr.norm_drift},
            {"energy_drift", tr.energy_drift},
            {"max_sum_defect", tr.max_sum_defect},
            {"alpha_grid", dark.alpha_grid},
            {"max_abs_pc_minus_alpha2", flat}};

  if (tr.t_end() >= 20.0 * p.tau_g() && tr.size() >= 64) {
    BeatOptions bo;
    bo.relative_threshold = cfg.peak_threshold;
    const BeatSpectrum bs = beat_spectrum(tr, p.omega_g(), bo);
    CsvTable pk({"omega", "omega_over_omega_g", "power"});
    for (const SpectralPeak& s : bs.peaks)
      pk.add_row({s.frequency, s.frequency / p.omega_g(), s.power});
    run.table(".peaks", "qfb.peaks", pk);
    d["fft_resolution"] = bs.resolution;
    d["dominant_peak"] = bs.peaks.empty() ? json(nullptr) : json(bs.dominant().frequency);
  }
  run.diagnostics() = d;
  run.finish(out, d);
  return exit_ok;
}

int cmd_jacobian(const RunConfig& cfg, std::ostream& out) {
  Run run("jacobian", cfg);
  const PhysicalParams p = cfg.params();
  const ModeGrid grid = cfg.grid(p);
  const JacobianOperator jac = JacobianOperator::build(p, grid);
  const ModeSpectrum spec = eigenmodes(jac, parse_method(cfg.method));

  CsvTable t({"mu", "weight", "omega_osc"});
  for (std::size_t k = 0; k < spec.size(); ++k)
    t.add_row({spec.mu[k], spec.weights[k], spec.osc[k]});
  run.table("", "qfb.jacobian", t);

  const auto vis = visible_modes(spec, cfg.weight_threshold, cfg.dedup_tol);
  CsvTable v({"omega_osc", "weight"});
  std::vector<double> osc;
  for (const VisibleMode& m : vis) {
    v.add_row({m.osc, m.weight});
    osc.push_back(m.osc);
  }
  run.table(".visible", "qfb.visible", v);

  json d = {{"dimension", jac.dimension()},
            {"method", to_string(spec.method)},
            {"skew_defect", spec.skew_defect},
            {"max_abs_re_lambda", spec.max_abs_re_lambda},
            {"max_abs_lambda", spec.max_abs_lambda},
            {"weight_sum", spec.weight_sum},
            {"max_residual", spec.max_residual},
            {"visible_count", vis.size()},
            {"visible_symmetry_defect", symmetry_defect(osc, p.omega_g(), 4.0 * p.omega_g())}};
  run.diagnostics() = d;
  run.finish(out, d);
  return exit_ok;
}

int cmd_roots(const RunConfig& cfg, std::ostream& out) {
  Run run("roots", cfg);
  const CharEqn eqn(cfg.params(), parse_kernel(cfg.kernel));
  const RootSet rs = find_roots(eqn, window_of(cfg), static_cast<std::size_t>(cfg.scan_points));
  const double wg = eqn.params().omega_g();

  CsvTable t({"omega_osc", "omega_osc_over_omega_g", "kind", "residual"});
  for (double r : rs.roots) t.add_row({r, r / wg, std::string("root"), eqn(r)});
  for (double r : rs.marginal) t.add_row({r, r / wg, std::string("marginal"), eqn(r)});
  run.table("", "qfb.roots", t);

  json d = {{"root_count", rs.roots.size()},
            {"marginal_count", rs.marginal.size()},
            {"bracket_resolution", rs.bracket_resolution},
            {"max_residual", rs.max_residual},
            {"scan_points", rs.scan_points}};
  run.diagnostics() = d;
  run.finish(out, d);
  return exit_ok;
}

json critical_json(const CriticalR& c) {
  return {{"n", c.n},
          {"delta_phi", c.delta_phi},
          {"kernel", to_string(c.kernel)},
          {"R_bar", c.R_bar},
          {"R_lo", c.R_lo},
          {"R_hi", c.R_hi},
          {"baseline_count", c.baseline_count},
          {"count_above", c.count_above},
          {"R_fold", c.R_fold},
          {"omega_fold", c.omega_fold},
          {"pitchfork", c.pitchfork},
          {"fold_converged", c.fold_converged},
          {"cross_validated", c.cross_validated},
          {"monotonicity_violations", c.monotonicity_violations}};
}

int cmd_critical(const RunConfig& cfg, std::ostream& out) {
  Run run("critical-r", cfg);
  CsvTable t({"n", "delta_phi", "kernel", "R_bar", "R_lo", "R_hi", "R_fold", "omega_fold",
              "baseline_count", "count_above", "cross_validated", "n_R_bar"});
  auto add = [&](const CriticalR& c) {
    t.add_row({static_cast<std::int64_t>(c.n), c.delta_phi, std::string(to_string(c.kernel)),
               c.R_bar, c.R_lo, c.R_hi, c.R_fold, c.omega_fold,
               static_cast<std::int64_t>(c.baseline_count),
               static_cast<std::int64_t>(c.count_above),
               std::string(c.cross_validated ? "true" : "false"), c.n * c.R_bar});
  };
  json d;
  if (cfg.product_law) {
    json rows = json::array();
    bool all = true;
    for (const ProductLawRow& r : product_law(cfg.n_max)) {
      add(r.critical);
      json j = critical_json(r.critical);
      j["product"] = r.product;
      j["rel_error"] = r.rel_error;
      j["pass"] = r.pass;
      all = all && r.pass;
      rows.push_back(j);
    }
    d = {{"product_law", rows}, {"target", 1.0 / two_pi}, {"all_pass", all}};
  } else {
    const CriticalR c = critical_R(cfg.n, cfg.delta_phi, parse_kernel(cfg.kernel));
    add(c);
    d = critical_json(c);
  }
  run.table("", "qfb.critical", t);
  run.diagnostics() = d;
  run.finish(out, d);
  return exit_ok;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  Run run("sweep", cfg);
  const Kernel kernel = parse_kernel(cfg.kernel);
  const auto grid = log2_grid(cfg.log2R_min, cfg.log2R_max, cfg.log2R_step);
  std::vector<int> ns{cfg.n};
  if (cfg.figure == "fig6") {
    ns.clear();
    for (int n = 1; n <= cfg.n_max; ++n) ns.push_back(n);
  }
  const bool fixed_window = cfg.figure != "fig6";

  CsvTable t({"n", "delta_phi", "kernel", "log2R", "R", "branch", "omega_osc_over_omega_g"});
  json per_n = json::array();
  for (int n : ns) {
    std::optional<Window> w;
    if (fixed_window) w = window_of(cfg);
    const auto rows = sweep(n, cfg.delta_phi, kernel, grid, w, static_cast<unsigned>(cfg.threads));
    std::size_t total = 0;
    std::vector<double> violations;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      for (std::size_t b = 0; b < r.roots.roots.size(); ++b)
        t.add_row({static_cast<std::int64_t>(n), normalize_phase(cfg.delta_phi),
                   std::string(to_string(kernel)), r.log2R, r.R, static_cast<std::int64_t>(b),
                   r.roots.roots[b]});
      total += r.roots.size();
      if (k > 0 && r.roots.size() < rows[k - 1].roots.size()) violations.push_back(r.log2R);
    }
    per_n.push_back({{"n", n}, {"rows", rows.size()}, {"roots", total},
                     {"count_decreases_at_log2R", violations}});
  }
  run.table("", "qfb.sweep", t);
  json d = {{"sweeps", per_n}};
  run.diagnostics() = d;
  run.finish(out, d);
  return exit_ok;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  Run run("check", cfg);
  const auto items = run_selfcheck(cfg);
  CsvTable t({"check", "pass", "value", "limit"});
  bool all = true;
  out << std::left;
  for (const CheckItem& c : items) {
    t.add_row({c.name, std::string(c.pass ? "true" : "false"), c.value, c.limit});
    all = all && c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << std::setw(24) << c.name << ' '
        << format_number(c.value) << " (limit " << format_number(c.limit) << ")";
    if (!c.detail.empty()) out << "  " << c.detail;
    out << '\n';
  }
  run.table("", "qfb.check", t);
  json d = {{"checks", items.size()}, {"all_pass", all}};
  run.diagnostics() = d;
  run.finish(out, d);
  return all ? exit_ok : exit_check_failed;
}

}  // namespace

int run_command(std::string_view subcommand, RunConfig cfg, std::ostream& out) {
  cfg.resolve(subcommand);
  if (subcommand == "stationary") return cmd_stationary(cfg, out);
  if (subcommand == "evolve") return cmd_evolve(cfg, out);
  if (subcommand == "jacobian") return cmd_jacobian(cfg, out);
  if (subcommand == "roots") return cmd_roots(cfg, out);
  if (subcommand == "critical-r") return cmd_critical(cfg, out);
  if (subcommand == "sweep") return cmd_sweep(cfg, out);
  if (subcommand == "check") return cmd_check(cfg, out);
  throw Error(ErrorCategory::config, "cli", "subcommand",
              "unknown subcommand '" + std::string(subcommand) + "'");
}

}  // namespace qfb
