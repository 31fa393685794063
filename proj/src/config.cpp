#include "qfb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "qfb/csv.hpp"
#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"
#include "qfb/spectrum.hpp"

namespace qfb {

namespace {

Error bad(std::string_view key, const std::string& msg) {
  return Error(ErrorCategory::config, "cli", std::string(key), msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(std::string_view key, std::string_view v) {
  v = trim(v);
  double x = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(x))
    throw bad(key, "expected a real number for '" + std::string(key) + "', got '" +
                       std::string(v) + "'");
  return x;
}

long long parse_int(std::string_view key, std::string_view v) {
  v = trim(v);
  long long x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw bad(key, "expected an integer for '" + std::string(key) + "', got '" +
                       std::string(v) + "'");
  return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw bad(key, "expected true/false for '" + std::string(key) + "'");
}

double parse_angle_for(std::string_view key, std::string_view v) {
  v = trim(v);
  const auto p = v.find("pi");
  if (p == std::string_view::npos) return parse_real(key, v);
  const std::string_view coef = trim(v.substr(0, p));
  std::string_view rest = trim(v.substr(p + 2));
  double c = 1.0;
  if (coef == "-") c = -1.0;
  else if (!coef.empty()) c = parse_real(key, coef.back() == '*' ? coef.substr(0, coef.size() - 1) : coef);
  double den = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') throw bad(key, "malformed angle '" + std::string(v) + "'");
    den = parse_real(key, rest.substr(1));
    if (den == 0.0) throw bad(key, "division by zero in angle");
  }
  return c * pi / den;
}

using Setter = std::function<void(RunConfig&, std::string_view, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = [] {
    std::map<std::string, Setter, std::less<>> t;
    auto real = [&](const char* k, double RunConfig::*f) {
      t[k] = [f](RunConfig& c, std::string_view key, std::string_view v) { c.*f = parse_real(key, v); };
    };
    auto angle = [&](const char* k, double RunConfig::*f) {
      t[k] = [f](RunConfig& c, std::string_view key, std::string_view v) { c.*f = parse_angle_for(key, v); };
    };
    auto integer = [&](const char* k, long long RunConfig::*f) {
      t[k] = [f](RunConfig& c, std::string_view key, std::string_view v) { c.*f = parse_int(key, v); };
    };
    auto small = [&](const char* k, int RunConfig::*f) {
      t[k] = [f](RunConfig& c, std::string_view key, std::string_view v) {
        const long long x = parse_int(key, v);
        if (x < -1000000 || x > 1000000) throw bad(key, "value out of range");
        c.*f = static_cast<int>(x);
      };
    };
    auto text = [&](const char* k, std::string RunConfig::*f) {
      t[k] = [f](RunConfig& c, std::string_view, std::string_view v) { c.*f = std::string(trim(v)); };
    };
    real("omega_g", &RunConfig::omega_g);
    small("n", &RunConfig::n);
    real("R", &RunConfig::R);
    angle("delta_phi", &RunConfig::delta_phi);
    text("kernel", &RunConfig::kernel);
    real("W", &RunConfig::W);
    integer("P", &RunConfig::P);
    real("dt", &RunConfig::dt);
    real("t_end", &RunConfig::t_end);
    integer("snapshot_stride", &RunConfig::snapshot_stride);
    text("initial", &RunConfig::initial);
    real("delta_cc", &RunConfig::delta_cc);
    angle("delta_cc_phase", &RunConfig::delta_cc_phase);
    text("delta_ce_phase", &RunConfig::delta_ce_phase);
    real("peak_threshold", &RunConfig::peak_threshold);
    text("method", &RunConfig::method);
    real("weight_threshold", &RunConfig::weight_threshold);
    real("dedup_tol", &RunConfig::dedup_tol);
    text("window_lo", &RunConfig::window_lo);
    text("window_hi", &RunConfig::window_hi);
    integer("scan_points", &RunConfig::scan_points);
    real("log2R_min", &RunConfig::log2R_min);
    real("log2R_max", &RunConfig::log2R_max);
    real("log2R_step", &RunConfig::log2R_step);
    small("n_max", &RunConfig::n_max);
    t["product_law"] = [](RunConfig& c, std::string_view key, std::string_view v) {
      c.product_law = parse_bool(key, v);
    };
    text("figure", &RunConfig::figure);
    integer("threads", &RunConfig::threads);
    text("output_dir", &RunConfig::output_dir);
    text("tag", &RunConfig::tag);
    return t;
  }();
  return table;
}

}  // namespace

double parse_angle(std::string_view text) { return parse_angle_for("angle", text); }

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : setters()) out.push_back(name);
    return out;
  }();
  return k;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const auto it = setters().find(key);
  if (it == setters().end())
    throw bad(key, "unknown configuration key '" + std::string(key) + "'");
  it->second(*this, key, value);
}

void RunConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw bad("config", "cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw bad("config", path.string() + ":" + std::to_string(lineno) +
                              ": expected key = value");
    set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
}

void RunConfig::resolve(std::string_view subcommand) {
  if (output_dir.empty()) {
    const char* env = std::getenv("QFB_OUTPUT_DIR");
    output_dir = env && *env ? env : "out";
  }
  if (tag.empty()) tag = std::string(subcommand);

  if (!figure.empty()) {
    static const std::map<std::string, double, std::less<>> fig5 = {
        {"fig5a", 0.0}, {"fig5b", 0.5 * pi}, {"fig5c", pi}, {"fig5d", 1.5 * pi}};
    if (const auto it = fig5.find(figure); it != fig5.end()) {
      n = 1;
      delta_phi = it->second;
    } else if (figure == "fig6") {
      delta_phi = 0.0;
      n_max = 4;
    } else {
      throw bad("figure", "unknown figure preset '" + figure + "' (fig5a..fig5d, fig6)");
    }
    kernel = "sin";
  }

  (void)parse_kernel(kernel);
  if (method != "auto" && method != "dense" && method != "secular")
    throw bad("method", "method must be auto, dense or secular");
  if (initial != "dark" && initial != "excited" && initial != "perturbed")
    throw bad("initial", "initial must be dark, excited or perturbed");
  if (delta_ce_phase != "auto") (void)parse_angle_for("delta_ce_phase", delta_ce_phase);
  if (threads < 0 || scan_points < 0 || P < 0 || snapshot_stride < 0)
    throw bad("config", "counts must be non-negative");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  const PhysicalParams p = params();
  if (W == 0.0 && P == 0) {
    const ModeGrid g = default_grid(p);
    W = g.half_bandwidth();
    P = static_cast<long long>(g.num_pairs());
  } else if (P == 0) {
    P = static_cast<long long>(
        std::max(1500.0, std::ceil(W / (0.8 * max_grid_spacing(p)))));
  } else if (W == 0.0) {
    W = std::max(12.0 * p.omega_g(), 4.0 * p.kappa());
  }
  if (t_end == 0.0) t_end = 10.0 * p.tau();

  const bool needs_grid = subcommand == "stationary" || subcommand == "evolve" ||
                          subcommand == "jacobian";
  if (dt == 0.0) {
    dt = needs_grid ? default_time_step(p, grid(p))
                    : 0.01 / std::max({W, p.omega_g(), p.kappa()});
  }

  const Window w = default_window(p);
  if (window_lo == "auto") window_lo = format_number(w.lo);
  if (window_hi == "auto") window_hi = format_number(w.hi);
  const Window chosen{parse_real("window_lo", window_lo), parse_real("window_hi", window_hi)};
  if (scan_points == 0 && chosen.hi > chosen.lo)
    scan_points = static_cast<long long>(default_scan_points(p, chosen));
}

PhysicalParams RunConfig::params() const {
  return PhysicalParams::make(omega_g, n, R, delta_phi);
}

ModeGrid RunConfig::grid(const PhysicalParams& p) const {
  if (W == 0.0 && P == 0) return default_grid(p);
  if (W <= 0.0 || P <= 0)
    throw Error(ErrorCategory::grid_resolution, "core-model", "W",
                "W and P must both be positive once resolved");
  return ModeGrid::make(p, W, static_cast<std::size_t>(P));
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["omega_g"] = omega_g;
  j["n"] = n;
  j["R"] = R;
  j["delta_phi"] = delta_phi;
  j["kernel"] = kernel;
  j["W"] = W;
  j["P"] = P;
  j["dt"] = dt;
  j["t_end"] = t_end;
  j["snapshot_stride"] = snapshot_stride;
  j["initial"] = initial;
  j["delta_cc"] = delta_cc;
  j["delta_cc_phase"] = delta_cc_phase;
  j["delta_ce_phase"] = delta_ce_phase;
  j["peak_threshold"] = peak_threshold;
  j["method"] = method;
  j["weight_threshold"] = weight_threshold;
  j["dedup_tol"] = dedup_tol;
  j["window_lo"] = window_lo;
  j["window_hi"] = window_hi;
  j["scan_points"] = scan_points;
  j["log2R_min"] = log2R_min;
  j["log2R_max"] = log2R_max;
  j["log2R_step"] = log2R_step;
  j["n_max"] = n_max;
  j["product_law"] = product_law;
  j["figure"] = figure;
  j["threads"] = threads;
  j["output_dir"] = output_dir;
  j["tag"] = tag;
  return j;
}

}  // namespace qfb
