#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"
#include "qfb/stationary.hpp"

using namespace qfb;

namespace {

WaveFunction random_state(std::size_t bath, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  WaveFunction psi(bath);
  for (cplx& a : psi.amplitudes()) a = cplx(gauss(rng), gauss(rng));
  const double s = 1.0 / psi.norm();
  for (cplx& a : psi.amplitudes()) a *= s;
  return psi;
}

template <class F>
ErrorCategory category_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected qfb::Error");
  return ErrorCategory::config;
}

Trajectory synthetic(double t_end, std::size_t n, auto&& signal) {
  Trajectory tr;
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = t_end * static_cast<double>(k) / static_cast<double>(n);
    tr.times.push_back(t);
    tr.p_c.push_back(signal(t));
  }
  return tr;
}

const PhysicalParams small_p = PhysicalParams::make(1, 1, 0.5, 0.0);
const ModeGrid small_grid = ModeGrid::make(small_p, 12.0, 200);

}  // namespace

TEST_CASE("derivative of the emitter basis vector reads off the generator column") {
  WaveFunction e(small_grid.size());
  e.ce() = 1.0;
  const WaveFunction d = derivative(e, small_p, small_grid);
  CHECK(d.ce() == cplx(0.0, 0.0));
  CHECK(d.cc() == cplx(0.0, 1.0));
  for (cplx x : d.bath()) CHECK(x == cplx(0.0, 0.0));
}

TEST_CASE("derivative of the dark state is a pure phase rotation") {
  const auto p = PhysicalParams::make(1, 1, 0.5, oracle::pi);
  const auto g = default_grid(p);
  const auto dark = dark_state(p, g);
  const WaveFunction d = derivative(dark.psi, p, g);
  double worst = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k)
    worst = std::max(worst, std::abs(d.amplitudes()[k] + cplx(0, 1) * dark.psi.amplitudes()[k]));
  CHECK(worst < 1e-12);
}

TEST_CASE("<c, dc/dt> is purely imaginary") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto c = random_state(small_grid.size(), seed);
    const auto d = derivative(c, small_p, small_grid);
    cplx ip = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) ip += std::conj(c.amplitudes()[k]) * d.amplitudes()[k];
    CHECK(std::abs(ip.real()) < 1e-13);
  }
}

TEST_CASE("derivative rejects a mis-sized state") {
  CHECK(category_of([] { derivative(WaveFunction(3), small_p, small_grid); }) == ErrorCategory::structural);
}

TEST_CASE("integrate: t_end = 0 returns the initial probabilities") {
  const auto c = random_state(small_grid.size(), 3);
  const auto tr = integrate(c, small_p, small_grid, 0.0, default_time_step(small_p, small_grid));
  REQUIRE(tr.size() == 1);
  CHECK(tr.p_e[0] == c.p_e());
  CHECK(tr.p_c[0] == c.p_c());
  CHECK(tr.p_bath[0] == doctest::Approx(c.p_bath()).epsilon(1e-15));
}

TEST_CASE("integrate: step-size, structural and diagnostic errors") {
  const auto c = random_state(small_grid.size(), 4);
  const double dt_max = max_time_step(small_p, small_grid);
  CHECK(dt_max == doctest::Approx(0.05 / 12.0));
  CHECK(category_of([&] { integrate(c, small_p, small_grid, 1.0, 1.01 * dt_max); }) == ErrorCategory::step_size);
  CHECK(category_of([&] { integrate(c, small_p, small_grid, 1.0, 0.0); }) == ErrorCategory::step_size);
  CHECK(category_of([&] { integrate(c, small_p, small_grid, -1.0, dt_max); }) == ErrorCategory::step_size);
  WaveFunction unnormalized = c;
  unnormalized.ce() += 0.1;
  CHECK(category_of([&] { integrate(unnormalized, small_p, small_grid, 1.0, dt_max); }) ==
        ErrorCategory::structural);
  // RK4 damps |λh| ≈ 0.65 modes by ~4e-8 per unit time, above the 1e-9 budget.
  CHECK(category_of([&] { integrate(c, small_p, small_grid, 10.0, dt_max); }) ==
        ErrorCategory::integration_diagnostic);
}

TEST_CASE("integrate lands exactly on t_end with a uniform step") {
  const auto c = random_state(small_grid.size(), 5);
  const double dt = default_time_step(small_p, small_grid);
  const auto tr = integrate(c, small_p, small_grid, 1.0, dt, {.snapshot_stride = 40});
  CHECK(tr.times.back() == 1.0);
  CHECK(tr.dt <= dt);
  CHECK(tr.size() == static_cast<std::size_t>(std::ceil(1.0 / dt - 1e-9)) + 1);
  CHECK(tr.snapshots.size() == (tr.size() - 1) / 40 + 1);
  CHECK(tr.snapshot_times[1] == doctest::Approx(40 * tr.dt));
}

TEST_CASE("integrate conserves norm, energy and probability sum") {
  for (unsigned seed = 10; seed < 13; ++seed) {
    const auto c = random_state(small_grid.size(), seed);
    const auto tr = integrate(c, small_p, small_grid, 10 * small_p.tau(),
                              default_time_step(small_p, small_grid));
    CHECK(tr.norm_drift < 1e-8);
    CHECK(tr.energy_drift < 1e-8);
    CHECK(tr.max_sum_defect < 1e-8);
  }
}

TEST_CASE("autonomous and time-dependent equations give the same |c_c|^2") {
  for (double dphi : {0.0, oracle::pi / 2, oracle::pi}) {
    const auto p = PhysicalParams::make(1, 1, 0.5, dphi);
    const auto g = ModeGrid::make(p, 12.0, 200);
    const auto c = random_state(g.size(), 21);
    const double t_end = 5 * p.tau();
    const double h = 0.25 * default_time_step(p, g);
    const auto tr = integrate(c, p, g, t_end, h);
    const auto bath = oracle::make_bath({1, 1, 0.5, dphi}, 12.0, 200);
    const std::vector<cplx> c0(c.amplitudes().begin(), c.amplitudes().end());
    const auto ref = oracle::time_dependent_pc({1, 1, 0.5, dphi}, bath, c0, t_end, tr.dt);
    REQUIRE(ref.size() == tr.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(ref[k] - tr.p_c[k]));
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("excited emitter leaks into the bath") {
  WaveFunction e(small_grid.size());
  e.ce() = 1.0;
  const auto tr = integrate(e, small_p, small_grid, 10 * small_p.tau(),
                            default_time_step(small_p, small_grid));
  CHECK(tr.p_e.back() + tr.p_c.back() < 0.5);
  CHECK(tr.p_bath.back() > 0.5);
}

TEST_CASE("spectral propagation matches RK4") {
  for (double dphi : {0.0, 1.0, oracle::pi}) {
    const auto p = PhysicalParams::make(1, 1, 0.5, dphi);
    const auto g = ModeGrid::make(p, 12.0, 300);
    const auto c = random_state(g.size(), 7);
    const double dt = default_time_step(p, g);
    const auto a = integrate(c, p, g, 20.0, dt);
    const auto b = propagate_spectral(c, p, g, 20.0, dt);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a.times[k] == doctest::Approx(b.times[k]).epsilon(1e-14));
      worst = std::max({worst, std::abs(a.p_c[k] - b.p_c[k]), std::abs(a.p_e[k] - b.p_e[k])});
    }
    CHECK(worst < 1e-8);
    CHECK(b.norm_drift < 1e-10);
    CHECK(b.energy_drift < 1e-10);
  }
}

TEST_CASE("perturb_stationary: identity and constraint") {
  const auto p = PhysicalParams::make(1, 1, 0.5, oracle::pi);
  const auto dark = dark_state(p, default_grid(p));
  const double a = dark.alpha_grid;
  const auto same = perturb_stationary(dark, 0.0);
  for (std::size_t k = 0; k < same.size(); ++k) CHECK(same.amplitudes()[k] == dark.psi.amplitudes()[k]);

  for (double s : {0.01, -0.01, 0.02, -0.02}) {
    const auto w = perturb_stationary(dark, s * a);
    CHECK(std::abs(w.p_e() + w.p_c() - 2 * a * a) < 1e-14);
    CHECK(std::abs(w.norm_squared() - 1.0) < 1e-12);
    for (std::size_t k = 0; k < w.bath_size(); ++k) CHECK(w.bath()[k] == dark.psi.bath()[k]);
  }
}

TEST_CASE("perturb_stationary: aligned 0.02 alpha matches the root-finder oracle") {
  const auto p = PhysicalParams::make(1, 1, 0.5, oracle::pi);
  const auto dark = dark_state(p, default_grid(p));
  const double a = dark.alpha_grid;
  const auto w = perturb_stationary(dark, 0.02 * a);
  const double x = std::abs(w.ce() - dark.psi.ce()) / a;
  // (1 − x)² = 2 − 1.02², smaller root.
  const double ref = oracle::bisect([](double y) { return (1 - y) * (1 - y) - (2 - 1.02 * 1.02); }, 0.0, 0.5);
  CHECK(x == doctest::Approx(ref).epsilon(1e-10));
  CHECK(x == doctest::Approx(0.0202).epsilon(0.015));
  // colinear with c̄_e and shrinking it
  CHECK(std::abs((w.ce() / dark.psi.ce()).imag()) < 1e-14);
  CHECK((w.ce() / dark.psi.ce()).real() > 0.0);
  CHECK(std::abs(w.ce()) < std::abs(dark.psi.ce()));
}

TEST_CASE("perturb_stationary: explicit phase and domain errors") {
  const auto p = PhysicalParams::make(1, 1, 0.5, oracle::pi);
  const auto dark = dark_state(p, default_grid(p));
  const double a = dark.alpha_grid;
  const auto w = perturb_stationary(dark, cplx(0, 0.01 * a), 0.5);
  CHECK(std::abs(w.p_e() + w.p_c() - 2 * a * a) < 1e-14);
  CHECK(category_of([&] { perturb_stationary(dark, 1.0 * a); }) == ErrorCategory::perturbation_domain);
  // Orthogonal emitter phase: |c_e|² can only grow, so a shrinking budget has no root.
  CHECK(category_of([&] { perturb_stationary(dark, 0.3 * a, oracle::pi / 2); }) ==
        ErrorCategory::perturbation_domain);
}

TEST_CASE("beat_spectrum finds synthetic tones") {
  const double t_end = 40 * 2 * oracle::pi;
  const auto tr = synthetic(t_end, 8000, [](double t) { return 0.3 + 0.01 * std::cos(2.5 * t) + 0.004 * std::cos(0.7 * t); });
  const auto s = beat_spectrum(tr, 1.0);
  CHECK(s.resolution == doctest::Approx(2 * oracle::pi / t_end));
  REQUIRE(s.peaks.size() == 2);
  CHECK(s.peaks[0].frequency == doctest::Approx(0.7).epsilon(s.resolution / 0.7 / 10));
  CHECK(s.peaks[1].frequency == doctest::Approx(2.5).epsilon(s.resolution / 2.5 / 10));
  CHECK(s.dominant().frequency == s.peaks[1].frequency);

  const auto limited = beat_spectrum(tr, 1.0, {.relative_threshold = 1e-2, .max_frequency = 1.0});
  REQUIRE(limited.peaks.size() == 1);
  const auto high = beat_spectrum(tr, 1.0, {.relative_threshold = 0.5});
  CHECK(high.peaks.size() == 1);
}

TEST_CASE("beat_spectrum: constant trajectory has no peaks") {
  const auto tr = synthetic(40 * 2 * oracle::pi, 4000, [](double) { return 0.25; });
  const auto s = beat_spectrum(tr, 1.0);
  CHECK(s.peaks.empty());
  CHECK(category_of([&] { (void)s.dominant(); }) == ErrorCategory::analysis);
}

TEST_CASE("beat_spectrum: analysis errors") {
  const auto shortspan = synthetic(10.0, 4000, [](double t) { return std::cos(t); });
  CHECK(category_of([&] { beat_spectrum(shortspan, 1.0); }) == ErrorCategory::analysis);
  const auto few = synthetic(40 * 2 * oracle::pi, 20, [](double t) { return std::cos(t); });
  CHECK(category_of([&] { beat_spectrum(few, 1.0); }) == ErrorCategory::analysis);
  auto uneven = synthetic(40 * 2 * oracle::pi, 4000, [](double t) { return std::cos(t); });
  uneven.times[100] += 0.3 * (uneven.times[101] - uneven.times[100]);
  CHECK(category_of([&] { beat_spectrum(uneven, 1.0); }) == ErrorCategory::analysis);
}

TEST_CASE("perturbed node dark state beats near the vacuum Rabi frequency") {
  const auto p = PhysicalParams::make(1, 1, 0.5, oracle::pi);
  const auto g = default_grid(p);
  const auto dark = dark_state(p, g);
  const auto psi = perturb_stationary(dark, 0.01 * dark.alpha_grid);
  const auto tr = integrate(psi, p, g, 20 * p.tau(), default_time_step(p, g));
  const auto s = beat_spectrum(tr, 1.0);
  CHECK(s.dominant().frequency == doctest::Approx(2.0).epsilon(s.resolution / 2.0));
}
