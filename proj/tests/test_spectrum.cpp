#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qfb/error.hpp"
#include "qfb/spectrum.hpp"

using namespace qfb;

namespace {

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

CharEqn eqn(int n, double R, double dphi, Kernel k = Kernel::sin) {
  return CharEqn(PhysicalParams::make(1, n, R, dphi), k);
}

}  // namespace

TEST_CASE("char_fn vanishes at 0 and 2 omega_g for delta_phi = 0") {
  for (int n : {1, 2, 5})
    for (double R : {0.01, 0.5, 64.0}) {
      const auto e = eqn(n, R, 0.0);
      CHECK(char_fn(e, 0.0) == 0.0);
      CHECK(std::abs(char_fn(e, 2.0)) < 1e-12 * R);
    }
}

TEST_CASE("char_fn and its derivatives match the oracle") {
  const oracle::System s{1.0, 2, 0.37, 1.1};
  const auto e = eqn(2, 0.37, 1.1);
  const double h = 1e-5;
  for (double w : {-2.3, 0.1, 1.7, 3.9}) {
    CHECK(e(w) == doctest::Approx(oracle::char_eq(s, w)).epsilon(1e-13).scale(1.0));
    const auto f = [&](double x) { return oracle::char_eq(s, x); };
    CHECK(e.d_omega(w) == doctest::Approx((f(w + h) - f(w - h)) / (2 * h)).epsilon(1e-7).scale(1.0));
    CHECK(e.d2_omega(w) == doctest::Approx((f(w + h) - 2 * f(w) + f(w - h)) / (h * h)).epsilon(1e-4).scale(1.0));
    auto fr = [&](double R) { return oracle::char_eq({1.0, 2, R, 1.1}, w); };
    CHECK(e.d_R(w) == doctest::Approx((fr(0.37 + h) - fr(0.37 - h)) / (2 * h)).epsilon(1e-7).scale(1.0));
    auto fwR = [&](double R) {
      return (oracle::char_eq({1.0, 2, R, 1.1}, w + h) - oracle::char_eq({1.0, 2, R, 1.1}, w - h)) / (2 * h);
    };
    CHECK(e.d_omega_R(w) == doctest::Approx((fwR(0.37 + h) - fwR(0.37 - h)) / (2 * h)).epsilon(1e-4).scale(1.0));
  }
  const auto c = eqn(2, 0.37, 1.1, Kernel::cos);
  for (double w : {-1.0, 0.5, 2.5})
    CHECK(c(w) == doctest::Approx(oracle::char_eq_cos(s, w)).epsilon(1e-13).scale(1.0));
}

TEST_CASE("kernel parsing") {
  CHECK(parse_kernel("sin") == Kernel::sin);
  CHECK(parse_kernel("cos") == Kernel::cos);
  CHECK(to_string(Kernel::cos) == "cos");
  CHECK(category_of([] { parse_kernel("tan"); }) == ErrorCategory::config);
}

TEST_CASE("weak coupling: only the forced roots 0 and 2 omega_g") {
  const auto e = eqn(1, 0.05, 0.0);
  const auto r = find_roots(e, {-2.0, 4.0});
  REQUIRE(r.roots.size() == 2);
  CHECK(std::abs(r.roots[0]) < 1e-12);
  CHECK(std::abs(r.roots[1] - 2.0) < 1e-12);
  CHECK(r.marginal.empty());
  const oracle::System s{1.0, 1, 0.05, 0.0};
  CHECK(oracle::scan_roots([&](double w) { return oracle::char_eq(s, w); }, -2.0 + 1e-7, 4.0, 200000).size() == 2);
}

TEST_CASE("strong coupling R = 0.5: at least six roots, matching a dense oracle scan") {
  const auto e = eqn(1, 0.5, 0.0);
  const auto r = find_roots(e);
  CHECK(r.roots.size() >= 6);
  CHECK(r.max_residual < 1e-10);
  const oracle::System s{1.0, 1, 0.5, 0.0};
  // Offset the scan so the exact roots at 0 and 2 are not grid points.
  const auto ref = oracle::scan_roots([&](double w) { return oracle::char_eq(s, w); },
                                      r.window.lo + 1.234e-6, r.window.hi, 400000);
  REQUIRE(ref.size() == r.roots.size());
  for (std::size_t k = 0; k < ref.size(); ++k) CHECK(r.roots[k] == doctest::Approx(ref[k]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("root sets are symmetric about omega_g for delta_phi in {0, pi}") {
  for (double dphi : {0.0, oracle::pi})
    for (double R : {0.3, 0.7, 4.0}) {
      const auto r = find_roots(eqn(1, R, dphi));
      const std::size_t m = r.roots.size();
      for (std::size_t k = 0; k < m; ++k)
        CHECK(std::abs((r.roots[k] - 1.0) + (r.roots[m - 1 - k] - 1.0)) < 1e-10);
    }
}

TEST_CASE("find_roots resolution bound") {
  const auto e = eqn(4, 0.1, 0.0);
  const Window w = default_window(e.params());
  CHECK(w.lo == doctest::Approx(-3.0 - 0.25));
  CHECK(w.hi == doctest::Approx(5.0 + 0.25));
  const std::size_t need = min_scan_points(e.params(), w);
  CHECK(need == static_cast<std::size_t>(std::ceil(16 * 8.5 * 4)));
  CHECK(category_of([&] { find_roots(e, w, need - 1); }) == ErrorCategory::resolution);
  CHECK_NOTHROW(find_roots(e, w, need));
  CHECK(default_scan_points(e.params(), w) == static_cast<std::size_t>(std::ceil(2048 * 8.5 * 4)) + 1);
}

TEST_CASE("marginal roots are reported at a tangency") {
  // f(ω) = (ω−1)² − κ(ω−1)·sin(ωτ−Δφ) − 1 touching zero: take the fold found by critical_R.
  const auto c = critical_R(1, oracle::pi);
  REQUIRE(c.fold_converged);
  const auto r = find_roots(eqn(1, c.R_fold, oracle::pi));
  bool seen = false;
  for (double m : r.marginal) seen |= std::abs(m - c.omega_fold) < 1e-6;
  for (double m : r.roots) seen |= std::abs(m - c.omega_fold) < 1e-4;
  CHECK(seen);
}

TEST_CASE("critical_R for delta_phi = 0 is cross-validated by the fold") {
  for (int n = 1; n <= 2; ++n) {
    const auto c = critical_R(n, 0.0);
    CHECK(c.cross_validated);
    CHECK(c.R_hi - c.R_lo <= 1e-4);
    CHECK(c.R_lo <= c.R_bar);
    CHECK(c.R_bar <= c.R_hi);
    CHECK(c.baseline_count == 2);
    CHECK(c.count_above > c.baseline_count);
    CHECK(c.monotonicity_violations.empty());
    CHECK(count_roots(eqn(n, c.R_lo, 0.0), default_window(eqn(n, c.R_lo, 0.0).params()),
                      default_scan_points(eqn(n, c.R_lo, 0.0).params(), default_window(eqn(n, c.R_lo, 0.0).params()))) == 2);
  }
}

TEST_CASE("critical_R for delta_phi = pi: emerging pair near 2.75 omega_g") {
  const auto c = critical_R(1, oracle::pi);
  CHECK(c.cross_validated);
  CHECK_FALSE(c.pitchfork);
  CHECK(c.omega_fold == doctest::Approx(2.75).epsilon(0.05 / 2.75));
  const auto e = eqn(1, c.R_fold, oracle::pi);
  CHECK(std::abs(e(c.omega_fold)) < 1e-10);
  CHECK(std::abs(e.d_omega(c.omega_fold)) < 1e-8);
}

TEST_CASE("critical_R reports not-found when the range is too narrow") {
  CriticalOptions o;
  o.R_min = 1e-3;
  o.R_max = 0.01;
  CHECK(category_of([&] { critical_R(1, 0.0, Kernel::sin, o); }) == ErrorCategory::not_found);
}

TEST_CASE("product law constant") {
  const auto rows = product_law(2);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.product == doctest::Approx(r.n * r.critical.R_bar));
    CHECK(r.rel_error == doctest::Approx(std::abs(r.product * 2 * oracle::pi - 1.0)));
    CHECK(r.pass == (r.rel_error < 0.02));
  }
}

TEST_CASE("dimer mapping is exact") {
  for (double dphi : {0.0, 0.5 * oracle::pi, oracle::pi, 1.5 * oracle::pi, 0.3})
    for (double R : {0.1, 0.5, 3.0}) {
      const auto a = find_roots(eqn(1, R, dphi, Kernel::cos));
      const auto b = find_roots(eqn(1, R, dphi - 0.5 * oracle::pi));
      CHECK(a.roots == b.roots);
      CHECK(a.marginal == b.marginal);
    }
}

TEST_CASE("log2 grid") {
  const auto g = log2_grid();
  REQUIRE(g.size() == 193);
  CHECK(g.front() == -6.0);
  CHECK(g.back() == 6.0);
  CHECK(g[16] == -5.0);
}

TEST_CASE("sweep is deterministic and independent of the thread count") {
  const auto grid = log2_grid(-3, 1, 0.25);
  const auto a = sweep(1, 0.0, Kernel::sin, grid, {}, 1);
  const auto b = sweep(1, 0.0, Kernel::sin, grid, {}, 4);
  REQUIRE(a.size() == grid.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].log2R == grid[k]);
    CHECK(a[k].R == std::exp2(grid[k]));
    CHECK(a[k].roots.roots == b[k].roots.roots);
  }
}

TEST_CASE("root count is monotone in R for delta_phi in {0, pi}") {
  for (double dphi : {0.0, oracle::pi}) {
    const auto rows = sweep(1, dphi, Kernel::sin, log2_grid(-6, 3.3, 1.0 / 16.0));
    for (std::size_t k = 1; k < rows.size(); ++k)
      CHECK(rows[k].roots.size() >= rows[k - 1].roots.size());
  }
}

TEST_CASE("branch count at fixed R grows with n") {
  const Window w{-3.0, 5.0};
  std::size_t prev = 0;
  for (int n = 1; n <= 4; ++n) {
    const auto p = PhysicalParams::make(1, n, 1.0, 0.0);
    const std::size_t c = count_roots(CharEqn(p), w, default_scan_points(p, w));
    CHECK(c > prev);
    prev = c;
  }
}

TEST_CASE("large R: roots approach the free spectral range") {
  const auto e = eqn(1, 64.0, 0.0);
  const auto r = find_roots(e);
  const double fsr = oracle::pi / e.params().tau();
  std::size_t checked = 0;
  for (std::size_t k = 1; k < r.roots.size(); ++k) {
    // f(ω_g) = −ω_g² for every R, so no root sits at ω_g.
    if (r.roots[k - 1] < 1.0 && r.roots[k] > 1.0) continue;
    CHECK(r.roots[k] - r.roots[k - 1] == doctest::Approx(fsr).epsilon(0.05));
    ++checked;
  }
  CHECK(checked >= 10);
}
