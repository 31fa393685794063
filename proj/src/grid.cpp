#include "qfb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfb/error.hpp"

namespace qfb {

double max_grid_spacing(const PhysicalParams& params) {
  return pi / (4.0 * params.tau());
}

double min_half_bandwidth(const PhysicalParams& params) {
  return std::max(8.0 * params.omega_g(), 4.0 * params.kappa());
}

std::vector<double> build_couplings(const PhysicalParams& params,
                                    std::span<const double> detunings,
                                    double spacing) {
  const double phase0 = 0.5 * (params.delta_phi() + pi);
  const double half_tau = 0.5 * params.tau();
  const double scale = params.G0() * std::sqrt(spacing);
  std::vector<double> g(detunings.size());
  std::transform(detunings.begin(), detunings.end(), g.begin(), [&](double d) {
    return scale * std::sin(phase0 + d * half_tau);
  });
  return g;
}

ModeGrid ModeGrid::make(const PhysicalParams& params, double half_bandwidth,
                        std::size_t num_pairs) {
  auto fail = [](const char* field, const std::string& msg) {
    return Error(ErrorCategory::grid_resolution, "core-model", field, msg);
  };
  if (num_pairs == 0) throw fail("P", "grid needs at least one mode pair");
  if (!(half_bandwidth > 0.0) || !std::isfinite(half_bandwidth))
    throw fail("W", "half-bandwidth W must be positive and finite");

  const double spacing = half_bandwidth / static_cast<double>(num_pairs);
  const double bound = max_grid_spacing(params);
  if (!(spacing < bound)) {
    std::ostringstream os;
    os << "grid spacing W/P = " << spacing << " violates W/P < pi/(4 tau) = "
       << bound;
    throw fail("P", os.str());
  }
  const double wmin = min_half_bandwidth(params);
  if (half_bandwidth < wmin) {
    std::ostringstream os;
    os << "half-bandwidth W = " << half_bandwidth
       << " violates W >= max(8 omega_g, 4 kappa) = " << wmin;
    throw fail("W", os.str());
  }

  ModeGrid grid;
  grid.half_bandwidth_ = half_bandwidth;
  grid.num_pairs_ = num_pairs;
  grid.spacing_ = spacing;
  grid.detunings_.resize(2 * num_pairs);
  for (std::size_t j = 0; j < num_pairs; ++j) {
    const double d = (static_cast<double>(j) + 0.5) * spacing;
    grid.detunings_[num_pairs + j] = d;
    grid.detunings_[num_pairs - 1 - j] = -d;
  }
  grid.couplings_ = build_couplings(params, grid.detunings_, spacing);
  return grid;
}

ModeGrid default_grid(const PhysicalParams& params) {
  const double w = std::max(12.0 * params.omega_g(), 4.0 * params.kappa());
  const double target = 0.8 * max_grid_spacing(params);
  const auto p = std::max<std::size_t>(
      1500, static_cast<std::size_t>(std::ceil(w / target)));
  return ModeGrid::make(params, w, p);
}

}  // namespace qfb
