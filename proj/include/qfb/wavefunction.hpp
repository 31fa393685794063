#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qfb {

using cplx = std::complex<double>;

/// One-excitation state (c_e, c_c, {c_j}) in the frame rotating at ω₀ with
/// bath phases absorbed, stored contiguously as [c_e, c_c, c_1 … c_2P].
class WaveFunction {
 public:
  static constexpr std::size_t emitter = 0;
  static constexpr std::size_t cavity = 1;
  static constexpr std::size_t bath_offset = 2;

  WaveFunction() = default;
  explicit WaveFunction(std::size_t bath_size)
      : amp_(bath_size + bath_offset) {}
  explicit WaveFunction(std::vector<cplx> amplitudes)
      : amp_(std::move(amplitudes)) {}

  cplx& ce() { return amp_[emitter]; }
  cplx ce() const { return amp_[emitter]; }
  cplx& cc() { return amp_[cavity]; }
  cplx cc() const { return amp_[cavity]; }

  std::span<cplx> bath() { return std::span(amp_).subspan(bath_offset); }
  std::span<const cplx> bath() const {
    return std::span(amp_).subspan(bath_offset);
  }

  std::span<cplx> amplitudes() { return amp_; }
  std::span<const cplx> amplitudes() const { return amp_; }

  std::size_t size() const noexcept { return amp_.size(); }
  std::size_t bath_size() const noexcept {
    return amp_.size() < bath_offset ? 0 : amp_.size() - bath_offset;
  }

  double norm_squared() const;
  double norm() const;
  double p_e() const { return std::norm(ce()); }
  double p_c() const { return std::norm(cc()); }
  double p_bath() const;

 private:
  std::vector<cplx> amp_;
};

}  // namespace qfb
