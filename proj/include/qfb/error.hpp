#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qfb {

enum class ErrorCategory {
  parameter_domain,
  grid_resolution,
  structural,
  step_size,
  integration_diagnostic,
  perturbation_domain,
  analysis,
  numerical,
  resolution,
  not_found,
  config,
};

// Every module-level failure is reported through this type. `module` and
// `field` identify the origin so the CLI can emit a machine-readable record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string module, std::string field,
        const std::string& message)
      : std::runtime_error(message),
        category_(category),
        module_(std::move(module)),
        field_(std::move(field)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCategory category_;
  std::string module_;
  std::string field_;
};

inline std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::parameter_domain: return "parameter-domain";
    case ErrorCategory::grid_resolution: return "grid-resolution";
    case ErrorCategory::structural: return "structural";
    case ErrorCategory::step_size: return "step-size";
    case ErrorCategory::integration_diagnostic: return "integration-diagnostic";
    case ErrorCategory::perturbation_domain: return "perturbation-domain";
    case ErrorCategory::analysis: return "analysis";
    case ErrorCategory::numerical: return "numerical";
    case ErrorCategory::resolution: return "resolution";
    case ErrorCategory::not_found: return "not-found";
    case ErrorCategory::config: return "config";
  }
  return "unknown";
}

}  // namespace qfb
