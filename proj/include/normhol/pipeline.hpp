#pragma once

#include <optional>
#include <vector>

#include "normhol/io.hpp"

namespace normhol {

enum class ScalarMode { Auto, Exact, Float };

struct PipelineConfig {
  std::optional<std::vector<double>> base;        ///< defaults to the first sample
  std::vector<std::vector<double>> samples;
  std::vector<std::vector<std::vector<double>>> loops;
  std::size_t steps = 512;
  geometry::JetMethod method = geometry::JetMethod::Automatic;
  ScalarMode mode = ScalarMode::Auto;
  double tol = 1e-9;        ///< rationalization tolerance
  double rank_tol = 1e-6;   ///< relative rank tolerance in float mode
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::vector<double>> inject_mean_curvature;
};

/// Jets -> shape families -> curvature tensors conjugated back to the base
/// fiber by path and loop transports -> holonomy algebra -> splitting, screen
/// analysis and classification. Exact mode is used when every tensor
/// rationalizes (denominators <= 1e6), re-verifies exactly and reproduces the
/// float holonomy dimension; ScalarMode::Exact throws InvalidInput otherwise.
/// The algebra is a lower bound on the normal holonomy algebra.
nlohmann::json run_pipeline(const geometry::Immersion& imm, const PipelineConfig& config);

/// Rationalizes every entry within `tol` (denominators <= 1e6) and checks the
/// curvature identities exactly; nullopt when any step fails.
std::optional<std::vector<OlmosTensor<Rational>>> rationalize_tensors(
    const std::vector<OlmosTensor<double>>& tensors, double tol = 1e-9);

}  // namespace normhol
