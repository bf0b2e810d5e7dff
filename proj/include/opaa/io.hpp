#ifndef OPAA_IO_HPP
#define OPAA_IO_HPP

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "opaa/coefficients.hpp"
#include "opaa/gmm.hpp"
#include "opaa/target.hpp"
#include "opaa/transform.hpp"

namespace opaa::io {

/// Parsed model configuration. Exactly one of the three model types.
struct GaussianIdentityConfig {
  int dim = 1;
};
struct PlantedConfig {
  int dim = 1;
  std::vector<Coefficient> coeffs;
};
using ModelConfig = std::variant<GmmModel, GaussianIdentityConfig, PlantedConfig>;

/// Throws InvalidArgument with a description of the first problem found.
ModelConfig parse_model_config(const std::string& json_text);
ModelConfig load_model_config(const std::string& path);

std::unique_ptr<TargetDensity> make_target(const ModelConfig& config);
int model_dim(const ModelConfig& config);

/// printf("%.17g"): round-trips every finite double.
std::string format_number(double x);

/// One JSON object per line: {"tau": [..], "a": v}, in shell order.
void write_coefficients(std::ostream& os, const CoefficientSet& coeffs);

/// Reads the format written by write_coefficients. The dimension is taken
/// from the first record; quad_order is not stored and is set to 0.
CoefficientSet read_coefficients(std::istream& is);

/// {"dim", "quad_order", "max_degree_reached", "converged", "evidence",
///  "shell_energy", "stop_reason", "scheme"[, "precondition"]}
void write_summary(std::ostream& os, const OpaaResult& result, const OpaaOptions& options);

}  // namespace opaa::io

#endif  // OPAA_IO_HPP
