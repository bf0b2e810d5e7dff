#ifndef OPAA_CLI_HPP
#define OPAA_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "opaa/quadrature.hpp"

namespace opaa::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

/// Environment variable that caps the worker count.
inline constexpr const char* kWorkersEnv = "OPAA_MAX_WORKERS";

struct RunConfig {
  std::string model_path;
  int quad_order = 8;
  double tol = 1e-8;
  int max_degree = 20;
  std::vector<double> scale;  // empty: identity
  std::vector<double> shift;  // empty: zero
  bool precondition_from_data = false;  // gmm models only
  unsigned workers = 0;                 // 0: hardware concurrency
  std::string output_dir = ".";
  GridWeighting weighting = GridWeighting::kHermite;
};

/// Writes coefficients.jsonl and summary.json into output_dir.
/// Returns kExitOk on convergence, kExitNotConverged when max_degree was
/// reached first, kExitError on any failure (message on err).
int cmd_approximate(const RunConfig& config, std::ostream& out, std::ostream& err);

struct DensityGridConfig {
  std::string coefficients_path;
  std::vector<std::pair<double, double>> ranges;  // one per axis
  int resolution = 101;
  std::string output_path;  // empty: write to out
  std::vector<double> scale;
  std::vector<double> shift;
};

int cmd_density_grid(const DensityGridConfig& config, std::ostream& out, std::ostream& err);

/// CSV: i,node,weight,scaled_node,scaled_weight.
int cmd_quadrature_table(int order, std::ostream& out, std::ostream& err);

/// JSON: distinct_count, total_count, classes[{exponents, weight, multiplicity}].
int cmd_weights_stats(int order, int dim, std::ostream& out, std::ostream& err);

struct OracleConfig {
  std::string model_path;
  std::vector<std::pair<double, double>> box;  // empty: model default
  int points_per_axis = 2001;
};

/// JSON: {"evidence": v, "refinement_delta": d}.
int cmd_oracle_evidence(const OracleConfig& config, std::ostream& out, std::ostream& err);

/// min(requested or hardware concurrency, $OPAA_MAX_WORKERS), at least 1.
unsigned resolve_workers(unsigned requested);

/// Full command-line entry point.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace opaa::cli

#endif  // OPAA_CLI_HPP
