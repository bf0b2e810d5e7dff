#include "opaa/cli.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "opaa/density.hpp"
#include "opaa/errors.hpp"
#include "opaa/io.hpp"
#include "opaa/models.hpp"
#include "opaa/oracle.hpp"
#include "opaa/transform.hpp"

namespace opaa::cli {

namespace fs = std::filesystem;
using io::format_number;

namespace {

std::optional<AffineMap> build_map(const std::vector<double>& scale,
                                   const std::vector<double>& shift, int dim) {
  if (scale.empty() && shift.empty()) return std::nullopt;
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> s = scale.empty() ? std::vector<double>(n, 1.0) : scale;
  std::vector<double> b = shift.empty() ? std::vector<double>(n, 0.0) : shift;
  if (s.size() != n || b.size() != n) {
    throw InvalidArgument(fmt::format("--scale/--shift need {} values (one per coordinate)", dim));
  }
  return AffineMap(std::move(s), std::move(b));
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw InvalidArgument(fmt::format("cannot write {}", path.string()));
  return f;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  if (n > 1) v.back() = hi;
  return v;
}

}  // namespace

unsigned resolve_workers(unsigned requested) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv(kWorkersEnv)) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(cap, &end, 10);
    if (end != cap && v > 0) w = std::min<unsigned>(w, static_cast<unsigned>(v));
  }
  return std::max(1u, w);
}

int cmd_approximate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const io::ModelConfig model = io::load_model_config(config.model_path);
    const auto target = io::make_target(model);

    OpaaOptions opts;
    opts.quad_order = config.quad_order;
    opts.tol = config.tol;
    opts.max_degree = config.max_degree;
    opts.workers = resolve_workers(config.workers);
    opts.weighting = config.weighting;
    if (config.precondition_from_data) {
      const auto* gmm = std::get_if<GmmModel>(&model);
      if (!gmm) throw InvalidArgument("--precondition-from-data is only available for gmm models");
      if (!config.scale.empty() || !config.shift.empty()) {
        throw InvalidArgument("--precondition-from-data cannot be combined with --scale/--shift");
      }
      opts.precondition = gmm_data_preconditioner(*gmm);
    } else {
      opts.precondition = build_map(config.scale, config.shift, target->dim());
    }

    const OpaaResult result = run_opaa(*target, opts);

    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    {
      auto f = open_output(dir / "coefficients.jsonl");
      io::write_coefficients(f, result.coefficients);
    }
    {
      auto f = open_output(dir / "summary.json");
      io::write_summary(f, result, opts);
    }
    out << fmt::format("evidence {} ({} at degree {})\n", format_number(result.evidence),
                       result.converged() ? "converged" : "max degree reached",
                       result.max_degree_reached);
    return result.converged() ? kExitOk : kExitNotConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_density_grid(const DensityGridConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(config.coefficients_path);
    if (!in) throw InvalidArgument(fmt::format("cannot open {}", config.coefficients_path));
    const ApproxDensity density = build_density(io::read_coefficients(in));
    const int dim = density.dim();
    if (dim > 2) {
      throw InvalidArgument(fmt::format(
          "density-grid exports 1-D or 2-D grids; the coefficients are {}-dimensional. "
          "Slice the coefficient file to the coordinates of interest first",
          dim));
    }
    if (config.ranges.size() != static_cast<std::size_t>(dim)) {
      throw InvalidArgument(fmt::format("need {} --range value(s), got {}", dim, config.ranges.size()));
    }
    if (config.resolution < 2) throw InvalidArgument("--resolution must be >= 2");
    const auto map = build_map(config.scale, config.shift, dim);

    std::ofstream file;
    std::ostream* os = &out;
    if (!config.output_path.empty()) {
      file = open_output(config.output_path);
      os = &file;
    }
    auto eval = [&](std::span<const double> x) {
      return map ? density.in_original_coordinates(x, *map) : density(x);
    };
    const auto ax0 = linspace(config.ranges[0].first, config.ranges[0].second, config.resolution);
    if (dim == 1) {
      *os << "theta_1,density\n";
      for (double x : ax0) {
        const double p[1] = {x};
        *os << format_number(x) << ',' << format_number(eval(p)) << '\n';
      }
    } else {
      const auto ax1 = linspace(config.ranges[1].first, config.ranges[1].second, config.resolution);
      *os << "theta_1,theta_2,density\n";
      for (double x : ax0) {
        for (double y : ax1) {
          const double p[2] = {x, y};
          *os << format_number(x) << ',' << format_number(y) << ',' << format_number(eval(p))
              << '\n';
        }
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_quadrature_table(int order, std::ostream& out, std::ostream& err) {
  try {
    const QuadratureRule rule = gauss_hermite(order);
    out << "i,node,weight,scaled_node,scaled_weight\n";
    for (int i = 0; i < order; ++i) {
      const auto k = static_cast<std::size_t>(i);
      out << (i + 1) << ',' << format_number(rule.nodes[k]) << ',' << format_number(rule.weights[k])
          << ',' << format_number(rule.scaled_nodes[k]) << ','
          << format_number(rule.scaled_weights[k]) << '\n';
    }
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_weights_stats(int order, int dim, std::ostream& out, std::ostream& err) {
  try {
    const WeightMultisetStats stats = weight_multiset_stats(order, dim);
    std::string s = "{\n";
    s += fmt::format("  \"order\": {},\n  \"dim\": {},\n", order, dim);
    s += fmt::format("  \"distinct_count\": {},\n", stats.distinct_count);
    s += fmt::format("  \"total_count\": {},\n", stats.total_count);
    s += "  \"classes\": [";
    for (std::size_t i = 0; i < stats.classes.size(); ++i) {
      const auto& c = stats.classes[i];
      s += i ? ",\n    " : "\n    ";
      s += fmt::format("{{\"exponents\": [{}], \"weight\": {}, \"multiplicity\": {}}}",
                       fmt::join(c.exponents, ", "), format_number(c.weight), c.multiplicity);
    }
    s += stats.classes.empty() ? "]\n}\n" : "\n  ]\n}\n";
    out << s;
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int cmd_oracle_evidence(const OracleConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const io::ModelConfig model = io::load_model_config(config.model_path);
    const int dim = io::model_dim(model);
    oracle::BoxSpec box;
    box.points_per_axis = config.points_per_axis;
    const auto* gmm = std::get_if<GmmModel>(&model);
    if (config.box.empty()) {
      if (gmm) {
        box = oracle::gmm_default_box(*gmm, config.points_per_axis);
      } else {
        box.lo.assign(static_cast<std::size_t>(dim), -10.0);
        box.hi.assign(static_cast<std::size_t>(dim), 10.0);
      }
    } else {
      if (config.box.size() == 1 && dim > 1) {
        box.lo.assign(static_cast<std::size_t>(dim), config.box[0].first);
        box.hi.assign(static_cast<std::size_t>(dim), config.box[0].second);
      } else if (config.box.size() == static_cast<std::size_t>(dim)) {
        for (const auto& [lo, hi] : config.box) {
          box.lo.push_back(lo);
          box.hi.push_back(hi);
        }
      } else {
        throw InvalidArgument(fmt::format("need 1 or {} --box ranges, got {}", dim, config.box.size()));
      }
    }

    oracle::OracleResult r;
    if (gmm) {
      r = oracle::gmm_evidence_direct(*gmm, box);
    } else {
      const auto target = io::make_target(model);
      r = oracle::integrate_box(
          [&](std::span<const double> x) { return std::exp(target->log_density(x)); }, box);
    }
    out << fmt::format("{{\"evidence\": {}, \"refinement_delta\": {}}}\n", format_number(r.value),
                       format_number(r.refinement_delta));
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<double, double>> parse_ranges(const std::vector<std::string>& raw,
                                                    const char* flag) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : raw) {
    const auto comma = r.find(',');
    if (comma == std::string::npos) {
      throw CLI::ValidationError(flag, fmt::format("expected lo,hi but got \"{}\"", r));
    }
    try {
      std::size_t p1 = 0;
      std::size_t p2 = 0;
      const std::string a = r.substr(0, comma);
      const std::string b = r.substr(comma + 1);
      const double lo = std::stod(a, &p1);
      const double hi = std::stod(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing characters");
      if (!(lo < hi)) throw std::invalid_argument("lo must be < hi");
      out.emplace_back(lo, hi);
    } catch (const std::exception& e) {
      throw CLI::ValidationError(flag, fmt::format("bad range \"{}\": {}", r, e.what()));
    }
  }
  return out;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hermite-basis density approximation and evidence estimation"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  std::string scheme = "hermite";
  auto* approx = app.add_subcommand("approximate", "Compute coefficients and the evidence estimate");
  approx->add_option("--model", run_cfg.model_path, "Model config JSON")->required()->check(CLI::ExistingFile);
  approx->add_option("--order", run_cfg.quad_order, "Gauss-Hermite order")->required()->check(CLI::Range(1, kMaxQuadratureOrder));
  approx->add_option("--tol", run_cfg.tol, "Relative shell-energy tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  approx->add_option("--max-degree", run_cfg.max_degree, "Highest total degree")->check(CLI::NonNegativeNumber)->capture_default_str();
  approx->add_option("--scale", run_cfg.scale, "Per-coordinate preconditioner scale")->delimiter(',');
  approx->add_option("--shift", run_cfg.shift, "Per-coordinate preconditioner shift")->delimiter(',');
  approx->add_flag("--precondition-from-data", run_cfg.precondition_from_data,
                   "Derive the preconditioner from the observations (gmm only)");
  approx->add_option("--workers", run_cfg.workers, "Worker threads (default: all cores)");
  approx->add_option("--out", run_cfg.output_dir, "Output directory")->capture_default_str();
  approx->add_option("--scheme", scheme, "Quadrature form: hermite or half_gaussian")
      ->check(CLI::IsMember({"hermite", "half_gaussian"}))
      ->capture_default_str();

  DensityGridConfig grid_cfg;
  std::vector<std::string> grid_ranges;
  auto* grid = app.add_subcommand("density-grid", "Evaluate the reconstructed density on a grid");
  grid->add_option("--coefficients", grid_cfg.coefficients_path, "coefficients.jsonl")->required()->check(CLI::ExistingFile);
  grid->add_option("--range", grid_ranges, "lo,hi for one axis; repeat per axis")->required()->allow_extra_args(false);
  grid->add_option("--resolution", grid_cfg.resolution, "Points per axis")->capture_default_str();
  grid->add_option("--out", grid_cfg.output_path, "Output CSV (default: stdout)");
  grid->add_option("--scale", grid_cfg.scale, "Preconditioner scale used for the run")->delimiter(',');
  grid->add_option("--shift", grid_cfg.shift, "Preconditioner shift used for the run")->delimiter(',');

  int table_order = 0;
  auto* table = app.add_subcommand("quadrature-table", "Print Gauss-Hermite nodes and weights");
  table->add_option("--order", table_order, "Gauss-Hermite order")->required();

  int stats_order = 0;
  int stats_dim = 0;
  auto* stats = app.add_subcommand("weights-stats", "Distinct tensor-grid weights");
  stats->add_option("--order", stats_order, "Gauss-Hermite order")->required();
  stats->add_option("--dim", stats_dim, "Dimension")->required();

  OracleConfig oracle_cfg;
  std::vector<std::string> oracle_box;
  auto* orc = app.add_subcommand("oracle-evidence", "Brute-force evidence by Simpson integration");
  orc->add_option("--model", oracle_cfg.model_path, "Model config JSON")->required()->check(CLI::ExistingFile);
  orc->add_option("--box", oracle_box, "lo,hi for one axis (or all axes); repeat per axis")->allow_extra_args(false);
  orc->add_option("--points-per-axis", oracle_cfg.points_per_axis, "Simpson points per axis")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (*grid) grid_cfg.ranges = parse_ranges(grid_ranges, "--range");
    if (*orc) oracle_cfg.box = parse_ranges(oracle_box, "--box");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*approx) {
    run_cfg.weighting = scheme == "hermite" ? GridWeighting::kHermite : GridWeighting::kHalfGaussian;
    return cmd_approximate(run_cfg, out, err);
  }
  if (*grid) return cmd_density_grid(grid_cfg, out, err);
  if (*table) return cmd_quadrature_table(table_order, out, err);
  if (*stats) return cmd_weights_stats(stats_order, stats_dim, out, err);
  return cmd_oracle_evidence(oracle_cfg, out, err);
}

}  // namespace opaa::cli
