#include "opaa/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "opaa/errors.hpp"
#include "opaa/models.hpp"

namespace opaa::io {

using nlohmann::json;

namespace {

template <class T>
T required(const json& j, const char* key, const char* context) {
  if (!j.contains(key)) {
    throw InvalidArgument(fmt::format("{}: missing required field \"{}\"", context, key));
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("{}: field \"{}\" has the wrong type ({})", context, key, e.what()));
  }
}

MultiIndex parse_tau(const json& j, int dim, const char* context) {
  if (!j.is_array()) throw InvalidArgument(fmt::format("{}: \"tau\" must be an array", context));
  std::vector<unsigned> entries;
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw InvalidArgument(fmt::format("{}: \"tau\" entries must be non-negative integers", context));
    }
    entries.push_back(v.get<unsigned>());
  }
  if (dim > 0 && entries.size() != static_cast<std::size_t>(dim)) {
    throw InvalidArgument(fmt::format("{}: \"tau\" has {} entries, expected {}", context,
                                      entries.size(), dim));
  }
  return MultiIndex(std::move(entries));
}

}  // namespace

ModelConfig parse_model_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(fmt::format("model config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw InvalidArgument("model config must be a JSON object");
  const auto type = required<std::string>(j, "type", "model config");
  if (type == "gmm") {
    GmmModel m;
    m.clusters = required<int>(j, "clusters", "gmm config");
    m.prior_sigma = required<double>(j, "prior_sigma", "gmm config");
    m.obs_sigma = required<double>(j, "obs_sigma", "gmm config");
    m.observations = required<std::vector<double>>(j, "observations", "gmm config");
    m.validate();
    return m;
  }
  if (type == "gaussian_identity") {
    GaussianIdentityConfig c{required<int>(j, "dim", "gaussian_identity config")};
    if (c.dim < 1) throw InvalidArgument("gaussian_identity config: dim must be >= 1");
    return c;
  }
  if (type == "planted") {
    PlantedConfig c;
    c.dim = required<int>(j, "dim", "planted config");
    if (c.dim < 1) throw InvalidArgument("planted config: dim must be >= 1");
    const auto coeffs = required<json>(j, "coeffs", "planted config");
    if (!coeffs.is_array() || coeffs.empty()) {
      throw InvalidArgument("planted config: \"coeffs\" must be a non-empty array");
    }
    for (const auto& e : coeffs) {
      if (!e.is_object() || !e.contains("tau")) {
        throw InvalidArgument("planted config: each coefficient needs \"tau\" and \"c\"");
      }
      c.coeffs.push_back({parse_tau(e.at("tau"), c.dim, "planted config"),
                          required<double>(e, "c", "planted config")});
    }
    PlantedDensity check(c.dim, c.coeffs);  // validates duplicates and values
    return c;
  }
  throw InvalidArgument(fmt::format(
      "model config: unknown type \"{}\" (expected gmm, gaussian_identity or planted)", type));
}

ModelConfig load_model_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(fmt::format("cannot open model config {}", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model_config(ss.str());
}

std::unique_ptr<TargetDensity> make_target(const ModelConfig& config) {
  struct Visitor {
    std::unique_ptr<TargetDensity> operator()(const GmmModel& m) const {
      return std::make_unique<GmmTarget>(m);
    }
    std::unique_ptr<TargetDensity> operator()(const GaussianIdentityConfig& c) const {
      return std::make_unique<GaussianIdentity>(c.dim);
    }
    std::unique_ptr<TargetDensity> operator()(const PlantedConfig& c) const {
      return std::make_unique<PlantedDensity>(c.dim, c.coeffs);
    }
  };
  return std::visit(Visitor{}, config);
}

int model_dim(const ModelConfig& config) {
  struct Visitor {
    int operator()(const GmmModel& m) const { return m.clusters; }
    int operator()(const GaussianIdentityConfig& c) const { return c.dim; }
    int operator()(const PlantedConfig& c) const { return c.dim; }
  };
  return std::visit(Visitor{}, config);
}

std::string format_number(double x) { return fmt::format("{:.17g}", x); }

void write_coefficients(std::ostream& os, const CoefficientSet& coeffs) {
  std::string line;
  coeffs.for_each([&](const Coefficient& c) {
    line.assign("{\"tau\": [");
    for (std::size_t k = 0; k < c.tau.dim(); ++k) {
      if (k) line += ", ";
      line += std::to_string(c.tau[k]);
    }
    line += "], \"a\": ";
    line += format_number(c.value);
    line += "}\n";
    os << line;
  });
}

CoefficientSet read_coefficients(std::istream& is) {
  std::vector<Coefficient> entries;
  int dim = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string context = fmt::format("coefficients line {}", lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InvalidArgument(fmt::format("{}: {}", context, e.what()));
    }
    if (!j.is_object() || !j.contains("tau")) {
      throw InvalidArgument(fmt::format("{}: expected {{\"tau\": [...], \"a\": v}}", context));
    }
    MultiIndex tau = parse_tau(j.at("tau"), dim, context.c_str());
    if (dim == 0) {
      if (tau.dim() == 0) throw InvalidArgument(fmt::format("{}: empty multi-index", context));
      dim = static_cast<int>(tau.dim());
    }
    entries.push_back({std::move(tau), required<double>(j, "a", context.c_str())});
  }
  if (entries.empty()) throw InvalidArgument("coefficient file has no records");
  return CoefficientSet::from_entries(dim, 0, std::move(entries));
}

void write_summary(std::ostream& os, const OpaaResult& result, const OpaaOptions& options) {
  const CoefficientSet& c = result.coefficients;
  std::string s = "{\n";
  s += fmt::format("  \"dim\": {},\n", c.dim());
  s += fmt::format("  \"quad_order\": {},\n", c.quad_order());
  s += fmt::format("  \"max_degree_reached\": {},\n", result.max_degree_reached);
  s += fmt::format("  \"converged\": {},\n", result.converged() ? "true" : "false");
  s += fmt::format("  \"evidence\": {},\n", format_number(result.evidence));
  s += "  \"shell_energy\": [";
  const auto energy = c.shell_energy();
  for (std::size_t d = 0; d < energy.size(); ++d) {
    if (d) s += ", ";
    s += format_number(energy[d]);
  }
  s += "],\n";
  s += fmt::format("  \"stop_reason\": \"{}\",\n",
                   result.converged() ? "converged" : "max_degree");
  s += fmt::format("  \"scheme\": \"{}\"",
                   options.weighting == GridWeighting::kHermite ? "hermite" : "half_gaussian");
  if (options.precondition) {
    auto list = [](const std::vector<double>& v) {
      std::string out = "[";
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out += ", ";
        out += format_number(v[k]);
      }
      return out + "]";
    };
    s += fmt::format(",\n  \"precondition\": {{\"scale\": {}, \"shift\": {}}}",
                     list(options.precondition->scale()), list(options.precondition->shift()));
  }
  s += "\n}\n";
  os << s;
}

}  // namespace opaa::io
