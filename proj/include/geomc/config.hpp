#ifndef GEOMC_CONFIG_HPP
#define GEOMC_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace geomc {

/// Bingham-von Mises-Fisher target on S^{d-1}.
struct BvmfModel {
  std::vector<double> c;
  std::vector<std::vector<double>> a;

  friend bool operator==(const BvmfModel&, const BvmfModel&) = default;
};

/// Team-strength posterior under a Dirichlet(alpha 1) prior.
struct VolleyballModel {
  double alpha = 0.5;

  friend bool operator==(const VolleyballModel&, const VolleyballModel&) = default;
};

/// Grid of samplers x prior concentrations on the volleyball posterior.
struct BenchModel {
  std::vector<double> alphas;
  std::vector<std::string> samplers;

  friend bool operator==(const BenchModel&, const BenchModel&) = default;
};

/// Probit network eigenmodel. Without a dataset, a planted network with
/// `nodes` nodes is generated from (lambda, intercept) using data_seed.
struct EigenmodelModel {
  std::size_t rank = 3;
  std::size_t nodes = 20;
  std::vector<double> lambda;
  double intercept = 0.0;
  std::uint64_t data_seed = 1;

  friend bool operator==(const EigenmodelModel&, const EigenmodelModel&) = default;
};

using ModelSpec = std::variant<BvmfModel, VolleyballModel, BenchModel, EigenmodelModel>;

struct KernelSpec {
  /// geodesic-hmc | spherical-hmc | simplex-hmc | rw-mh | spherical-rw | all
  std::string type;
  std::vector<double> epsilon;
  std::size_t steps = 20;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

struct LadderSpec {
  std::vector<double> rhos;
  std::size_t exchanges = 10;

  friend bool operator==(const LadderSpec&, const LadderSpec&) = default;
};

/// Fully resolved experiment description. Every defaulted field is filled
/// in by parse_config, so serialize_config echoes the effective settings.
struct ExperimentConfig {
  /// bvmf | volleyball | eigenmodel | dirichlet-bench
  std::string experiment;
  KernelSpec kernel;
  std::optional<LadderSpec> ladder;
  std::size_t n_samples = 0;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> dataset;
  std::string output;
  ModelSpec model;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Validates a config document. Throws ParseError naming the offending key
/// for unknown keys, missing required keys and malformed values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json serialize_config(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Raw preset document; throws ParseError for unknown names.
nlohmann::json preset_document(const std::string& name);

/// Sets a dotted-path key ("kernel.epsilon", "model.c") in a config document.
/// The value is read as JSON when it parses, otherwise as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Directory holding the shipped fixtures.
std::filesystem::path data_directory();

}  // namespace geomc

#endif  // GEOMC_CONFIG_HPP
