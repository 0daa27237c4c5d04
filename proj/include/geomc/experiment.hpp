#ifndef GEOMC_EXPERIMENT_HPP
#define GEOMC_EXPERIMENT_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "geomc/config.hpp"
#include "geomc/diagnostics.hpp"

namespace geomc {

struct ExperimentOutcome {
  std::vector<std::filesystem::path> traces;
  std::filesystem::path summary_path;
  nlohmann::json summary;
};

/// Samples the volleyball posterior with one of the four samplers
/// (spherical-hmc, simplex-hmc, rw-mh, spherical-rw). Samples are always
/// reported as team-strength weights on the simplex.
ChainTrace run_volleyball_sampler(const std::vector<MatchRecord>& matches, double alpha,
                                  const std::string& sampler, double epsilon, std::size_t steps,
                                  std::size_t n_samples, Rng& rng);

nlohmann::json report_to_json(const EssReport& report);

/// Runs the configured study and writes `<output>.csv` (one trace per cell
/// for dirichlet-bench) plus `<output>.json`. Library errors propagate.
ExperimentOutcome execute_experiment(const ExperimentConfig& cfg);

/// execute_experiment with errors mapped to exit codes: 0 on success, 1 for
/// runtime and numerical failures, 2 for configuration problems. Messages go
/// to `err` as a one-line JSON object.
int run_experiment(const ExperimentConfig& cfg, std::ostream& err);

}  // namespace geomc

#endif  // GEOMC_EXPERIMENT_HPP
