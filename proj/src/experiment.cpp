#include "geomc/experiment.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "geomc/eigenmodel.hpp"
#include "geomc/errors.hpp"
#include "geomc/io.hpp"
#include "geomc/tempering.hpp"

namespace geomc {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return out;
}

Vector to_vector(const std::vector<double>& xs) {
  return Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

std::filesystem::path with_suffix(const std::string& output, const std::string& suffix) {
  return std::filesystem::path(output + suffix);
}

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

struct ChainResult {
  ChainTrace trace;
  double seconds = 0.0;
  json extra = json::object();
};

// Single chain or parallel tempering depending on the ladder.
ChainResult run_sampler(const ExperimentConfig& cfg, const KernelKind& kernel,
                        const TargetDensity& target, const Vector& x_init) {
  Rng rng(cfg.seed);
  ChainResult result;
  const auto start = Clock::now();
  if (cfg.ladder) {
    const TemperatureLadder ladder(cfg.ladder->rhos);
    PtOptions options;
    options.exchanges = cfg.ladder->exchanges;
    EnsembleState ensemble =
        run_parallel_tempering(kernel, target, ladder, x_init, cfg.n_samples, options, rng);
    result.trace = std::move(ensemble.cold_trace);
    result.extra["swap_attempts"] = ensemble.swap_attempts;
    result.extra["swap_accepts"] = ensemble.swap_accepts;
  } else {
    result.trace = run_chain(kernel, target, x_init, cfg.n_samples, rng);
  }
  result.seconds = seconds_since(start);
  return result;
}

KernelKind hmc_kernel(const KernelSpec& spec) {
  return GeodesicHmc{HmcConfig{spec.epsilon, spec.steps}};
}

ChainTrace squared(ChainTrace trace) {
  for (auto& x : trace.samples) x = x.cwiseProduct(x);
  return trace;
}

json summary_for(const ExperimentConfig& cfg, const ChainResult& result,
                 const std::filesystem::path& trace_path) {
  json doc;
  doc["trace"] = trace_path.string();
  doc["wall_seconds"] = result.seconds;
  doc["report"] = report_to_json(summarize(result.trace, result.seconds, cfg.burn_in));
  const auto& lp = result.trace.log_density;
  doc["max_log_density"] = *std::max_element(lp.begin(), lp.end());
  for (const auto& [key, value] : result.extra.items()) doc[key] = value;
  return doc;
}

std::vector<std::filesystem::path> single_trace(const ExperimentConfig& cfg, const ChainResult& r,
                                                const std::vector<std::string>& columns,
                                                json& summary) {
  const auto path = with_suffix(cfg.output, ".csv");
  ensure_parent(path);
  write_trace(r.trace, path, columns);
  summary["result"] = summary_for(cfg, r, path);
  return {path};
}

std::vector<MatchRecord> load_fixture(const ExperimentConfig& cfg) {
  auto matches = load_matches(*cfg.dataset);
  if (matches.empty()) throw ParseError("dataset '" + *cfg.dataset + "' holds no matches");
  if (player_count(matches) < 2) throw ParseError("dataset '" + *cfg.dataset + "' needs two players");
  return matches;
}

std::string alpha_label(double alpha) {
  std::string s = format_double(alpha);
  for (auto& ch : s) {
    if (ch == '.') ch = 'p';
  }
  return s;
}

}  // namespace

ChainTrace run_volleyball_sampler(const std::vector<MatchRecord>& matches, double alpha,
                                  const std::string& sampler, double epsilon, std::size_t steps,
                                  std::size_t n_samples, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(player_count(matches));
  const DirichletParams prior(Vector::Constant(d, alpha));
  const Vector barycentre = Vector::Constant(d, 1.0 / static_cast<double>(d));
  const HmcConfig hmc{{epsilon}, steps};
  if (sampler == "spherical-hmc") {
    return squared(run_chain(GeodesicHmc{hmc}, make_volleyball_target(matches, prior),
                             simplex_to_sphere(barycentre), n_samples, rng));
  }
  if (sampler == "spherical-rw") {
    return squared(run_chain(SphericalRandomWalk{epsilon}, make_volleyball_target(matches, prior),
                             simplex_to_sphere(barycentre), n_samples, rng));
  }
  if (sampler == "simplex-hmc") {
    return run_chain(GeodesicHmc{hmc}, make_volleyball_simplex_target(matches, prior), barycentre,
                     n_samples, rng);
  }
  if (sampler == "rw-mh") {
    return run_chain(RwMetropolisSimplex{epsilon}, make_volleyball_simplex_target(matches, prior),
                     barycentre, n_samples, rng);
  }
  throw ParseError("unknown volleyball sampler '" + sampler + "'");
}

json report_to_json(const EssReport& report) {
  json doc{{"per_coordinate", report.per_coordinate},
           {"mean_ess", report.mean_ess},
           {"ess_percent", report.ess_percent},
           {"ess_percent_raw", report.ess_percent_raw},
           {"acceptance_rate", report.acceptance_rate},
           {"samples", report.samples},
           {"burn_in", report.burn_in}};
  doc["ess_per_second"] = report.ess_per_second ? json(*report.ess_per_second) : json(nullptr);
  return doc;
}

ExperimentOutcome execute_experiment(const ExperimentConfig& cfg) {
  ExperimentOutcome out;
  json summary{{"config", serialize_config(cfg)}};
  const auto start = Clock::now();

  if (const auto* m = std::get_if<BvmfModel>(&cfg.model)) {
    const TargetDensity target = make_bvmf_target(BvmfParams(to_vector(m->c), to_matrix(m->a)));
    const auto d = static_cast<Eigen::Index>(m->c.size());
    const Vector x_init = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    const ChainResult r = run_sampler(cfg, hmc_kernel(cfg.kernel), target, x_init);
    out.traces = single_trace(cfg, r, coordinate_columns(static_cast<std::size_t>(d)), summary);
  } else if (const auto* m = std::get_if<VolleyballModel>(&cfg.model)) {
    const auto matches = load_fixture(cfg);
    const auto d = static_cast<Eigen::Index>(player_count(matches));
    const DirichletParams prior(Vector::Constant(d, m->alpha));
    const Vector barycentre = Vector::Constant(d, 1.0 / static_cast<double>(d));
    const std::string& type = cfg.kernel.type;
    const double eps = cfg.kernel.epsilon.front();
    ChainResult r;
    if (cfg.ladder) {
      const bool sphere = type == "spherical-hmc";
      const TargetDensity target = sphere ? make_volleyball_target(matches, prior)
                                          : make_volleyball_simplex_target(matches, prior);
      r = run_sampler(cfg, hmc_kernel(cfg.kernel), target,
                      sphere ? simplex_to_sphere(barycentre) : barycentre);
      if (sphere) r.trace = squared(std::move(r.trace));
    } else {
      Rng rng(cfg.seed);
      const auto t0 = Clock::now();
      r.trace = run_volleyball_sampler(matches, m->alpha, type, eps, cfg.kernel.steps,
                                       cfg.n_samples, rng);
      r.seconds = seconds_since(t0);
    }
    out.traces = single_trace(cfg, r, coordinate_columns(static_cast<std::size_t>(d)), summary);
  } else if (const auto* m = std::get_if<BenchModel>(&cfg.model)) {
    const auto matches = load_fixture(cfg);
    const auto d = player_count(matches);
    const Rng root(cfg.seed);
    json grid = json::array();
    std::uint64_t cell = 0;
    for (double alpha : m->alphas) {
      for (const auto& sampler : m->samplers) {
        Rng rng = root.split(cell++);
        ChainResult r;
        const auto t0 = Clock::now();
        r.trace = run_volleyball_sampler(matches, alpha, sampler, cfg.kernel.epsilon.front(),
                                         cfg.kernel.steps, cfg.n_samples, rng);
        r.seconds = seconds_since(t0);
        const auto path = with_suffix(cfg.output, "_" + sampler + "_a" + alpha_label(alpha) + ".csv");
        ensure_parent(path);
        write_trace(r.trace, path, coordinate_columns(d));
        out.traces.push_back(path);
        json entry = summary_for(cfg, r, path);
        entry["alpha"] = alpha;
        entry["sampler"] = sampler;
        grid.push_back(std::move(entry));
      }
    }
    summary["grid"] = std::move(grid);
  } else {
    const auto& em = std::get<EigenmodelModel>(cfg.model);
    const auto p = static_cast<Eigen::Index>(em.rank);
    std::optional<EigenmodelState> truth;
    auto data = [&] {
      if (cfg.dataset) return load_edges(*cfg.dataset);
      Rng data_rng(em.data_seed);
      auto planted = make_planted_eigenmodel(static_cast<Eigen::Index>(em.nodes),
                                             to_vector(em.lambda), em.intercept, data_rng);
      truth = planted.truth;
      return planted.data;
    }();
    if (p >= data.nodes()) throw ParseError("config key 'model.rank': must be smaller than the node count");
    const auto m_nodes = static_cast<std::size_t>(data.nodes());
    const Vector x_init = pack_eigenmodel(eigenmodel_initial_state(data, p));
    const TargetDensity target = make_eigenmodel_target(data, p);
    const ChainResult r = run_sampler(cfg, hmc_kernel(cfg.kernel), target, x_init);
    out.traces = single_trace(cfg, r, eigenmodel_columns(m_nodes, em.rank), summary);
    if (truth) summary["planted_log_posterior"] = eigenmodel_log_posterior(*truth, data);
  }

  summary["total_wall_seconds"] = seconds_since(start);
  out.summary_path = with_suffix(cfg.output, ".json");
  ensure_parent(out.summary_path);
  std::ofstream file(out.summary_path);
  if (!file) throw Error("cannot open '" + out.summary_path.string() + "' for writing");
  file << summary.dump(2) << '\n';
  out.summary = std::move(summary);
  return out;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& err) {
  const auto report = [&](const char* kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
  };
  try {
    execute_experiment(cfg);
    return 0;
  } catch (const ParseError& e) {
    report("config", e.what());
    return 2;
  } catch (const ChainError& e) {
    report("chain", e.what());
    return 1;
  } catch (const Error& e) {
    report("runtime", e.what());
    return 1;
  } catch (const std::exception& e) {
    report("runtime", e.what());
    return 1;
  }
}

}  // namespace geomc
