#include "geomc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <type_traits>
#include <sstream>

#include "geomc/errors.hpp"
#include "geomc/tempering.hpp"

#ifndef GEOMC_DATA_DIR
#define GEOMC_DATA_DIR "data"
#endif

namespace geomc {

using nlohmann::json;

namespace {

const std::vector<std::string> kExperiments{"bvmf", "volleyball", "eigenmodel", "dirichlet-bench"};
const std::vector<std::string> kVolleyballKernels{"spherical-hmc", "simplex-hmc", "rw-mh",
                                                  "spherical-rw"};

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ParseError("config key '" + key + "': " + what);
}

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

// Checks the keys of one JSON object and reads typed values out of it.
class Section {
 public:
  Section(const json& obj, std::string prefix, std::vector<std::string> allowed)
      : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) bad(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    for (const auto& [key, value] : obj_.items()) {
      if (!contains(allowed, key)) bad(path(key), "unknown key");
    }
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_[key].is_null(); }

  const json& raw(const std::string& key) const {
    if (!has(key)) bad(path(key), "missing required key");
    return obj_[key];
  }

  std::string path(const std::string& key) const {
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  std::string string(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_string()) bad(path(key), "expected a string");
    return v.get<std::string>();
  }

  double number(const std::string& key) const { return to_number(raw(key), path(key)); }

  std::size_t count(const std::string& key, std::size_t minimum) const {
    const auto& v = raw(key);
    if (!v.is_number_integer()) bad(path(key), "expected an integer");
    if (v.is_number_unsigned() || v.get<long long>() >= 0) {
      const auto n = v.get<std::uint64_t>();
      if (n < minimum) bad(path(key), "must be at least " + std::to_string(minimum));
      return static_cast<std::size_t>(n);
    }
    bad(path(key), "must be non-negative");
  }

  std::uint64_t seed(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0)) {
      bad(path(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::vector<double> numbers(const std::string& key, bool allow_scalar) const {
    const auto& v = raw(key);
    if (allow_scalar && v.is_number()) return {to_number(v, path(key))};
    if (!v.is_array() || v.empty()) bad(path(key), "expected a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(to_number(e, path(key)));
    return out;
  }

  std::vector<std::string> strings(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array() || v.empty()) bad(path(key), "expected a non-empty array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) bad(path(key), "expected a non-empty array of strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }

 private:
  static double to_number(const json& v, const std::string& key) {
    if (!v.is_number()) bad(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(key, "expected a finite number");
    return x;
  }

  json obj_;
  std::string prefix_;
};

void require_positive(const std::vector<double>& xs, const std::string& key) {
  for (double x : xs) {
    if (!(x > 0.0)) bad(key, "values must be positive");
  }
}

BvmfModel parse_bvmf(const Section& s) {
  BvmfModel m;
  m.c = s.numbers("c", false);
  const auto d = m.c.size();
  if (d < 2) bad(s.path("c"), "need at least two coordinates");
  if (s.has("A") == s.has("A_diag")) bad(s.path("A"), "give exactly one of A and A_diag");
  if (s.has("A_diag")) {
    const auto diag = s.numbers("A_diag", false);
    if (diag.size() != d) bad(s.path("A_diag"), "length must match c");
    m.a.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < d; ++i) m.a[i][i] = diag[i];
  } else {
    const auto& rows = s.raw("A");
    if (!rows.is_array() || rows.size() != d) bad(s.path("A"), "expected a square matrix matching c");
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != d) bad(s.path("A"), "expected a square matrix matching c");
      std::vector<double> r;
      for (const auto& e : row) {
        if (!e.is_number() || !std::isfinite(e.get<double>())) bad(s.path("A"), "expected numbers");
        r.push_back(e.get<double>());
      }
      m.a.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const double scale = std::max({1.0, std::abs(m.a[i][j]), std::abs(m.a[j][i])});
        if (std::abs(m.a[i][j] - m.a[j][i]) > 1e-10 * scale) bad(s.path("A"), "must be symmetric");
      }
    }
  }
  return m;
}

EigenmodelModel parse_eigenmodel(const Section& s, bool has_dataset) {
  EigenmodelModel m;
  if (s.has("rank")) m.rank = s.count("rank", 1);
  if (s.has("nodes")) m.nodes = s.count("nodes", 2);
  if (s.has("intercept")) m.intercept = s.number("intercept");
  if (s.has("data_seed")) m.data_seed = s.seed("data_seed");
  if (s.has("lambda")) {
    m.lambda = s.numbers("lambda", false);
  } else if (!has_dataset) {
    bad(s.path("lambda"), "missing required key (needed for a synthetic network)");
  }
  if (!m.lambda.empty() && m.lambda.size() != m.rank) bad(s.path("lambda"), "length must equal rank");
  if (m.rank >= m.nodes) bad(s.path("rank"), "must be smaller than nodes");
  return m;
}

json model_to_json(const ModelSpec& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, BvmfModel>) {
          return {{"c", m.c}, {"A", m.a}};
        } else if constexpr (std::is_same_v<T, VolleyballModel>) {
          return {{"alpha", m.alpha}};
        } else if constexpr (std::is_same_v<T, BenchModel>) {
          return {{"alphas", m.alphas}, {"samplers", m.samplers}};
        } else {
          return {{"rank", m.rank},       {"nodes", m.nodes},         {"lambda", m.lambda},
                  {"intercept", m.intercept}, {"data_seed", m.data_seed}};
        }
      },
      model);
}

std::string default_kernel(const std::string& experiment) {
  if (experiment == "volleyball") return "spherical-hmc";
  if (experiment == "dirichlet-bench") return "all";
  return "geodesic-hmc";
}

json bvmf_preset() {
  return {{"experiment", "bvmf"},
          {"seed", 1},
          {"n_samples", 200},
          {"output", "figure4"},
          {"kernel", {{"type", "geodesic-hmc"}, {"epsilon", 0.01}, {"steps", 20}}},
          {"model", {{"c", {0.0, 0.0, 0.0, 0.0, 0.0}}, {"A_diag", {-20.0, -10.0, 0.0, 10.0, 20.0}}}}};
}

std::string volleyball_fixture() { return (data_directory() / "volleyball_synthetic.txt").string(); }

}  // namespace

std::filesystem::path data_directory() { return GEOMC_DATA_DIR; }

ExperimentConfig parse_config(const json& doc) {
  const Section root(doc, "",
                     {"experiment", "kernel", "ladder", "n_samples", "burn_in", "seed", "dataset",
                      "output", "model"});
  ExperimentConfig cfg;
  cfg.experiment = root.string("experiment");
  if (!contains(kExperiments, cfg.experiment)) {
    bad("experiment", "unknown experiment '" + cfg.experiment + "' (expected one of " +
                          join(kExperiments) + ")");
  }
  cfg.n_samples = root.count("n_samples", 10);
  cfg.burn_in = root.has("burn_in") ? root.count("burn_in", 0) : cfg.n_samples / 10;
  if (cfg.burn_in >= cfg.n_samples) bad("burn_in", "must be smaller than n_samples");
  cfg.seed = root.seed("seed");
  cfg.output = root.string("output");
  if (cfg.output.empty()) bad("output", "must not be empty");
  if (root.has("dataset")) cfg.dataset = root.string("dataset");

  const Section kernel(root.raw("kernel"), "kernel", {"type", "epsilon", "steps"});
  cfg.kernel.type = kernel.has("type") ? kernel.string("type") : default_kernel(cfg.experiment);
  cfg.kernel.epsilon = kernel.numbers("epsilon", true);
  require_positive(cfg.kernel.epsilon, "kernel.epsilon");
  cfg.kernel.steps = kernel.has("steps") ? kernel.count("steps", 1) : 20;

  if (root.has("ladder")) {
    const Section ladder(root.raw("ladder"), "ladder", {"rhos", "exchanges"});
    LadderSpec spec;
    spec.rhos = ladder.numbers("rhos", false);
    try {
      TemperatureLadder check(spec.rhos);
    } catch (const Error& e) {
      bad("ladder.rhos", e.what());
    }
    if (ladder.has("exchanges")) spec.exchanges = ladder.count("exchanges", 0);
    cfg.ladder = spec;
  }

  const Section model(root.has("model") ? root.raw("model") : json::object(), "model",
                      cfg.experiment == "bvmf"         ? std::vector<std::string>{"c", "A", "A_diag"}
                      : cfg.experiment == "volleyball" ? std::vector<std::string>{"alpha"}
                      : cfg.experiment == "dirichlet-bench"
                          ? std::vector<std::string>{"alphas", "samplers"}
                          : std::vector<std::string>{"rank", "nodes", "lambda", "intercept",
                                                     "data_seed"});

  const auto single_epsilon = [&] {
    if (cfg.kernel.epsilon.size() != 1) bad("kernel.epsilon", "this kernel takes a single step size");
  };

  if (cfg.experiment == "bvmf") {
    if (cfg.kernel.type != "geodesic-hmc") bad("kernel.type", "bvmf supports geodesic-hmc only");
    single_epsilon();
    cfg.model = parse_bvmf(model);
  } else if (cfg.experiment == "volleyball") {
    if (!contains(kVolleyballKernels, cfg.kernel.type)) {
      bad("kernel.type", "expected one of " + join(kVolleyballKernels));
    }
    single_epsilon();
    VolleyballModel m;
    if (model.has("alpha")) m.alpha = model.number("alpha");
    if (!(m.alpha > 0.0)) bad("model.alpha", "must be positive");
    if (!cfg.dataset) bad("dataset", "missing required key");
    cfg.model = m;
  } else if (cfg.experiment == "dirichlet-bench") {
    if (cfg.kernel.type != "all") bad("kernel.type", "dirichlet-bench runs every sampler; use 'all'");
    if (cfg.ladder) bad("ladder", "not supported for dirichlet-bench");
    single_epsilon();
    BenchModel m;
    m.alphas = model.has("alphas") ? model.numbers("alphas", false)
                                   : std::vector<double>{0.1, 0.5, 1.0, 5.0};
    require_positive(m.alphas, "model.alphas");
    m.samplers = model.has("samplers") ? model.strings("samplers") : kVolleyballKernels;
    for (const auto& s : m.samplers) {
      if (!contains(kVolleyballKernels, s)) bad("model.samplers", "unknown sampler '" + s + "'");
    }
    if (!cfg.dataset) bad("dataset", "missing required key");
    cfg.model = m;
  } else {
    if (cfg.kernel.type != "geodesic-hmc") bad("kernel.type", "eigenmodel supports geodesic-hmc only");
    if (cfg.kernel.epsilon.size() != 1 && cfg.kernel.epsilon.size() != 3) {
      bad("kernel.epsilon", "expected one value or three (U, Lambda, c)");
    }
    cfg.model = parse_eigenmodel(model, cfg.dataset.has_value());
  }
  if (cfg.ladder && cfg.kernel.type != "geodesic-hmc" && cfg.kernel.type != "spherical-hmc" &&
      cfg.kernel.type != "simplex-hmc") {
    bad("ladder", "parallel tempering needs an HMC kernel");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

json serialize_config(const ExperimentConfig& cfg) {
  json doc{{"experiment", cfg.experiment},
           {"kernel", {{"type", cfg.kernel.type}, {"epsilon", cfg.kernel.epsilon}, {"steps", cfg.kernel.steps}}},
           {"n_samples", cfg.n_samples},
           {"burn_in", cfg.burn_in},
           {"seed", cfg.seed},
           {"output", cfg.output},
           {"model", model_to_json(cfg.model)}};
  if (cfg.ladder) doc["ladder"] = {{"rhos", cfg.ladder->rhos}, {"exchanges", cfg.ladder->exchanges}};
  if (cfg.dataset) doc["dataset"] = *cfg.dataset;
  return doc;
}

std::vector<std::string> preset_names() {
  return {"figure4", "figure5", "volleyball", "table1", "eigenmodel", "eigenmodel-pt"};
}

json preset_document(const std::string& name) {
  if (name == "figure4") return bvmf_preset();
  if (name == "figure5") {
    json doc = bvmf_preset();
    doc["output"] = "figure5";
    doc["ladder"] = {{"rhos", TemperatureLadder::uniform(10).rhos()}, {"exchanges", 10}};
    return doc;
  }
  if (name == "volleyball") {
    return {{"experiment", "volleyball"},
            {"seed", 1},
            {"n_samples", 100000},
            {"output", "volleyball"},
            {"dataset", volleyball_fixture()},
            {"kernel", {{"type", "spherical-hmc"}, {"epsilon", 0.01}, {"steps", 20}}},
            {"model", {{"alpha", 0.5}}}};
  }
  if (name == "table1") {
    return {{"experiment", "dirichlet-bench"},
            {"seed", 1},
            {"n_samples", 100000},
            {"output", "table1"},
            {"dataset", volleyball_fixture()},
            {"kernel", {{"type", "all"}, {"epsilon", 0.01}, {"steps", 20}}},
            {"model", {{"alphas", {0.1, 0.5, 1.0, 5.0}}, {"samplers", kVolleyballKernels}}}};
  }
  if (name == "eigenmodel" || name == "eigenmodel-pt") {
    json doc{{"experiment", "eigenmodel"},
             {"seed", 1},
             {"n_samples", 2000},
             {"output", name},
             {"kernel", {{"type", "geodesic-hmc"}, {"epsilon", {0.005, 0.1, 0.001}}, {"steps", 20}}},
             {"model",
              {{"rank", 3},
               {"nodes", 20},
               {"lambda", {15.0, -10.0, 8.0}},
               {"intercept", -0.5},
               {"data_seed", 7}}}};
    if (name == "eigenmodel-pt") {
      doc["ladder"] = {{"rhos", TemperatureLadder::geometric(20, 0.05).rhos()}, {"exchanges", 10}};
    }
    return doc;
  }
  throw ParseError("unknown preset '" + name + "' (expected one of " + join(preset_names()) + ")");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ParseError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ParseError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

}  // namespace geomc
