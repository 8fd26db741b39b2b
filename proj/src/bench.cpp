#include "robust_cluster/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "parallel.hpp"
#include "robust_cluster/baselines.hpp"
#include "robust_cluster/cod.hpp"
#include "robust_cluster/dataset.hpp"
#include "robust_cluster/error.hpp"
#include "robust_cluster/iod.hpp"

namespace robust_cluster {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kOutlierStream = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* init_name(InitMethod m) {
  switch (m) {
    case InitMethod::iod: return "IOD";
    case InitMethod::kmeanspp: return "kmeans++";
    case InitMethod::random: return "random";
    case InitMethod::oracle: return "oracle";
  }
  return "?";
}

const char* init_key(InitMethod m) {
  switch (m) {
    case InitMethod::iod: return "iod";
    case InitMethod::kmeanspp: return "kmeanspp";
    case InitMethod::random: return "random";
    case InitMethod::oracle: return "oracle";
  }
  return "?";
}

const char* cluster_name(ClusterMethod m) {
  switch (m) {
    case ClusterMethod::cod: return "COD";
    case ClusterMethod::lloyd: return "Lloyd";
    case ClusterMethod::kmedian: return "kmedian";
  }
  return "?";
}

const char* cluster_key(ClusterMethod m) {
  switch (m) {
    case ClusterMethod::cod: return "cod";
    case ClusterMethod::lloyd: return "lloyd";
    case ClusterMethod::kmedian: return "kmedian";
  }
  return "?";
}

InitMethod parse_init(const std::string& s) {
  if (s == "iod") return InitMethod::iod;
  if (s == "kmeanspp" || s == "kmeans++") return InitMethod::kmeanspp;
  if (s == "random") return InitMethod::random;
  if (s == "oracle") return InitMethod::oracle;
  throw ContractViolation("unknown init method '" + s + "'");
}

ClusterMethod parse_cluster(const std::string& s) {
  if (s == "cod") return ClusterMethod::cod;
  if (s == "lloyd") return ClusterMethod::lloyd;
  if (s == "kmedian") return ClusterMethod::kmedian;
  throw ContractViolation("unknown cluster method '" + s + "'");
}

const char* strategy_key(OutlierStrategy s) {
  switch (s) {
    case OutlierStrategy::far_clump: return "far_clump";
    case OutlierStrategy::midpoints: return "midpoints";
    case OutlierStrategy::ring: return "ring";
  }
  return "?";
}

OutlierStrategy parse_strategy(const std::string& s) {
  if (s == "far_clump") return OutlierStrategy::far_clump;
  if (s == "midpoints") return OutlierStrategy::midpoints;
  if (s == "ring") return OutlierStrategy::ring;
  throw ContractViolation("unknown outlier strategy '" + s + "'");
}

// One rep's data, shared by all methods.
struct RepData {
  PointSet points;
  LabelVector truth;  // sentinel 0 on injected outliers
  std::vector<bool> keep_mask;
  CentroidSet oracle;  // true centroids, or class means for real data
  std::size_t k = 0;
  double min_fraction = 0.0;
};

CentroidSet class_means(const PointSet& points, const LabelVector& truth) {
  const auto members = truth.members();
  std::vector<double> c;
  for (const auto& m : members) {
    const auto mean = cluster_mean(points, m);
    c.insert(c.end(), mean.begin(), mean.end());
  }
  return CentroidSet(members.size(), points.dim(), std::move(c));
}

RepData make_rep_data(const ExperimentConfig& cfg, std::uint64_t rep_seed,
                      const LetterRows* letters) {
  Rng data_rng(derive_seed(rep_seed, kDataStream));
  if (const auto* mix = std::get_if<MixtureScenario>(&cfg.scenario)) {
    CentroidSet centroids = gen_centroids(mix->k, mix->d, mix->delta_sep, data_rng);
    MixtureSpec spec{centroids, std::vector<std::size_t>(mix->k, mix->per_cluster), mix->law};
    LabeledSample s = sample_mixture(spec, data_rng);
    ContaminatedSample c{s.points, s.labels, std::vector<bool>(s.points.size(), true)};
    if (cfg.outliers && cfg.outliers->count > 0) {
      Rng out_rng(derive_seed(rep_seed, kOutlierStream));
      c = inject_outliers(s.points, s.labels, centroids, *cfg.outliers, out_rng);
    }
    const double frac = static_cast<double>(mix->per_cluster) /
                        static_cast<double>(c.points.size());
    return {std::move(c.points), std::move(c.labels), std::move(c.keep_mask), std::move(centroids),
            mix->k, frac};
  }
  const auto& let = std::get<LettersScenario>(cfg.scenario);
  CsvDataset ds = sample_letters(*letters, let.classes, let.per_class, let.outlier_class,
                                 let.outlier_count, data_rng);
  std::vector<std::size_t> clean;
  for (std::size_t i = 0; i < ds.keep_mask.size(); ++i)
    if (ds.keep_mask[i]) clean.push_back(i);
  const PointSet clean_pts = ds.points.subset(clean);
  std::vector<int> clean_lab;
  for (std::size_t i : clean) clean_lab.push_back((*ds.truth)[i]);
  CentroidSet oracle = class_means(clean_pts, LabelVector(clean_lab, ds.truth->k()));
  const double frac = static_cast<double>(let.per_class) / static_cast<double>(ds.points.size());
  return {std::move(ds.points), std::move(*ds.truth), std::move(ds.keep_mask), std::move(oracle),
          let.classes.size(), frac};
}

IodParams iod_params_for(const ExperimentConfig& cfg, const RepData& data) {
  IodParams p;
  if (cfg.iod_overrides) {
    p.m1 = cfg.iod_overrides->m1;
    p.m = cfg.iod_overrides->m;
    p.beta = cfg.iod_overrides->beta;
    p.k = static_cast<int>(data.k);
  } else {
    p = default_params(data.points.size(), static_cast<int>(data.k),
                       cfg.alpha.value_or(data.min_fraction));
  }
  return p;
}

struct IodCache {
  bool computed = false;
  std::optional<CentroidSet> centroids;  // empty on infeasible
  double seconds = 0.0;
};

double score(const LabelVector& est, const RepData& data) {
  bool masked = false;
  for (bool b : data.keep_mask) masked |= !b;
  return masked ? mislabeling_on_mask(est, data.truth, data.keep_mask)
                : mislabeling(est, data.truth);
}

double run_method(const ExperimentConfig& cfg, const MethodSpec& m, const RepData& data,
                  IodCache& cache, std::uint64_t rep_seed) {
  Rng rng(derive_seed(rep_seed, stream_id(m.label())));
  std::optional<CentroidSet> init;
  switch (m.init) {
    case InitMethod::iod:
      if (!cache.computed) {
        const auto t0 = Clock::now();
        cache.computed = true;
        try {
          const auto params = iod_params_for(cfg, data);
          // a budget larger than the sample is a per-rep failure, not a bad call
          if (data.points.size() < params.m1 + params.m) throw InfeasibleError("n < m1 + m");
          cache.centroids = iodk(data.points, params).centroids;
        } catch (const InfeasibleError&) {
          cache.centroids.reset();
        }
        cache.seconds = seconds_since(t0);
      }
      if (!cache.centroids) return kNaN;
      init = *cache.centroids;
      break;
    case InitMethod::kmeanspp: init = kmeanspp_init(data.points, data.k, rng); break;
    case InitMethod::random: init = random_init(data.points, data.k, rng); break;
    case InitMethod::oracle: init = data.oracle; break;
  }

  LloydParams lp{cfg.epsilon, cfg.max_iterations, EmptyClusterRule::reseed_random_point};
  switch (m.cluster) {
    case ClusterMethod::cod: {
      CodParams cp{m.delta, cfg.epsilon, cfg.max_iterations};
      return score(cod_cluster(data.points, *init, cp).final_state.labels, data);
    }
    case ClusterMethod::lloyd: return score(lloyd(data.points, *init, lp, rng).labels, data);
    case ClusterMethod::kmedian:
      return score(kmedian_hybrid(data.points, *init, lp, rng).labels, data);
  }
  return kNaN;
}

std::optional<LetterRows> load_letters_if_needed(const ExperimentConfig& cfg) {
  if (const auto* let = std::get_if<LettersScenario>(&cfg.scenario)) return read_letters(let->path);
  return std::nullopt;
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json law_to_json(const ErrorLaw& law) {
  return std::visit(
      [](const auto& l) -> json {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, GaussianLaw>) {
          return {{"type", "gaussian"}, {"sigma", l.sigma}};
        } else if constexpr (std::is_same_v<T, MvtLaw>) {
          return {{"type", "mvt"},
                  {"nu", l.nu},
                  {"sigma", l.sigma},
                  {"convention", l.convention == ScaleConvention::per_coordinate
                                     ? "per_coordinate"
                                     : "matrix_scalar"}};
        } else if constexpr (std::is_same_v<T, UniformBoxLaw>) {
          return {{"type", "uniform_box"}, {"half_width", l.half_width}};
        } else {
          return {{"type", "radial_decay"}, {"epsilon", l.epsilon}, {"scale", l.scale}};
        }
      },
      law);
}

ErrorLaw law_from_json(const json& j) {
  const std::string type = j.value("type", "mvt");
  if (type == "gaussian") return GaussianLaw{j.value("sigma", 1.0)};
  if (type == "mvt") {
    MvtLaw l;
    l.nu = j.value("nu", l.nu);
    l.sigma = j.value("sigma", l.sigma);
    const std::string conv = j.value("convention", "per_coordinate");
    if (conv == "per_coordinate")
      l.convention = ScaleConvention::per_coordinate;
    else if (conv == "matrix_scalar")
      l.convention = ScaleConvention::matrix_scalar;
    else
      throw ContractViolation("unknown scale convention '" + conv + "'");
    return l;
  }
  if (type == "uniform_box") return UniformBoxLaw{j.value("half_width", 1.0)};
  if (type == "radial_decay") return RadialDecayLaw{j.value("epsilon", 0.5), j.value("scale", 1.0)};
  throw ContractViolation("unknown error law '" + type + "'");
}

std::string letters_string(const std::vector<char>& v) { return std::string(v.begin(), v.end()); }

}  // namespace

std::string MethodSpec::label() const {
  return std::string(cluster_name(cluster)) + "+" + init_name(init);
}

void ExperimentConfig::validate() const {
  detail::require(reps >= 1, "reps must be >= 1");
  detail::require(!methods.empty(), "at least one method is required");
  detail::require(max_iterations >= 1, "max_iterations must be >= 1");
  detail::require(epsilon >= 0.0, "epsilon must be >= 0");
  std::set<std::string> labels;
  for (const auto& m : methods) {
    detail::require(labels.insert(m.label()).second, "duplicate method " + m.label());
    if (m.cluster == ClusterMethod::cod)
      detail::require(m.delta >= 0.0 && m.delta < 0.5, "COD delta must be in [0, 0.5)");
  }
  if (const auto* mix = std::get_if<MixtureScenario>(&scenario)) {
    detail::require(mix->k >= 2, "scenario k must be >= 2");
    detail::require(mix->d >= 1 && mix->per_cluster >= 1, "scenario d and per_cluster must be >= 1");
    detail::require(mix->delta_sep > 0.0, "delta_sep must be > 0");
  } else {
    const auto& let = std::get<LettersScenario>(scenario);
    detail::require(let.classes.size() >= 2, "letters scenario needs at least two classes");
    detail::require(let.per_class >= 1, "per_class must be >= 1");
  }
  if (alpha) detail::require(*alpha > 0.0 && *alpha < 1.0, "alpha must be in (0, 1)");
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ROBUST_CLUSTER_THREADS"); env && *env) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentReport run_cell(const ExperimentConfig& config) {
  config.validate();
  const auto t0 = Clock::now();
  const auto letters = load_letters_if_needed(config);
  const std::size_t nm = config.methods.size();

  std::vector<std::vector<double>> values(config.reps, std::vector<double>(nm, kNaN));
  std::vector<std::vector<double>> times(config.reps, std::vector<double>(nm, 0.0));
  detail::parallel_for(config.reps, resolve_threads(config.threads), [&](std::size_t r) {
    const std::uint64_t seed = config.rep_seed(r);
    const RepData data = make_rep_data(config, seed, letters ? &*letters : nullptr);
    IodCache cache;
    for (std::size_t j = 0; j < nm; ++j) {
      const auto tm = Clock::now();
      values[r][j] = run_method(config, config.methods[j], data, cache, seed);
      times[r][j] = seconds_since(tm);
    }
  });

  ExperimentReport report;
  report.config = config;
  for (std::size_t r = 0; r < config.reps; ++r) report.seeds.push_back(config.rep_seed(r));
  for (std::size_t j = 0; j < nm; ++j) {
    MethodReport mr;
    mr.label = config.methods[j].label();
    for (std::size_t r = 0; r < config.reps; ++r) {
      mr.raw.push_back(values[r][j]);
      mr.wall_seconds += times[r][j];
      if (std::isnan(values[r][j])) ++mr.failures;
    }
    mr.stats = mean_and_stderr(mr.raw);
    mr.valid = static_cast<double>(mr.failures) <= 0.1 * static_cast<double>(config.reps);
    report.methods.push_back(std::move(mr));
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

double replay(const ExperimentConfig& config, std::size_t rep, std::size_t method) {
  config.validate();
  detail::require(method < config.methods.size(), "method index out of range");
  const auto letters = load_letters_if_needed(config);
  const std::uint64_t seed = config.rep_seed(rep);
  const RepData data = make_rep_data(config, seed, letters ? &*letters : nullptr);
  IodCache cache;
  return run_method(config, config.methods[method], data, cache, seed);
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "method,rep,seed,mislabeling\n";
  for (const auto& m : report.methods)
    for (std::size_t r = 0; r < m.raw.size(); ++r)
      out << m.label << ',' << r << ',' << report.seeds[r] << ',' << fmt_double(m.raw[r]) << '\n';
  return out.str();
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  if (const auto* mix = std::get_if<MixtureScenario>(&c.scenario)) {
    j["scenario"] = {{"type", "mixture"},       {"k", mix->k},
                     {"d", mix->d},             {"law", law_to_json(mix->law)},
                     {"delta_sep", mix->delta_sep}, {"per_cluster", mix->per_cluster}};
  } else {
    const auto& let = std::get<LettersScenario>(c.scenario);
    j["scenario"] = {{"type", "letters"},
                     {"path", let.path.string()},
                     {"classes", letters_string(let.classes)},
                     {"per_class", let.per_class},
                     {"outlier_class", let.outlier_class ? std::string(1, *let.outlier_class) : ""},
                     {"outlier_count", let.outlier_count}};
  }
  j["methods"] = json::array();
  for (const auto& m : c.methods)
    j["methods"].push_back(
        {{"init", init_key(m.init)}, {"cluster", cluster_key(m.cluster)}, {"delta", m.delta}});
  j["reps"] = c.reps;
  j["base_seed"] = c.base_seed;
  j["outliers"] = c.outliers ? json{{"count", c.outliers->count},
                                    {"strategy", strategy_key(c.outliers->strategy)},
                                    {"multiple", c.outliers->multiple},
                                    {"radius", c.outliers->radius}}
                             : json(nullptr);
  j["iod_overrides"] = c.iod_overrides ? json{{"m1", c.iod_overrides->m1},
                                              {"m", c.iod_overrides->m},
                                              {"beta", c.iod_overrides->beta}}
                                       : json(nullptr);
  j["epsilon"] = c.epsilon;
  j["max_iterations"] = c.max_iterations;
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig c;
    c.name = j.value("name", "");
    const json sc = j.value("scenario", json::object());
    const std::string type = sc.value("type", "mixture");
    if (type == "mixture") {
      MixtureScenario mix;
      mix.k = sc.value("k", mix.k);
      mix.d = sc.value("d", mix.d);
      if (sc.contains("law")) mix.law = law_from_json(sc["law"]);
      mix.delta_sep = sc.value("delta_sep", mix.delta_sep);
      mix.per_cluster = sc.value("per_cluster", mix.per_cluster);
      c.scenario = mix;
    } else if (type == "letters") {
      LettersScenario let;
      let.path = sc.at("path").get<std::string>();
      const std::string classes = sc.value("classes", std::string("WV"));
      let.classes.assign(classes.begin(), classes.end());
      let.per_class = sc.value("per_class", let.per_class);
      const std::string oc = sc.value("outlier_class", std::string());
      if (!oc.empty()) let.outlier_class = oc[0];
      let.outlier_count = sc.value("outlier_count", let.outlier_count);
      c.scenario = let;
    } else {
      throw ContractViolation("unknown scenario type '" + type + "'");
    }
    for (const auto& m : j.at("methods")) {
      MethodSpec ms;
      ms.init = parse_init(m.value("init", "iod"));
      ms.cluster = parse_cluster(m.value("cluster", "cod"));
      ms.delta = m.value("delta", ms.delta);
      c.methods.push_back(ms);
    }
    c.reps = j.value("reps", c.reps);
    c.base_seed = j.value("base_seed", c.base_seed);
    if (j.contains("outliers") && !j["outliers"].is_null()) {
      const auto& o = j["outliers"];
      OutlierSpec spec;
      spec.count = o.value("count", std::size_t{0});
      spec.strategy = parse_strategy(o.value("strategy", "far_clump"));
      spec.multiple = o.value("multiple", spec.multiple);
      spec.radius = o.value("radius", spec.radius);
      c.outliers = spec;
    }
    if (j.contains("iod_overrides") && !j["iod_overrides"].is_null()) {
      const auto& o = j["iod_overrides"];
      c.iod_overrides = IodOverrides{o.at("m1").get<std::size_t>(), o.at("m").get<std::size_t>(),
                                     o.at("beta").get<double>()};
    }
    c.epsilon = j.value("epsilon", c.epsilon);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    if (j.contains("alpha") && !j["alpha"].is_null()) c.alpha = j["alpha"].get<double>();
    c.threads = j.value("threads", std::size_t{0});
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid experiment config: ") + e.what());
  }
}

json report_json(const ExperimentReport& report, const PublishedCellRef& published) {
  json j;
  j["schema"] = "robust_cluster.report/1";
  j["config"] = config_to_json(report.config);
  j["seeds"] = report.seeds;
  j["wall_seconds"] = report.wall_seconds;
  j["methods"] = json::array();
  for (const auto& m : report.methods) {
    json mj{{"label", m.label},
            {"mean", number_or_null(m.stats.mean)},
            {"stderr", m.stats.stderr_},
            {"count", m.stats.count},
            {"failures", m.failures},
            {"valid", m.valid},
            {"wall_seconds", m.wall_seconds}};
    json raw = json::array();
    for (double v : m.raw) raw.push_back(number_or_null(v));
    mj["raw"] = raw;
    if (published.tables && published.tables->contains(published.table, published.scenario, m.label)) {
      const auto ref = published.tables->lookup(published.table, published.scenario, m.label);
      mj["published"] = {{"mean", ref.mean},
                     {"stderr", ref.stderr_},
                     {"abs_delta", number_or_null(std::abs(m.stats.mean - ref.mean))}};
    }
    j["methods"].push_back(std::move(mj));
  }
  return j;
}

TableId parse_table_id(const std::string& name) {
  if (name == "nu") return TableId::nu;
  if (name == "sigma") return TableId::sigma;
  if (name == "dim") return TableId::dim;
  if (name == "letters") return TableId::letters;
  throw ContractViolation("unknown table '" + name + "' (expected nu, sigma, dim or letters)");
}

std::string to_string(TableId id) {
  switch (id) {
    case TableId::nu: return "nu";
    case TableId::sigma: return "sigma";
    case TableId::dim: return "dim";
    case TableId::letters: return "letters";
  }
  return "?";
}

std::vector<std::pair<std::string, ExperimentConfig>> table_grid(TableId id,
                                                                 const TableOptions& options) {
  detail::require(options.reps >= 1, "reps must be >= 1");
  detail::require(options.scale > 0.0, "scale must be > 0");
  auto scaled = [&](std::size_t base) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(base * options.scale)));
  };
  auto base = [&](double delta) {
    ExperimentConfig c;
    c.reps = options.reps;
    c.threads = options.threads;
    c.iod_overrides = IodOverrides{20, 10, 0.05};
    c.methods = {{InitMethod::iod, ClusterMethod::cod, delta},
                 {InitMethod::iod, ClusterMethod::lloyd, delta},
                 {InitMethod::kmeanspp, ClusterMethod::lloyd, delta},
                 {InitMethod::random, ClusterMethod::lloyd, delta}};
    return c;
  };
  auto mixture = [&](std::size_t k, std::size_t d, double nu, double sigma) {
    ExperimentConfig c = base(0.3);
    MixtureScenario mix;
    mix.k = k;
    mix.d = d;
    mix.law = MvtLaw{nu, sigma, ScaleConvention::per_coordinate};
    mix.delta_sep = 25.0;
    mix.per_cluster = scaled(200);
    c.scenario = mix;
    return c;
  };
  auto fmt = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };

  std::vector<std::pair<std::string, ExperimentConfig>> grid;
  const std::vector<double> values = id == TableId::nu      ? std::vector<double>{1, 1.5, 10}
                                     : id == TableId::sigma ? std::vector<double>{1, 5, 10}
                                                            : std::vector<double>{2, 10, 30};
  if (id == TableId::letters) {
    detail::require(!options.letters_path.empty(), "the letters table needs a dataset path");
    for (const std::string classes : {"WV", "XMA"}) {
      for (const bool with : {false, true}) {
        ExperimentConfig c = base(0.48);
        c.methods.insert(c.methods.begin() + 1, {InitMethod::iod, ClusterMethod::kmedian, 0.48});
        LettersScenario let;
        let.path = options.letters_path;
        let.classes.assign(classes.begin(), classes.end());
        let.per_class = scaled(100);
        if (with) {
          let.outlier_class = 'R';
          let.outlier_count = 20;
        }
        c.scenario = let;
        grid.emplace_back("classes=" + classes + " outliers=" + (with ? "with" : "without"),
                          std::move(c));
      }
    }
  } else {
    for (std::size_t k : {2u, 3u}) {
      for (double v : values) {
        ExperimentConfig c = id == TableId::nu      ? mixture(k, 5, v, 5.0)
                             : id == TableId::sigma ? mixture(k, 10, 1.5, v)
                                                    : mixture(k, static_cast<std::size_t>(v), 1.5, 5.0);
        const char* param = id == TableId::nu ? "nu" : id == TableId::sigma ? "sigma" : "d";
        grid.emplace_back("k=" + std::to_string(k) + " " + param + "=" + fmt(v), std::move(c));
      }
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i].second.base_seed = derive_seed(options.seed, i);
    grid[i].second.name = to_string(id) + ": " + grid[i].first;
  }
  return grid;
}

TableReport reproduce_table(TableId id, const TableOptions& options) {
  TableReport report;
  report.id = id;
  for (auto& [key, cfg] : table_grid(id, options)) {
    report.scenarios.push_back(key);
    report.cells.push_back(run_cell(cfg));
  }
  return report;
}

std::string render_table(const TableReport& report, const ReferenceTables& reference) {
  std::ostringstream out;
  const std::string table = to_string(report.id);
  out << std::left << std::setw(30) << "scenario" << std::setw(16) << "method" << std::setw(20)
      << "ours mean (se)" << std::setw(20) << "published mean (se)" << "|diff|\n";
  out << std::string(92, '-') << '\n';
  out << std::fixed << std::setprecision(3);
  for (std::size_t s = 0; s < report.cells.size(); ++s) {
    for (const auto& m : report.cells[s].methods) {
      std::ostringstream ours, published, diff;
      ours << std::fixed << std::setprecision(3) << m.stats.mean << " (" << m.stats.stderr_ << ")";
      if (!m.valid) ours << '*';
      if (reference.contains(table, report.scenarios[s], m.label)) {
        const auto ref = reference.lookup(table, report.scenarios[s], m.label);
        published << std::fixed << std::setprecision(3) << ref.mean << " (" << ref.stderr_ << ")";
        diff << std::fixed << std::setprecision(3) << std::abs(m.stats.mean - ref.mean);
      } else {
        published << "-";
        diff << "-";
      }
      out << std::setw(30) << report.scenarios[s] << std::setw(16) << m.label << std::setw(20)
          << ours.str() << std::setw(20) << published.str() << diff.str() << '\n';
    }
  }
  return out.str();
}

json table_json(const TableReport& report, const ReferenceTables& reference) {
  json j;
  j["schema"] = "robust_cluster.table/1";
  j["table"] = to_string(report.id);
  j["cells"] = json::array();
  for (std::size_t s = 0; s < report.cells.size(); ++s) {
    json cell = report_json(report.cells[s], {&reference, to_string(report.id), report.scenarios[s]});
    cell["scenario"] = report.scenarios[s];
    j["cells"].push_back(std::move(cell));
  }
  return j;
}

namespace {

void summarize(PathologyCase& c, const PathologyConfig& cfg) {
  c.lloyd_stats = mean_and_stderr(c.lloyd);
  c.cod_stats = mean_and_stderr(c.cod);
  std::size_t lf = 0, cs = 0;
  for (double v : c.lloyd)
    if (!std::isnan(v) && v >= cfg.lloyd_threshold) ++lf;
  for (double v : c.cod)
    if (!std::isnan(v) && v <= cfg.cod_threshold) ++cs;
  if (!c.lloyd.empty()) c.lloyd_fail_fraction = static_cast<double>(lf) / c.lloyd.size();
  if (!c.cod.empty()) c.cod_success_fraction = static_cast<double>(cs) / c.cod.size();
}

}  // namespace

PathologyReport pathology_suite(const PathologyConfig& cfg) {
  PathologyReport report;
  report.three.name = "three_centroids";
  report.heavy.name = "heavy_tail";
  const std::size_t R3 = cfg.three_reps.value_or(cfg.reps);
  const std::size_t RH = cfg.heavy_reps.value_or(cfg.reps);
  report.three.lloyd.assign(R3, kNaN);
  report.three.cod.assign(R3, kNaN);
  report.heavy.lloyd.assign(RH, kNaN);
  report.heavy.cod.assign(RH, kNaN);
  std::vector<char> emptied(R3, 0);
  const LloydParams lp{cfg.epsilon, cfg.max_iterations, EmptyClusterRule::reseed_random_point};

  detail::parallel_for(std::max(R3, RH), resolve_threads(cfg.threads), [&](std::size_t r) {
    const std::uint64_t seed = cfg.seed ^ r;
    if (r < R3) {
      Rng data_rng(derive_seed(seed, kDataStream));
      const auto p = lloyd_pathology_three(cfg.three_n, cfg.three_Delta, cfg.three_beta,
                                           cfg.three_c, data_rng);
      Rng lloyd_rng(derive_seed(seed, stream_id("Lloyd")));
      const auto lr = lloyd(p.points, p.initial_labels, lp, lloyd_rng);
      for (const auto& st : lr.history) emptied[r] |= !st.emptied.empty();
      report.three.lloyd[r] = mislabeling(lr.labels, p.truth);
      const auto cr = cod_cluster(p.points, p.initial_labels,
                                  {cfg.three_cod_delta, cfg.epsilon, cfg.max_iterations});
      report.three.cod[r] = mislabeling(cr.final_state.labels, p.truth);
    }
    if (r < RH) {
      Rng data_rng(derive_seed(seed, kDataStream + 100));
      const auto s = lloyd_pathology_heavy(cfg.heavy_n, cfg.heavy_Delta, cfg.heavy_epsilon, data_rng);
      try {
        const auto init = iod2(s.points, default_params(s.points.size(), 2, cfg.heavy_alpha));
        Rng lloyd_rng(derive_seed(seed, stream_id("Lloyd+IOD")));
        report.heavy.lloyd[r] = mislabeling(lloyd(s.points, init.centroids, lp, lloyd_rng).labels,
                                            s.labels);
        const auto cr = cod_cluster(s.points, init.centroids,
                                    {cfg.heavy_cod_delta, cfg.epsilon, cfg.max_iterations});
        report.heavy.cod[r] = mislabeling(cr.final_state.labels, s.labels);
      } catch (const InfeasibleError&) {
        // left as NaN
      }
    }
  });
  for (char e : emptied) report.three.lloyd_emptied_reps += e ? 1 : 0;
  summarize(report.three, cfg);
  summarize(report.heavy, cfg);
  return report;
}

json pathology_json(const PathologyReport& report) {
  auto one = [](const PathologyCase& c) {
    json raw_l = json::array(), raw_c = json::array();
    for (double v : c.lloyd) raw_l.push_back(number_or_null(v));
    for (double v : c.cod) raw_c.push_back(number_or_null(v));
    return json{{"name", c.name},
                {"lloyd_mean", number_or_null(c.lloyd_stats.mean)},
                {"lloyd_stderr", c.lloyd_stats.stderr_},
                {"cod_mean", number_or_null(c.cod_stats.mean)},
                {"cod_stderr", c.cod_stats.stderr_},
                {"lloyd_fail_fraction", c.lloyd_fail_fraction},
                {"cod_success_fraction", c.cod_success_fraction},
                {"lloyd_emptied_reps", c.lloyd_emptied_reps},
                {"lloyd", raw_l},
                {"cod", raw_c}};
  };
  return {{"schema", "robust_cluster.pathology/1"},
          {"three", one(report.three)},
          {"heavy", one(report.heavy)}};
}

}  // namespace robust_cluster
