// robust-cluster: command-line front end for the robust_cluster library.
//
// Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
// 3 contract violation, 4 method infeasible on the data, 5 other failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "robust_cluster/baselines.hpp"
#include "robust_cluster/bench.hpp"
#include "robust_cluster/cod.hpp"
#include "robust_cluster/dataset.hpp"
#include "robust_cluster/error.hpp"
#include "robust_cluster/iod.hpp"
#include "robust_cluster/metrics.hpp"
#include "robust_cluster/reference.hpp"

namespace rc = robust_cluster;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kContract = 3, kInfeasible = 4, kOther = 5 };

constexpr const char* kLettersFormat =
    "expected the UCI Letter Recognition file: 20000 comma-separated rows of\n"
    "  LETTER,f1,...,f16   (a capital letter followed by 16 integers in 0..15)\n"
    "Fetch it with docs/fetch_letters.sh, then pass --letters PATH or set\n"
    "ROBUST_CLUSTER_LETTERS.";

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string shell_quote(const std::string& s) {
  if (s.find_first_of(" \t'\"\\$") == std::string::npos && !s.empty()) return s;
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

fs::path default_letters_path() {
  if (const char* env = std::getenv("ROBUST_CLUSTER_LETTERS"); env && *env) return env;
  return rc::data_dir() / "letter-recognition.data";
}

// ---------------------------------------------------------------- cluster

struct ClusterArgs {
  fs::path input;
  int k = 0;
  std::string method = "cod";
  double delta = 0.3;
  double epsilon = 1e-8;
  int max_iter = 50;
  std::string init = "iod";
  fs::path centroids_in;
  double alpha = 0.0;  // 0: 1/(2k)
  std::uint64_t seed = 1;
  std::string label_column;
  bool header = false;
  bool no_header = false;
  bool standardize = false;
  std::string out = "clusters";
};

std::string cluster_replay_line(const ClusterArgs& a, double alpha) {
  std::ostringstream s;
  s << "robust-cluster cluster " << shell_quote(a.input.string()) << " --k " << a.k
    << " --method " << a.method << " --delta " << a.delta << " --epsilon " << a.epsilon
    << " --max-iter " << a.max_iter << " --init " << a.init;
  if (a.init == "file") s << " --centroids-in " << shell_quote(a.centroids_in.string());
  if (a.init == "iod") s << " --alpha " << alpha;
  s << " --seed " << a.seed;
  if (!a.label_column.empty()) s << " --label-column " << a.label_column;
  if (a.header) s << " --header";
  if (a.no_header) s << " --no-header";
  if (a.standardize) s << " --standardize";
  s << " --out " << shell_quote(a.out);
  return s.str();
}

std::optional<std::size_t> resolve_label_column(const ClusterArgs& a) {
  if (a.label_column.empty()) return std::nullopt;
  if (a.label_column == "last") {
    std::ifstream in(a.input);
    if (!in) throw rc::ParseError("cannot open " + a.input.string());
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    return static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  }
  try {
    std::size_t pos = 0;
    const long v = std::stol(a.label_column, &pos);
    if (pos != a.label_column.size() || v < 0) throw std::invalid_argument("");
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw rc::ContractViolation("--label-column takes a 0-based index or 'last', got '" +
                                a.label_column + "'");
  }
}

int cmd_cluster(const ClusterArgs& a) {
  const double alpha = a.alpha > 0.0 ? a.alpha : 1.0 / (2.0 * a.k);
  std::cerr << "# replay: " << cluster_replay_line(a, alpha) << '\n';

  rc::CsvOptions opt;
  if (a.header) opt.has_header = true;
  if (a.no_header) opt.has_header = false;
  opt.label_column = resolve_label_column(a);
  rc::CsvDataset ds = rc::read_csv(a.input, opt);
  const rc::PointSet points = a.standardize ? rc::standardize(ds.points) : ds.points;
  const std::size_t n = points.size();
  if (a.k < 2) throw rc::ContractViolation("k must be >= 2");
  if (static_cast<std::size_t>(a.k) > n)
    throw rc::ContractViolation("k = " + std::to_string(a.k) + " exceeds the " +
                                std::to_string(n) + " data rows");

  rc::Rng rng(rc::derive_seed(a.seed, rc::stream_id(a.init)));
  std::optional<rc::CentroidSet> init;
  json init_info{{"method", a.init}};
  if (a.init == "iod") {
    const rc::IodParams p = rc::default_params(n, a.k, alpha);
    const rc::IodResult r = rc::iodk(points, p);
    init = r.centroids;
    init_info["m1"] = p.m1;
    init_info["m"] = p.m;
    init_info["beta"] = p.beta;
    init_info["alpha"] = alpha;
    init_info["indices"] = r.indices;
  } else if (a.init == "kmeanspp") {
    init = rc::kmeanspp_init(points, a.k, rng);
  } else if (a.init == "random") {
    init = rc::random_init(points, a.k, rng);
  } else {
    if (a.centroids_in.empty()) throw rc::ContractViolation("--init file needs --centroids-in");
    init = rc::read_centroids_csv(a.centroids_in);
    if (init->k() != static_cast<std::size_t>(a.k) || init->dim() != points.dim())
      throw rc::ContractViolation("centroids file has " + std::to_string(init->k()) + "x" +
                                  std::to_string(init->dim()) + ", expected " +
                                  std::to_string(a.k) + "x" + std::to_string(points.dim()));
  }

  std::optional<rc::CentroidSet> centroids;
  std::optional<rc::LabelVector> labels;
  std::size_t iterations = 0;
  rc::LloydParams lp{a.epsilon, a.max_iter, rc::EmptyClusterRule::reseed_random_point};
  rc::Rng method_rng(rc::derive_seed(a.seed, rc::stream_id(a.method)));
  if (a.method == "cod") {
    const auto r = rc::cod_cluster(points, *init, {a.delta, a.epsilon, a.max_iter});
    centroids = r.final_state.centroids;
    labels = r.final_state.labels;
    iterations = r.history.size();
  } else {
    const auto r = a.method == "lloyd" ? rc::lloyd(points, *init, lp, method_rng)
                                       : rc::kmedian_hybrid(points, *init, lp, method_rng);
    centroids = r.centroids;
    labels = r.labels;
    iterations = r.history.size();
  }

  std::ostringstream lab;
  lab << "row_index,label\n";
  for (std::size_t i = 0; i < n; ++i) lab << i << ',' << (*labels)[i] << '\n';
  std::ostringstream cen;
  cen.precision(17);
  for (std::size_t h = 0; h < centroids->k(); ++h) {
    const auto c = centroids->center(h);
    for (std::size_t j = 0; j < c.size(); ++j) cen << (j ? "," : "") << c[j];
    cen << '\n';
  }

  json summary{{"schema", "robust_cluster.cluster/1"},
               {"replay", cluster_replay_line(a, alpha)},
               {"input", a.input.string()},
               {"n", n},
               {"d", points.dim()},
               {"k", a.k},
               {"method", a.method},
               {"delta", a.delta},
               {"epsilon", a.epsilon},
               {"max_iterations", a.max_iter},
               {"seed", a.seed},
               {"standardized", a.standardize},
               {"init", init_info},
               {"iterations", iterations},
               {"wcss", rc::wcss(points, *centroids)}};
  if (ds.truth) {
    const double loss = rc::mislabeling(*labels, *ds.truth);
    summary["mislabeling"] = loss;
    summary["categories"] = ds.categories;
    std::cout << "mislabeling " << loss << '\n';
  }
  const std::string prefix = a.out;
  write_file(prefix + "_labels.csv", lab.str());
  write_file(prefix + "_centroids.csv", cen.str());
  write_file(prefix + "_summary.json", summary.dump(2) + "\n");
  std::cout << "wrote " << prefix << "_labels.csv, " << prefix << "_centroids.csv, " << prefix
            << "_summary.json\n";
  return kOk;
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
  std::size_t k = 2;
  std::size_t d = 5;
  double nu = 1.5;
  double sigma = 5.0;
  std::string convention = "per_coordinate";
  double delta_sep = 25.0;
  std::size_t per_cluster = 200;
  std::size_t outliers = 0;
  std::string strategy = "far_clump";
  std::size_t reps = 1;
  std::uint64_t seed = 1;
  std::vector<std::string> methods{"cod+iod", "lloyd+iod", "lloyd+kmeanspp", "lloyd+random"};
  double delta = 0.3;
  bool default_iod = false;
  std::size_t threads = 0;
  std::string out = "simulate";
};

rc::MethodSpec parse_method(const std::string& s, double delta) {
  const auto plus = s.find('+');
  if (plus == std::string::npos)
    throw rc::ContractViolation("method '" + s + "' must look like cluster+init, e.g. cod+iod");
  json j{{"cluster", s.substr(0, plus)}, {"init", s.substr(plus + 1)}, {"delta", delta}};
  json cfg{{"methods", json::array({j})}};
  return rc::config_from_json(cfg).methods.front();
}

int emit_report(const rc::ExperimentConfig& cfg, const std::string& prefix,
                const std::string& replay) {
  std::cerr << "# replay: " << replay << '\n';
  const rc::ExperimentReport report = rc::run_cell(cfg);
  write_file(prefix + ".csv", rc::report_csv(report));
  json j = rc::report_json(report);
  j["replay"] = replay;
  write_file(prefix + ".json", j.dump(2) + "\n");
  for (const auto& m : report.methods) {
    std::printf("%-16s %.3f (%.3f)%s\n", m.label.c_str(), m.stats.mean, m.stats.stderr_,
                m.valid ? "" : "  [invalid: too many failed reps]");
  }
  std::cout << "wrote " << prefix << ".csv, " << prefix << ".json\n";
  return kOk;
}

int cmd_simulate(const SimulateArgs& a) {
  rc::ExperimentConfig cfg;
  cfg.name = "simulate";
  rc::MixtureScenario mix;
  mix.k = a.k;
  mix.d = a.d;
  json law{{"type", "mvt"}, {"nu", a.nu}, {"sigma", a.sigma}, {"convention", a.convention}};
  mix.law = std::get<rc::MixtureScenario>(
                rc::config_from_json({{"scenario", {{"type", "mixture"}, {"law", law}}},
                                      {"methods", json::array({json::object()})}})
                    .scenario)
                .law;
  mix.delta_sep = a.delta_sep;
  mix.per_cluster = a.per_cluster;
  cfg.scenario = mix;
  for (const auto& m : a.methods) cfg.methods.push_back(parse_method(m, a.delta));
  cfg.reps = a.reps;
  cfg.base_seed = a.seed;
  cfg.threads = a.threads;
  if (a.outliers > 0) {
    rc::OutlierSpec spec;
    spec.count = a.outliers;
    spec.strategy = rc::config_from_json({{"outliers", {{"strategy", a.strategy}}},
                                          {"methods", json::array({json::object()})}})
                        .outliers->strategy;
    cfg.outliers = spec;
  }
  if (!a.default_iod) cfg.iod_overrides = rc::IodOverrides{20, 10, 0.05};

  std::ostringstream s;
  s << "robust-cluster simulate --k " << a.k << " --d " << a.d << " --nu " << a.nu << " --sigma "
    << a.sigma << " --convention " << a.convention << " --delta-sep " << a.delta_sep
    << " --n-per-cluster " << a.per_cluster << " --outliers " << a.outliers << " --strategy "
    << a.strategy << " --reps " << a.reps << " --seed " << a.seed << " --delta " << a.delta
    << (a.default_iod ? " --default-iod" : "") << " --methods";
  for (const auto& m : a.methods) s << ' ' << m;
  s << " --out " << shell_quote(a.out);
  return emit_report(cfg, a.out, s.str());
}

int cmd_run(const fs::path& config_path, const std::string& out, std::size_t threads) {
  std::ifstream in(config_path);
  if (!in) throw rc::ParseError("cannot open " + config_path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw rc::ParseError(config_path.string() + ": " + e.what());
  }
  rc::ExperimentConfig cfg = rc::config_from_json(j);
  if (threads) cfg.threads = threads;
  return emit_report(cfg, out,
                     "robust-cluster run --config " + shell_quote(config_path.string()) +
                         " --out " + shell_quote(out));
}

// ------------------------------------------------------------------ table

int cmd_table(const std::string& name, std::size_t reps, double scale, std::uint64_t seed,
              fs::path letters, std::size_t threads, const std::string& json_out) {
  const rc::TableId id = rc::parse_table_id(name);
  rc::TableOptions opt;
  opt.reps = reps;
  opt.scale = scale;
  opt.seed = seed;
  opt.threads = threads;
  if (id == rc::TableId::letters) {
    if (letters.empty()) letters = default_letters_path();
    if (!fs::exists(letters)) {
      std::cerr << "error: letters dataset not found at " << letters << "\n" << kLettersFormat
                << '\n';
      return kParse;
    }
    opt.letters_path = letters;
  }
  std::ostringstream replay;
  replay << "robust-cluster table " << name << " --reps " << reps << " --scale " << scale
         << " --seed " << seed;
  if (id == rc::TableId::letters) replay << " --letters " << shell_quote(letters.string());
  std::cerr << "# replay: " << replay.str() << '\n';

  const rc::ReferenceTables ref = rc::ReferenceTables::load_default();
  const rc::TableReport report = rc::reproduce_table(id, opt);
  std::cout << rc::render_table(report, ref);
  if (!json_out.empty()) {
    json j = rc::table_json(report, ref);
    j["replay"] = replay.str();
    write_file(json_out, j.dump(2) + "\n");
  }
  return kOk;
}

// -------------------------------------------------------------- pathology

int cmd_pathology(std::size_t reps, std::uint64_t seed, std::size_t threads,
                  const std::string& json_out) {
  rc::PathologyConfig cfg;
  cfg.reps = reps;
  cfg.seed = seed;
  cfg.threads = threads;
  std::cerr << "# replay: robust-cluster pathology --reps " << reps << " --seed " << seed << '\n';
  const rc::PathologyReport r = rc::pathology_suite(cfg);
  for (const auto* c : {&r.three, &r.heavy}) {
    std::printf("%-16s Lloyd %.3f (%.3f)  COD %.3f (%.3f)  Lloyd>=%.2f in %.0f%%  COD<=%.2f in %.0f%%\n",
                c->name.c_str(), c->lloyd_stats.mean, c->lloyd_stats.stderr_, c->cod_stats.mean,
                c->cod_stats.stderr_, cfg.lloyd_threshold, 100 * c->lloyd_fail_fraction,
                cfg.cod_threshold, 100 * c->cod_success_fraction);
  }
  if (!json_out.empty()) write_file(json_out, rc::pathology_json(r).dump(2) + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust k-means clustering via ordered distances"};
  app.require_subcommand(1);

  ClusterArgs ca;
  auto* cluster = app.add_subcommand("cluster", "Cluster the rows of a CSV file");
  cluster->add_option("input", ca.input, "Input CSV")->required();
  cluster->add_option("-k,--k", ca.k, "Number of clusters (>= 2)")->required();
  cluster->add_option("--method", ca.method, "cod | lloyd | kmedian")
      ->check(CLI::IsMember({"cod", "lloyd", "kmedian"}));
  cluster->add_option("--delta", ca.delta, "COD truncation level in [0, 0.5)");
  cluster->add_option("--epsilon", ca.epsilon, "Stop when mean squared movement <= epsilon");
  cluster->add_option("--max-iter", ca.max_iter, "Iteration cap");
  cluster->add_option("--init", ca.init, "iod | kmeanspp | random | file")
      ->check(CLI::IsMember({"iod", "kmeanspp", "random", "file"}));
  cluster->add_option("--centroids-in", ca.centroids_in, "Initial centroids CSV for --init file");
  cluster->add_option("--alpha", ca.alpha, "Smallest cluster fraction for IOD (default 1/(2k))");
  cluster->add_option("--seed", ca.seed, "Seed for kmeanspp/random init and reseeding");
  cluster->add_option("--label-column", ca.label_column,
                      "0-based column (or 'last') holding true labels");
  auto* hdr = cluster->add_flag("--header", ca.header, "First row is a header");
  cluster->add_flag("--no-header", ca.no_header, "First row is data")->excludes(hdr);
  cluster->add_flag("--standardize", ca.standardize, "Standardize each feature column");
  cluster->add_option("-o,--out", ca.out, "Output prefix");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo run on a t-mixture");
  simulate->add_option("--k", sa.k, "Number of clusters");
  simulate->add_option("--d", sa.d, "Dimension");
  simulate->add_option("--nu", sa.nu, "Degrees of freedom of the t errors");
  simulate->add_option("--sigma", sa.sigma, "Error scale");
  simulate->add_option("--convention", sa.convention, "per_coordinate | matrix_scalar")
      ->check(CLI::IsMember({"per_coordinate", "matrix_scalar"}));
  simulate->add_option("--delta-sep", sa.delta_sep, "Minimum centroid separation");
  simulate->add_option("--n-per-cluster", sa.per_cluster, "Points per cluster");
  simulate->add_option("--outliers", sa.outliers, "Number of injected outliers");
  simulate->add_option("--strategy", sa.strategy, "far_clump | midpoints | ring")
      ->check(CLI::IsMember({"far_clump", "midpoints", "ring"}));
  simulate->add_option("--reps", sa.reps, "Repetitions");
  simulate->add_option("--seed", sa.seed, "Base seed");
  simulate->add_option("--methods", sa.methods, "cluster+init pairs, e.g. cod+iod lloyd+kmeanspp");
  simulate->add_option("--delta", sa.delta, "COD truncation level");
  simulate->add_flag("--default-iod", sa.default_iod,
                     "Derive IOD parameters from alpha instead of m1=20, m=10, beta=0.05");
  simulate->add_option("--threads", sa.threads, "Worker threads (0: ROBUST_CLUSTER_THREADS)");
  simulate->add_option("-o,--out", sa.out, "Output prefix for .csv and .json");

  fs::path run_config;
  std::string run_out = "run";
  std::size_t run_threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("--config", run_config, "Experiment config JSON")->required();
  run->add_option("-o,--out", run_out, "Output prefix for .csv and .json");
  run->add_option("--threads", run_threads, "Worker threads");

  std::string table_name;
  std::size_t table_reps = 30;
  double table_scale = 1.0;
  std::uint64_t table_seed = 1;
  fs::path table_letters;
  std::size_t table_threads = 0;
  std::string table_json_out;
  auto* table = app.add_subcommand("table", "Reproduce a published results table");
  table->add_option("name", table_name, "nu | sigma | dim | letters")->required();
  table->add_option("--reps", table_reps, "Repetitions per cell");
  table->add_option("--scale", table_scale, "Multiplier on the per-cluster count");
  table->add_option("--seed", table_seed, "Base seed");
  table->add_option("--letters", table_letters,
                    "Letters data file (default $ROBUST_CLUSTER_LETTERS or data/letter-recognition.data)");
  table->add_option("--threads", table_threads, "Worker threads");
  table->add_option("--json", table_json_out, "Also write a JSON report here");

  std::size_t path_reps = 100;
  std::uint64_t path_seed = 1;
  std::size_t path_threads = 0;
  std::string path_json;
  auto* pathology = app.add_subcommand("pathology", "Lloyd failure cases versus COD");
  pathology->add_option("--reps", path_reps, "Repetitions");
  pathology->add_option("--seed", path_seed, "Base seed");
  pathology->add_option("--threads", path_threads, "Worker threads");
  pathology->add_option("--json", path_json, "Also write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cluster) return cmd_cluster(ca);
    if (*simulate) return cmd_simulate(sa);
    if (*run) return cmd_run(run_config, run_out, run_threads);
    if (*table) {
      try {
        rc::parse_table_id(table_name);
      } catch (const rc::ContractViolation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
      }
      return cmd_table(table_name, table_reps, table_scale, table_seed, table_letters,
                       table_threads, table_json_out);
    }
    if (*pathology) return cmd_pathology(path_reps, path_seed, path_threads, path_json);
  } catch (const rc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const rc::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kContract;
  } catch (const rc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kUsage;
}
