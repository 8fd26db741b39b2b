#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "robust_cluster/bench.hpp"
#include "robust_cluster/error.hpp"

using namespace robust_cluster;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  MixtureScenario mix;
  mix.k = 2;
  mix.d = 3;
  mix.per_cluster = 40;
  mix.law = MvtLaw{1.5, 5.0, ScaleConvention::per_coordinate};
  c.scenario = mix;
  c.methods = {{InitMethod::iod, ClusterMethod::cod, 0.3},
               {InitMethod::kmeanspp, ClusterMethod::lloyd, 0.3},
               {InitMethod::random, ClusterMethod::lloyd, 0.3}};
  c.reps = 6;
  c.base_seed = 42;
  c.iod_overrides = IodOverrides{20, 10, 0.05};
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("method labels") {
  CHECK(MethodSpec{InitMethod::iod, ClusterMethod::cod}.label() == "COD+IOD");
  CHECK(MethodSpec{InitMethod::kmeanspp, ClusterMethod::lloyd}.label() == "Lloyd+kmeans++");
  CHECK(MethodSpec{InitMethod::iod, ClusterMethod::kmedian}.label() == "kmedian+IOD");
}

TEST_CASE("oracle init on a widely separated instance") {
  ExperimentConfig c;
  MixtureScenario mix;
  mix.delta_sep = 1000.0;
  mix.per_cluster = 50;
  mix.law = GaussianLaw{1.0};
  c.scenario = mix;
  c.methods = {{InitMethod::oracle, ClusterMethod::cod, 0.3}};
  c.reps = 1;
  const auto r = run_cell(c);
  CHECK(r.methods[0].stats.mean == 0.0);
  CHECK(r.methods[0].stats.stderr_ == 0.0);
  CHECK(r.methods[0].raw.size() == 1);
}

TEST_CASE("run_cell is deterministic, thread-count independent and replayable") {
  auto c = small_config();
  const auto a = run_cell(c);
  const auto b = run_cell(c);
  CHECK(report_csv(a) == report_csv(b));
  c.threads = 4;
  const auto par = run_cell(c);
  CHECK(report_csv(par) == report_csv(a));

  for (const auto& m : a.methods) {
    CHECK(m.raw.size() == c.reps);
    CHECK(m.stats.mean >= 0.0);
    CHECK(m.stats.mean <= 1.0);
    CHECK(m.stats.stderr_ >= 0.0);
    const auto [mean, se] = oracle::mean_stderr(m.raw);
    CHECK(m.stats.mean == doctest::Approx(mean));
    CHECK(m.stats.stderr_ == doctest::Approx(se));
  }
  CHECK(a.seeds.size() == c.reps);
  CHECK(a.seeds[3] == (42u ^ 3u));

  for (std::size_t rep : {0u, 5u})
    for (std::size_t j = 0; j < c.methods.size(); ++j)
      CHECK(replay(c, rep, j) == a.methods[j].raw[rep]);
}

TEST_CASE("adding a method leaves the others unchanged") {
  auto c = small_config();
  const auto base = run_cell(c);
  c.methods.insert(c.methods.begin(), {InitMethod::oracle, ClusterMethod::kmedian, 0.3});
  const auto more = run_cell(c);
  for (std::size_t j = 0; j < base.methods.size(); ++j)
    CHECK(more.methods[j + 1].raw == base.methods[j].raw);
}

TEST_CASE("outliers are masked out of the metric") {
  auto c = small_config();
  OutlierSpec spec;
  spec.count = 20;
  c.outliers = spec;
  c.methods = {{InitMethod::oracle, ClusterMethod::cod, 0.3}};
  MixtureScenario mix;
  mix.delta_sep = 1000.0;
  mix.law = GaussianLaw{1.0};
  mix.per_cluster = 50;
  c.scenario = mix;
  const auto r = run_cell(c);
  CHECK(r.methods[0].stats.mean == 0.0);
}

TEST_CASE("infeasible IOD reps are recorded as failures") {
  auto c = small_config();
  c.iod_overrides = IodOverrides{500, 10, 0.05};
  const auto r = run_cell(c);
  CHECK(r.methods[0].failures == c.reps);
  CHECK_FALSE(r.methods[0].valid);
  for (double v : r.methods[0].raw) CHECK(std::isnan(v));
  CHECK(r.methods[1].failures == 0);
  CHECK(r.methods[1].valid);
  CHECK(report_csv(r).find("COD+IOD,0,") != std::string::npos);
}

TEST_CASE("config validation") {
  auto c = small_config();
  c.reps = 0;
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  c = small_config();
  c.methods.clear();
  CHECK_THROWS_AS(c.validate(), ContractViolation);
  c = small_config();
  c.methods.push_back(c.methods.front());
  CHECK_THROWS_AS(c.validate(), ContractViolation);
}

TEST_CASE("config JSON round trip") {
  auto c = small_config();
  OutlierSpec spec;
  spec.count = 7;
  spec.strategy = OutlierStrategy::ring;
  spec.radius = 12.0;
  c.outliers = spec;
  c.alpha = 0.4;
  c.name = "round trip";
  const auto j = config_to_json(c);
  const auto back = config_from_json(j);
  CHECK(config_to_json(back) == j);
  CHECK(back.methods.size() == 3);
  CHECK(back.outliers->strategy == OutlierStrategy::ring);

  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"methods", "nope"}}), ParseError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{
                      {"methods", nlohmann::json::array({{{"init", "magic"}}})}}),
                  ContractViolation);

  LettersScenario let;
  let.path = "/tmp/letters.data";
  let.classes = {'X', 'M', 'A'};
  let.outlier_class = 'R';
  let.outlier_count = 20;
  c.scenario = let;
  const auto jl = config_to_json(c);
  CHECK(config_to_json(config_from_json(jl)) == jl);
}

TEST_CASE("report JSON carries published deltas") {
  auto c = small_config();
  c.reps = 2;
  const auto r = run_cell(c);
  const auto ref = ReferenceTables::load_default();
  const auto j = report_json(r, {&ref, "nu", "k=2 nu=1.5"});
  CHECK(j["schema"] == "robust_cluster.report/1");
  CHECK(j["methods"][0]["published"]["mean"] == 0.128);
  CHECK(j["methods"].size() == 3);
}

TEST_CASE("table grids line up with the reference tables") {
  const auto ref = ReferenceTables::load_default();
  TableOptions opt;
  opt.reps = 2;
  for (TableId id : {TableId::nu, TableId::sigma, TableId::dim}) {
    const auto grid = table_grid(id, opt);
    CHECK(grid.size() == 6);
    for (const auto& [key, cfg] : grid) {
      CHECK(cfg.methods.size() == 4);
      for (const auto& m : cfg.methods) CHECK(ref.contains(to_string(id), key, m.label()));
      CHECK(cfg.iod_overrides->m1 == 20);
      CHECK(std::get<MixtureScenario>(cfg.scenario).delta_sep == 25.0);
      CHECK(std::get<MixtureScenario>(cfg.scenario).per_cluster == 200);
    }
  }
  opt.letters_path = "/tmp/letters.data";
  const auto letters = table_grid(TableId::letters, opt);
  CHECK(letters.size() == 4);
  for (const auto& [key, cfg] : letters) {
    CHECK(cfg.methods.size() == 5);
    for (const auto& m : cfg.methods) {
      CHECK(ref.contains("letters", key, m.label()));
      if (m.cluster == ClusterMethod::cod) CHECK(m.delta == 0.48);
    }
  }
  CHECK_THROWS_AS(parse_table_id("bogus"), ContractViolation);
  opt.scale = 0.5;
  CHECK(std::get<MixtureScenario>(table_grid(TableId::nu, opt)[0].second.scenario).per_cluster ==
        100);
}

TEST_CASE("pathology suite with zero reps is empty") {
  PathologyConfig cfg;
  cfg.reps = 0;
  const auto r = pathology_suite(cfg);
  CHECK(r.three.lloyd.empty());
  CHECK(r.heavy.cod.empty());
  CHECK(r.three.lloyd_emptied_reps == 0);
}

TEST_CASE("resolve_threads") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
