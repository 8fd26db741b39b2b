// Acceptance run: one PASS / FAIL / SKIP line per criterion.
// Exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "robust_cluster/baselines.hpp"
#include "robust_cluster/bench.hpp"
#include "robust_cluster/cod.hpp"
#include "robust_cluster/estimators.hpp"
#include "robust_cluster/iod.hpp"
#include "robust_cluster/metrics.hpp"
#include "robust_cluster/reference.hpp"
#include "robust_cluster/synth.hpp"

using namespace robust_cluster;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict = Verdict::fail;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {Verdict::fail, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.verdict == Verdict::pass && secs > limit_seconds) {
    out.verdict = Verdict::fail;
    out.detail += " | over the time limit";
  }
  const char* tag = out.verdict == Verdict::pass ? "PASS" : out.verdict == Verdict::fail ? "FAIL" : "SKIP";
  if (out.verdict == Verdict::fail) ++failures;
  std::printf("%s  %2d %-34s %s  [%.2f s, limit %.0f s]\n", tag, id, name.c_str(),
              out.detail.c_str(), secs, limit_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within_by_permutation(const CentroidSet& est, const CentroidSet& truth, double tol) {
  std::vector<std::size_t> perm(truth.k());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    bool ok = true;
    for (std::size_t h = 0; h < truth.k() && ok; ++h)
      ok = distance(est.center(perm[h]), truth.center(h)) <= tol;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

const MethodReport& method(const ExperimentReport& r, const std::string& label) {
  for (const auto& m : r.methods)
    if (m.label == label) return m;
  throw std::runtime_error("no method " + label);
}

ExperimentConfig grid_cell(TableId id, const std::string& key, std::size_t reps) {
  TableOptions opt;
  opt.reps = reps;
  for (auto& [k, cfg] : table_grid(id, opt))
    if (k == key) return cfg;
  throw std::runtime_error("no grid cell " + key);
}

// 1: trimmed mean and hdp against the brute-force reference
Outcome oracle_equivalence() {
  std::mt19937_64 rng(20240611);
  const double deltas[] = {0.0, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45};
  int bad = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 1 + t % 8;
    const auto rows = oracle::random_rows(rng, m, 1 + t % 3, t % 2 == 0);
    const PointSet p = PointSet::from_rows(rows);
    const double delta = deltas[t % 7];
    const auto got = trimmed_mean(p, delta);
    const auto want = oracle::trimmed_mean(rows, delta);
    const double q = 0.1 * (1 + t % 10);
    const auto hg = hdp(p, q);
    const auto hw = oracle::hdp(rows, q);
    const bool same = got.medoid_index == want.medoid && got.radius == want.radius &&
                      got.kept_indices == want.kept && got.center == want.center &&
                      hg.index == hw.index && hg.radius == hw.radius;
    bad += same ? 0 : 1;
  }
  return {bad == 0 ? Verdict::pass : Verdict::fail,
          std::to_string(500 - bad) + "/500 instances bit-identical"};
}

// 2: COD with delta 0 against Lloyd that keeps empty centroids
Outcome delta_zero_reduction() {
  std::mt19937_64 rng(31337);
  std::normal_distribution<double> z;
  double worst = 0.0;
  int mismatched_lengths = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t k = 2 + t % 3, d = 1 + t % 4, per = 5 + t % 20;
    oracle::Rows rows;
    for (std::size_t h = 0; h < k; ++h)
      for (std::size_t i = 0; i < per; ++i) {
        std::vector<double> r(d);
        for (std::size_t j = 0; j < d; ++j) r[j] = 4.0 * h + z(rng) * (1 + t % 3);
        rows.push_back(r);
      }
    const PointSet p = PointSet::from_rows(rows);
    Rng pick(t);
    const auto init = kmeanspp_init(p, k, pick);
    const auto c = cod_cluster(p, init, {0.0, 0.0, 5});
    Rng unused(0);
    const auto l = lloyd(p, init, {0.0, 5, EmptyClusterRule::keep_previous}, unused);
    if (c.history.size() != l.history.size()) {
      ++mismatched_lengths;
      continue;
    }
    for (std::size_t s = 0; s < c.history.size(); ++s) {
      const auto& a = c.history[s].centroids.data();
      const auto& b = l.history[s].centroids.data();
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
  }
  const bool ok = mismatched_lengths == 0 && worst <= 1e-12;
  return {ok ? Verdict::pass : Verdict::fail,
          "max deviation " + fmt("%.3g", worst) + " over 100 instances, " +
              std::to_string(mismatched_lengths) + " history length mismatches"};
}

// 3: 10 of 40 points moved to distance 1000
Outcome breakdown() {
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    oracle::Rows rows(40);
    for (auto& r : rows) {
      const double a = z(rng), b = z(rng), len = std::hypot(a, b);
      const double rad = std::sqrt(u(rng));
      r = {a / len * rad, b / len * rad};
    }
    double mx = 0, my = 0;
    for (const auto& r : rows) {
      mx += r[0] / 40;
      my += r[1] / 40;
    }
    for (int i = 0; i < 10; ++i) {
      const double ang = 2 * M_PI * u(rng);
      rows[i] = {1000 * std::cos(ang), 1000 * std::sin(ang)};
    }
    const auto tm = trimmed_mean(PointSet::from_rows(rows), 0.3);
    worst = std::max(worst, std::hypot(tm.center[0] - mx, tm.center[1] - my));
  }
  return {worst <= 4.0 ? Verdict::pass : Verdict::fail,
          "worst ||center - clean mean|| = " + fmt("%.3f", worst) + " over 50 seeds"};
}

// 4 and 5: IOD recovery with and without the outlier budget
Outcome iod_recovery(bool with_outliers) {
  const double Delta = 50.0;
  int success = 0;
  std::size_t outlier_count = 0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(777, seed));
    const auto truth = gen_centroids(2, 2, Delta, rng);
    const auto s = sample_mixture({truth, {200, 200}, GaussianLaw{1.0}}, rng);
    PointSet points = s.points;
    if (with_outliers) {
      OutlierSpec spec;
      spec.count = static_cast<std::size_t>(std::floor(400 * 0.5 * 0.5 / 32));
      spec.multiple = 50.0;
      outlier_count = spec.count;
      points = inject_outliers(s.points, s.labels, truth, spec, rng).points;
    }
    const auto r = iodk(points, default_params(points.size(), 2, 0.5));
    success += within_by_permutation(r.centroids, truth, Delta / 3) ? 1 : 0;
  }
  const int need = with_outliers ? 90 : 95;
  std::string detail = std::to_string(success) + "/100 within Delta/3 (need " +
                       std::to_string(need) + ")";
  if (with_outliers) detail += ", " + std::to_string(outlier_count) + " far_clump outliers";
  return {success >= need ? Verdict::pass : Verdict::fail, detail};
}

// 6 and 7: nu table cells at desk scale
Outcome table1_light(const ReferenceTables& ref) {
  const auto r = run_cell(grid_cell(TableId::nu, "k=2 nu=10", 30));
  const auto& cod = method(r, "COD+IOD");
  const double published = ref.lookup("nu", "k=2 nu=10", "COD+IOD").mean;
  const bool ok = cod.valid && std::abs(cod.stats.mean - published) <= 0.02;
  return {ok ? Verdict::pass : Verdict::fail,
          "COD+IOD " + fmt("%.3f", cod.stats.mean) + " (" + fmt("%.3f", cod.stats.stderr_) +
              ") vs published " + fmt("%.3f", published) + " +- 0.02"};
}

Outcome table1_heavy() {
  const auto r = run_cell(grid_cell(TableId::nu, "k=2 nu=1", 30));
  const double cod = method(r, "COD+IOD").stats.mean;
  std::ostringstream s;
  s << "COD+IOD " << fmt("%.3f", cod);
  double gap = 1e9;
  for (const auto& m : r.methods) {
    if (m.label.rfind("Lloyd", 0) != 0) continue;
    s << ", " << m.label << " " << fmt("%.3f", m.stats.mean);
    gap = std::min(gap, m.stats.mean - cod);
  }
  s << "; smallest gap " << fmt("%.3f", gap) << " (need >= 0.10)";
  return {gap >= 0.10 && method(r, "COD+IOD").valid ? Verdict::pass : Verdict::fail, s.str()};
}

// 8: sigma table monotonicity, plus which scale convention fits better
Outcome table2_monotone(const ReferenceTables& ref) {
  std::vector<double> means;
  std::ostringstream s;
  bool valid = true;
  for (const char* key : {"k=2 sigma=1", "k=2 sigma=5", "k=2 sigma=10"}) {
    const auto r = run_cell(grid_cell(TableId::sigma, key, 30));
    const auto& m = method(r, "COD+IOD");
    valid = valid && m.valid;
    means.push_back(m.stats.mean);
    s << key << ": " << fmt("%.3f", m.stats.mean) << " (published "
      << fmt("%.3f", ref.lookup("sigma", key, "COD+IOD").mean) << ")  ";
  }
  const bool ok = valid && means[0] <= means[1] && means[1] <= means[2] && means[0] <= 0.05;
  return {ok ? Verdict::pass : Verdict::fail, s.str()};
}

void report_convention(const ReferenceTables& ref) {
  const double published = ref.lookup("sigma", "k=2 sigma=5", "COD+IOD").mean;
  std::printf("INFO     scale convention, k=2 sigma=5 COD+IOD (published %.3f):", published);
  double best_gap = 1e9;
  std::string best;
  for (auto conv : {ScaleConvention::per_coordinate, ScaleConvention::matrix_scalar}) {
    auto cfg = grid_cell(TableId::sigma, "k=2 sigma=5", 30);
    auto& mix = std::get<MixtureScenario>(cfg.scenario);
    auto law = std::get<MvtLaw>(mix.law);
    law.convention = conv;
    mix.law = law;
    cfg.methods = {MethodSpec{InitMethod::iod, ClusterMethod::cod, 0.3}};
    const double mean = run_cell(cfg).methods[0].stats.mean;
    const char* name = conv == ScaleConvention::per_coordinate ? "per_coordinate" : "matrix_scalar";
    std::printf(" %s %.3f", name, mean);
    if (std::abs(mean - published) < best_gap) {
      best_gap = std::abs(mean - published);
      best = name;
    }
  }
  std::printf("; closer: %s\n", best.c_str());
  std::fflush(stdout);
}

// 9 and 10: the Lloyd constructions
Outcome pathology_three(const PathologyReport& r) {
  const auto& c = r.three;
  const bool ok = c.lloyd_fail_fraction >= 0.20 && c.cod_stats.mean <= 0.05;
  return {ok ? Verdict::pass : Verdict::fail,
          "Lloyd >= 0.25 in " + fmt("%.0f%%", 100 * c.lloyd_fail_fraction) +
              " of 100 seeds (need >= 20%), COD mean " + fmt("%.3f", c.cod_stats.mean) +
              " (need <= 0.05)"};
}

Outcome pathology_heavy(const PathologyReport& r) {
  const auto& c = r.heavy;
  std::size_t lloyd_bad = 0;
  for (double v : c.lloyd) lloyd_bad += v >= 0.3 ? 1 : 0;
  const double frac = c.lloyd.empty() ? 0.0 : double(lloyd_bad) / double(c.lloyd.size());
  std::size_t cod_bad = 0;
  for (double v : c.cod) cod_bad += (std::isnan(v) || v > 0.15) ? 1 : 0;
  const bool ok = frac >= 0.30 && c.cod_stats.mean <= 0.15 && c.cod_stats.count == c.cod.size();
  return {ok ? Verdict::pass : Verdict::fail,
          "Lloyd >= 0.3 in " + fmt("%.0f%%", 100 * frac) + " of " + std::to_string(c.lloyd.size()) +
              " seeds (need >= 30%), COD+IOD mean " + fmt("%.3f", c.cod_stats.mean) +
              " (need <= 0.15; " + std::to_string(cod_bad) + " seeds above 0.15)"};
}

// 11: metric properties
Outcome metric_properties() {
  std::mt19937_64 rng(1111);
  int bad = 0, checks = 0;
  for (int t = 0; t < 2000; ++t) {
    const int k = 2 + t % 5;
    const std::size_t n = 5 + t % 60;
    std::uniform_int_distribution<int> lab(1, k);
    std::vector<int> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = lab(rng);
      b[i] = t % 4 == 0 ? a[i] : lab(rng);
    }
    const double perm = mislabeling(LabelVector(a, k), LabelVector(b, k));
    const double maps = mislabeling(LabelVector(a, k), LabelVector(b, k), MislabelingMode::mappings);
    std::vector<int> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 1);
    std::shuffle(sigma.begin(), sigma.end(), rng);
    std::vector<int> a2(n), b2(n);
    for (std::size_t i = 0; i < n; ++i) {
      a2[i] = sigma[a[i] - 1];
      b2[i] = sigma[b[i] - 1];
    }
    const double both = mislabeling(LabelVector(a2, k), LabelVector(b2, k));
    const double est_only = mislabeling(LabelVector(a2, k), LabelVector(b, k));
    checks += 4;
    bad += perm >= maps ? 0 : 1;
    bad += both == perm ? 0 : 1;
    bad += est_only == perm ? 0 : 1;
    bad += std::abs(perm - oracle::mislabeling_bijections(a, b, k)) < 1e-12 ? 0 : 1;
  }
  const std::vector<std::vector<double>> fixed{
      {0.1, 0.2, 0.3, 0.4}, {0.5}, {0.0, 0.0, 0.0}, {0.014, 0.016, 0.011, 0.02, 0.013, 0.015}};
  for (const auto& v : fixed) {
    const auto got = mean_and_stderr(v);
    const auto [mean, se] = oracle::mean_stderr(v);
    checks += 2;
    bad += std::abs(got.mean - mean) <= 1e-14 ? 0 : 1;
    bad += std::abs(got.stderr_ - se) <= 1e-14 ? 0 : 1;
  }
  return {bad == 0 ? Verdict::pass : Verdict::fail,
          std::to_string(checks - bad) + "/" + std::to_string(checks) + " property checks hold"};
}

// 12: serial against 8 workers, and every rep replayed from its seed
Outcome determinism() {
  auto cfg = grid_cell(TableId::nu, "k=2 nu=1.5", 12);
  cfg.threads = 1;
  const auto serial = run_cell(cfg);
  cfg.threads = 8;
  const auto parallel = run_cell(cfg);
  const bool same_csv = report_csv(serial) == report_csv(parallel);
  std::size_t replay_bad = 0;
  for (std::size_t j = 0; j < cfg.methods.size(); ++j)
    for (std::size_t rep = 0; rep < cfg.reps; ++rep) {
      const double a = replay(cfg, rep, j), b = serial.methods[j].raw[rep];
      const bool eq = (std::isnan(a) && std::isnan(b)) || a == b;
      replay_bad += eq ? 0 : 1;
    }
  return {same_csv && replay_bad == 0 ? Verdict::pass : Verdict::fail,
          std::string("csv bytes ") + (same_csv ? "identical" : "differ") + ", " +
              std::to_string(replay_bad) + " replay mismatches over " +
              std::to_string(cfg.reps * cfg.methods.size()) + " cell-reps"};
}

fs::path letters_path() {
  if (const char* env = std::getenv("ROBUST_CLUSTER_LETTERS"); env && *env) return env;
  return data_dir() / "letter-recognition.data";
}

// 13: letters W/V without outliers
Outcome letters() {
  const auto path = letters_path();
  if (!fs::exists(path))
    return {Verdict::skip, "dataset not found at " + path.string() +
                               " (run docs/fetch_letters.sh or set ROBUST_CLUSTER_LETTERS)"};
  TableOptions opt;
  opt.reps = 30;
  opt.letters_path = path;
  for (auto& [key, cfg] : table_grid(TableId::letters, opt)) {
    if (key != "classes=WV outliers=without") continue;
    const auto r = run_cell(cfg);
    const double cod = method(r, "COD+IOD").stats.mean;
    const double pp = method(r, "Lloyd+kmeans++").stats.mean;
    return {cod < pp ? Verdict::pass : Verdict::fail,
            "COD+IOD " + fmt("%.3f", cod) + " vs Lloyd+kmeans++ " + fmt("%.3f", pp)};
  }
  return {Verdict::fail, "letters grid has no W/V cell"};
}

}  // namespace

int main() {
  const auto ref = ReferenceTables::load_default();
  std::printf("threads: %zu\n", resolve_threads(0));

  criterion(1, "trimmed mean / hdp oracle", 5, oracle_equivalence);
  criterion(2, "delta 0 reduces to Lloyd", 10, delta_zero_reduction);
  criterion(3, "trimmed mean breakdown", 2, breakdown);
  criterion(4, "IOD recovery", 120, [] { return iod_recovery(false); });
  criterion(5, "IOD outlier tolerance", 180, [] { return iod_recovery(true); });
  criterion(6, "nu table, light tail", 300, [&] { return table1_light(ref); });
  criterion(7, "nu table, heavy-tail ordering", 300, table1_heavy);
  criterion(8, "sigma table monotonicity", 480, [&] { return table2_monotone(ref); });
  report_convention(ref);

  PathologyConfig three;
  three.three_reps = 100;
  three.heavy_reps = 0;
  criterion(9, "Lloyd pathology, three centroids", 120,
            [&] { return pathology_three(pathology_suite(three)); });
  PathologyConfig heavy;
  heavy.three_reps = 0;
  heavy.heavy_reps = 50;
  criterion(10, "Lloyd pathology, heavy tail", 180,
            [&] { return pathology_heavy(pathology_suite(heavy)); });

  criterion(11, "metric properties", 30, metric_properties);
  criterion(12, "determinism and replay", 600, determinism);
  criterion(13, "letters W/V", 300, letters);

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
