// Acceptance suite: every check prints one [PASS]/[FAIL] line; the binary
// exits nonzero when anything fails. Always compiled with assertions active.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "app/artifacts.hpp"
#include "app/commands.hpp"
#include "app/csv.hpp"
#include "oracles.hpp"
#include "seqmine/learner_cluster.hpp"
#include "seqmine/rng.hpp"
#include "seqmine/segmentation.hpp"
#include "seqmine/seq_cluster.hpp"
#include "seqmine/stats.hpp"
#include "seqmine/synth.hpp"

using namespace seqmine;
namespace fs = std::filesystem;

namespace {

#include "tail_reference.inc"

int g_failures = 0;

struct Criterion {
  std::string name;
  std::vector<std::string> problems;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  explicit Criterion(std::string n) : name(std::move(n)) {}

  void expect(bool ok, const std::string& what) {
    if (!ok) problems.push_back(what);
  }

  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }

  void finish(double budget_seconds = 0.0) {
    const double elapsed = seconds();
    if (budget_seconds > 0.0 && elapsed > budget_seconds)
      problems.push_back("runtime " + std::to_string(elapsed) + "s exceeds budget " +
                         std::to_string(budget_seconds) + "s");
    if (problems.empty()) {
      std::printf("[PASS] %s (%.2fs)\n", name.c_str(), elapsed);
    } else {
      ++g_failures;
      std::printf("[FAIL] %s (%.2fs)\n", name.c_str(), elapsed);
      for (const auto& p : problems) std::printf("       - %s\n", p.c_str());
    }
  }
};

std::vector<std::string> all_cps_strings(std::size_t max_len) {
  std::vector<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& s : frontier)
      for (char c : {'c', 'p', 's'}) next.push_back(s + c);
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

std::string random_cps(Rng& rng, std::size_t max_len) {
  const std::size_t len = rng.uniform_index(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back("cps"[rng.uniform_index(3)]);
  return s;
}

// ---------------------------------------------------------------------------

void criterion_1_levenshtein() {
  Criterion c("1 levenshtein equals brute-force edit search; metric axioms hold");

  const auto strings = all_cps_strings(4);  // 121 strings
  std::vector<std::vector<std::size_t>> dist(strings.size(),
                                             std::vector<std::size_t>(strings.size(), 0));
  bool brute_ok = true, symmetry_ok = true, identity_ok = true;
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = 0; j < strings.size(); ++j) {
      dist[i][j] = levenshtein(strings[i], strings[j]);
      if (j <= i && dist[i][j] != oracle::levenshtein_brute(strings[i], strings[j]))
        brute_ok = false;
    }
  }
  for (std::size_t i = 0; i < strings.size(); ++i) {
    for (std::size_t j = 0; j < strings.size(); ++j) {
      if (dist[i][j] != dist[j][i]) symmetry_ok = false;
      if ((dist[i][j] == 0) != (strings[i] == strings[j])) identity_ok = false;
    }
  }
  c.expect(brute_ok, "exhaustive length<=4 brute-force agreement");
  c.expect(symmetry_ok, "symmetry on exhaustive pairs");
  c.expect(identity_ok, "identity of indiscernibles on exhaustive pairs");

  bool triangle_ok = true;
  for (std::size_t i = 0; i < strings.size() && triangle_ok; ++i)
    for (std::size_t j = 0; j < strings.size() && triangle_ok; ++j)
      for (std::size_t k = 0; k < strings.size(); ++k)
        if (dist[i][j] > dist[i][k] + dist[k][j]) {
          triangle_ok = false;
          break;
        }
  c.expect(triangle_ok, "triangle inequality on exhaustive triples");

  Rng rng(10101);
  bool random_ok = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::string a = random_cps(rng, 7);
    const std::string b = random_cps(rng, 7);
    const std::size_t fast = levenshtein(a, b);
    if (fast != oracle::levenshtein_brute(a, b)) random_ok = false;
    if (fast != levenshtein(b, a)) random_ok = false;
  }
  c.expect(random_ok, "1000 random pairs length<=7 agreement");
  c.finish(10.0);
}

void criterion_2_agglomerative() {
  Criterion c("2 agglomerative clustering equals the naive re-scan oracle");

  Rng rng(20202);
  bool all_ok = true;
  std::string first_diff;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(49);  // 2..50
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        m.set(i, j, static_cast<double>(1 + rng.uniform_index(40)));  // ties guaranteed

    for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      const Dendrogram fast = agglomerate(m, linkage);
      const Dendrogram slow = oracle::agglomerate_rescan(m, linkage);
      for (std::size_t t = 0; t < fast.merges.size(); ++t) {
        const bool same = fast.merges[t].left == slow.merges[t].left &&
                          fast.merges[t].right == slow.merges[t].right &&
                          fast.merges[t].size == slow.merges[t].size &&
                          std::fabs(fast.merges[t].height - slow.merges[t].height) < 1e-12;
        if (!same && all_ok) {
          all_ok = false;
          first_diff = "trial " + std::to_string(trial) + " linkage " +
                       std::string(to_string(linkage)) + " merge " + std::to_string(t);
        }
      }
    }
  }
  c.expect(all_ok, "merge-for-merge identity (first difference: " + first_diff + ")");
  c.finish(30.0);
}

void criterion_3_pca() {
  Criterion c("3 pca eigenpairs: residuals, orthonormality, explained ratios");

  Rng rng(30303);
  double worst_residual = 0.0, worst_ortho = 0.0, worst_ratio = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 6 + rng.uniform_index(195);  // 6..200
    Matrix raw(n, 5);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        raw.at(i, j) = rng.normal(double(j), 0.5 + double(j));
    const Standardized scaled = standardize(raw);
    const PcaModel model = pca(scaled, 5);
    const Matrix cov = covariance_matrix(scaled.data);

    for (std::size_t comp = 0; comp < 5; ++comp) {
      for (std::size_t row = 0; row < 5; ++row) {
        double cav = 0.0;
        for (std::size_t j = 0; j < 5; ++j) cav += cov.at(row, j) * model.components.at(comp, j);
        worst_residual = std::max(
            worst_residual,
            std::fabs(cav - model.eigenvalues[comp] * model.components.at(comp, row)));
      }
      for (std::size_t other = 0; other < 5; ++other) {
        double dot = 0.0;
        for (std::size_t j = 0; j < 5; ++j)
          dot += model.components.at(comp, j) * model.components.at(other, j);
        worst_ortho = std::max(worst_ortho, std::fabs(dot - (comp == other ? 1.0 : 0.0)));
      }
    }
    double total = 0.0;
    for (double r : model.explained_ratios) total += r;
    worst_ratio = std::max(worst_ratio, std::fabs(total - 1.0));
  }
  c.expect(worst_residual < 1e-9,
           "eigen residual max " + std::to_string(worst_residual) + " < 1e-9");
  c.expect(worst_ortho < 1e-9, "orthonormality max " + std::to_string(worst_ortho) + " < 1e-9");
  c.expect(worst_ratio < 1e-9, "ratio sum error max " + std::to_string(worst_ratio) + " < 1e-9");

  Matrix cov(2, 2);
  cov.at(0, 0) = 2.0;
  cov.at(0, 1) = 1.0;
  cov.at(1, 0) = 1.0;
  cov.at(1, 1) = 2.0;
  const EigenDecomposition eig = jacobi_eigen_symmetric(cov);
  const double total = eig.values[0] + eig.values[1];
  c.expect(std::fabs(eig.values[0] / total - 0.75) < 1e-12 &&
               std::fabs(eig.values[1] / total - 0.25) < 1e-12,
           "[[2,1],[1,2]] explained ratios 0.75/0.25 to 1e-12");
  c.finish();
}

void criterion_4_kmeans() {
  Criterion c("4 k-means: monotone SSE, closed forms, exhaustive optimality");

  Rng rng(40404);
  bool monotone_ok = true;
  for (int run = 0; run < 100; ++run) {
    const std::size_t n = 10 + rng.uniform_index(120);
    const std::size_t k = 1 + rng.uniform_index(std::min<std::size_t>(8, n));
    Matrix points(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      points.at(i, 0) = rng.normal(0, 5);
      points.at(i, 1) = rng.normal(0, 5);
    }
    const KMeansResult result = kmeans_pp(points, k, 555 + run, 3);
    for (std::size_t t = 1; t < result.sse_history.size(); ++t)
      if (result.sse_history[t] > result.sse_history[t - 1] + 1e-10) monotone_ok = false;
  }
  c.expect(monotone_ok, "SSE nonincreasing across Lloyd iterations in 100 seeded runs");

  {
    Matrix points(9, 2);
    for (std::size_t i = 0; i < 9; ++i) {
      points.at(i, 0) = double(i);
      points.at(i, 1) = double(i % 3);
    }
    const KMeansResult one = kmeans_pp(points, 1, 7);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      mx += points.at(i, 0);
      my += points.at(i, 1);
    }
    mx /= 9.0;
    my /= 9.0;
    double expected = 0.0;
    for (std::size_t i = 0; i < 9; ++i)
      expected += (points.at(i, 0) - mx) * (points.at(i, 0) - mx) +
                  (points.at(i, 1) - my) * (points.at(i, 1) - my);
    c.expect(std::fabs(one.centroids.at(0, 0) - mx) < 1e-12 &&
                 std::fabs(one.centroids.at(0, 1) - my) < 1e-12 &&
                 std::fabs(one.sse - expected) < 1e-9,
             "k = 1 closed form (mean centroid, total variance SSE)");

    const KMeansResult full = kmeans_pp(points, 9, 7);
    c.expect(full.sse == 0.0, "k = n gives SSE exactly 0");
  }

  bool optimal_ok = true;
  for (int inst = 0; inst < 50; ++inst) {
    const std::size_t n = 6 + rng.uniform_index(7);  // 6..12
    Matrix points(n, 2);
    std::vector<std::vector<double>> raw;
    for (std::size_t i = 0; i < n; ++i) {
      const double cx = (i % 2 == 0) ? 0.0 : 5.0;
      points.at(i, 0) = cx + rng.normal(0, 1.2);
      points.at(i, 1) = rng.normal(0, 1.2);
      raw.push_back({points.at(i, 0), points.at(i, 1)});
    }
    const KMeansResult result = kmeans_pp(points, 2, 900 + inst, 10);
    const double best = oracle::exhaustive_best_sse(raw, 2);
    if (result.sse > best + 1e-9 * std::max(1.0, best)) optimal_ok = false;
  }
  c.expect(optimal_ok, "global optimum matched on 50 exhaustive instances (n <= 12, k = 2)");
  c.finish();
}

void criterion_5_tails() {
  Criterion c("5 distribution tails: closed forms and 90 high-precision references");

  double worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double x = 0.18 * i;
    worst = std::max(worst, std::fabs(chi2_sf(x, 2) - std::exp(-x / 2.0)));
  }
  c.expect(worst < 1e-12, "chi2_sf(x,2) vs exp(-x/2), max err " + std::to_string(worst));

  worst = 0.0;
  for (int i = 1; i <= 100; ++i) {
    const double t = 0.08 * i;
    const double expected = 1.0 - (2.0 / 3.14159265358979323846) * std::atan(t);
    worst = std::max(worst, std::fabs(t_sf_two_tailed(t, 1) - expected));
  }
  c.expect(worst < 1e-12, "t df=1 vs Cauchy closed form, max err " + std::to_string(worst));

  double worst_chi = 0.0, worst_f = 0.0, worst_t = 0.0;
  for (const TailCase& t : kChi2Reference)
    worst_chi = std::max(worst_chi, std::fabs(chi2_sf(t.a, t.b) - t.expected));
  for (const TailCase& t : kFReference)
    worst_f = std::max(worst_f, std::fabs(f_sf(t.a, t.b, t.c) - t.expected));
  for (const TailCase& t : kTReference)
    worst_t = std::max(worst_t, std::fabs(t_sf_two_tailed(t.a, t.b) - t.expected));
  c.expect(worst_chi < 1e-10, "30 chi2 references, max err " + std::to_string(worst_chi));
  c.expect(worst_f < 1e-10, "30 F references, max err " + std::to_string(worst_f));
  c.expect(worst_t < 1e-10, "30 t references, max err " + std::to_string(worst_t));
  c.finish();
}

void criterion_6_stat_crosschecks() {
  Criterion c("6 statistics cross-checks: F = t^2, exact chi-square values");

  Rng rng(60606);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a, b;
    const std::size_t na = 2 + rng.uniform_index(12);
    const std::size_t nb = 2 + rng.uniform_index(12);
    for (std::size_t i = 0; i < na; ++i) a.push_back(rng.normal(0, 1));
    for (std::size_t i = 0; i < nb; ++i) b.push_back(rng.normal(1, 2));
    const TestResult f = one_way_anova({a, b});
    const TestResult t = t_test(a, b, TTestMode::Pooled);
    worst = std::max(worst, std::fabs(f.statistic - t.statistic * t.statistic));
  }
  c.expect(worst < 1e-9, "F = t^2 on 100 random 2-group instances, max err " +
                             std::to_string(worst));

  const TestResult chi = chi_square_independence({{10, 20}, {20, 10}});
  c.expect(std::fabs(chi.statistic - 20.0 / 3.0) < 1e-12, "chi-square 20/3 on [[10,20],[20,10]]");

  const TestResult prop = chi_square_independence({{4, 8, 12}, {1, 2, 3}, {10, 20, 30}});
  c.expect(prop.statistic < 1e-12, "proportional table statistic < 1e-12");
  c.finish();
}

void criterion_7_segmentation() {
  Criterion c("7 segmentation recovers three planted length modes");

  Rng rng(70707);
  std::vector<std::size_t> lengths;
  std::vector<int> mode_of;
  struct Mode {
    double mean, sd, lo, hi;
    int count;
  };
  const std::vector<Mode> modes{{12, 2.2, 3, 20, 500}, {36, 3.5, 25, 48, 280},
                                {120, 12, 85, 160, 220}};
  for (int m = 0; m < 3; ++m) {
    for (int i = 0; i < modes[m].count; ++i) {
      const double v = std::clamp(rng.normal(modes[m].mean, modes[m].sd), modes[m].lo,
                                  modes[m].hi);
      lengths.push_back(static_cast<std::size_t>(std::llround(v)));
      mode_of.push_back(m);
    }
  }

  const DensityEstimate density = kde(lengths);
  const CutPoints cuts = find_cutpoints(density, 2);
  c.expect(!cuts.fallback, "density has two genuine interior minima");
  c.expect(cuts.cuts.size() == 2, "two cut points returned");

  // True inter-mode gaps from the planted sample itself.
  std::array<std::size_t, 3> mode_max{0, 0, 0};
  std::array<std::size_t, 3> mode_min{SIZE_MAX, SIZE_MAX, SIZE_MAX};
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    mode_max[mode_of[i]] = std::max(mode_max[mode_of[i]], lengths[i]);
    mode_min[mode_of[i]] = std::min(mode_min[mode_of[i]], lengths[i]);
  }
  if (cuts.cuts.size() == 2) {
    c.expect(cuts.cuts[0] > double(mode_max[0]) && cuts.cuts[0] < double(mode_min[1]),
             "first cut inside the mode-1/mode-2 gap");
    c.expect(cuts.cuts[1] > double(mode_max[1]) && cuts.cuts[1] < double(mode_min[2]),
             "second cut inside the mode-2/mode-3 gap");

    const LengthSegments seg = segment(lengths, cuts.cuts[0], cuts.cuts[1]);
    std::array<std::array<std::size_t, 3>, 3> captured{};  // mode x group
    for (std::size_t i = 0; i < lengths.size(); ++i)
      ++captured[mode_of[i]][static_cast<std::size_t>(seg.assignment[i])];
    for (int m = 0; m < 3; ++m) {
      const double frac = double(captured[m][m]) / double(modes[m].count);
      c.expect(frac >= 0.95, "mode " + std::to_string(m + 1) + " capture " +
                                 std::to_string(frac) + " >= 0.95");
    }
  }
  c.finish(5.0);
}

struct PipelineRun {
  fs::path dir;
  double ari = 0.0;
};

PipelineRun run_end_to_end(const fs::path& dir, std::uint64_t seed) {
  fs::remove_all(dir);
  fs::create_directories(dir);

  app::CommonOptions common;
  common.out_dir = dir;
  common.threads = 2;

  app::run_synth(common, {seed, std::nullopt});

  app::PipelineOptions opts;
  opts.log_path = dir / app::files::kLog;
  opts.models_path = dir / app::files::kModels;
  opts.truth_path = dir / app::files::kTruth;
  opts.seed = seed;
  opts.segment.outlier_k = 4.0;       // keep the far length mode in play
  opts.behaviors.group_k = {8, 8, 5};  // spare clusters absorb stragglers before merging
  app::run_pipeline(common, opts);

  PipelineRun result;
  result.dir = dir;
  const app::CsvTable eval = app::read_csv(dir / app::files::kEval);
  for (const auto& row : eval.rows)
    if (row[0] == "ari_behavior") result.ari = std::stod(row[1]);
  return result;
}

void criteria_8_9_10_end_to_end() {
  const fs::path base = fs::temp_directory_path() / "seqmine_acceptance";
  const std::uint64_t seed = 20240715;

  PipelineRun run_a;
  {
    Criterion c("8 planted-truth recovery: ARI >= 0.8 and quality ordering");
    run_a = run_end_to_end(base / "run_a", seed);

    const GroundTruth truth = app::read_truth_csv(run_a.dir / app::files::kTruth);
    c.expect(truth.learners.size() == 300,
             "cohort has 300 learners (got " + std::to_string(truth.learners.size()) + ")");
    c.expect(truth.models.size() >= 700 && truth.models.size() <= 900,
             "cohort has ~800 models (got " + std::to_string(truth.models.size()) + ")");

    c.expect(run_a.ari >= 0.8, "behavior ARI " + std::to_string(run_a.ari) + " >= 0.8");

    const auto quality = app::read_quality_csv(run_a.dir / app::files::kQuality);
    std::map<std::string, std::pair<double, double>> sums;  // behavior -> (cx, var)
    std::map<std::string, std::size_t> counts;
    for (const auto& q : quality) {
      if (q.behavior.empty()) continue;
      sums[q.behavior].first += double(q.complexity);
      sums[q.behavior].second += double(q.variety);
      ++counts[q.behavior];
    }
    const bool have_all = counts.count("full_cycle") && counts.count("observation") &&
                          counts.count("construction");
    c.expect(have_all, "all three behavior types predicted");
    if (have_all) {
      auto mean = [&](const char* b, bool variety) {
        return (variety ? sums[b].second : sums[b].first) / double(counts[b]);
      };
      c.expect(mean("full_cycle", false) > mean("observation", false) &&
                   mean("observation", false) > mean("construction", false),
               "complexity ordering full_cycle > observation > construction");
      c.expect(mean("full_cycle", true) > mean("observation", true) &&
                   mean("observation", true) > mean("construction", true),
               "variety ordering full_cycle > observation > construction");
    }
    c.finish(60.0);
  }

  {
    Criterion c("9 chi-square rejects behavior/engagement independence at p < 0.001");
    const auto report = app::read_json(run_a.dir / app::files::kStatsReport);
    const auto& chi = report.at("behavior_by_group").at("chi_square");
    c.expect(!chi.is_null(), "chi-square test was runnable");
    if (!chi.is_null()) {
      const double p = chi.at("p_value").get<double>();
      c.expect(p < 0.001, "p = " + std::to_string(p) + " < 0.001");
    }
    c.finish();
  }

  {
    Criterion c("10 determinism: same seed yields byte-identical output directories");
    // Re-run the identical invocation: snapshot the first directory, wipe it,
    // run again at the same path, and compare byte for byte.
    const fs::path snapshot = base / "snapshot";
    fs::remove_all(snapshot);
    fs::copy(run_a.dir, snapshot, fs::copy_options::recursive);
    const PipelineRun run_b = run_end_to_end(run_a.dir, seed);
    run_a.dir = snapshot;

    auto listing = [](const fs::path& dir) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), dir));
      std::sort(files.begin(), files.end());
      return files;
    };
    const auto files_a = listing(run_a.dir);
    const auto files_b = listing(run_b.dir);
    c.expect(files_a == files_b, "identical file listings");
    if (files_a == files_b) {
      std::size_t mismatches = 0;
      std::string first;
      for (const auto& rel : files_a) {
        std::ifstream fa(run_a.dir / rel, std::ios::binary);
        std::ifstream fb(run_b.dir / rel, std::ios::binary);
        const std::string ca((std::istreambuf_iterator<char>(fa)),
                             std::istreambuf_iterator<char>());
        const std::string cb((std::istreambuf_iterator<char>(fb)),
                             std::istreambuf_iterator<char>());
        if (ca != cb) {
          ++mismatches;
          if (first.empty()) first = rel.string();
        }
      }
      c.expect(mismatches == 0,
               "all files byte-identical (first mismatch: " + first + ")");
    }
    c.finish();
  }
}

}  // namespace

int main() {
  criterion_1_levenshtein();
  criterion_2_agglomerative();
  criterion_3_pca();
  criterion_4_kmeans();
  criterion_5_tails();
  criterion_6_stat_crosschecks();
  criterion_7_segmentation();
  criteria_8_9_10_end_to_end();

  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", g_failures);
  return 1;
}
