#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "seqmine/rng.hpp"
#include "seqmine/seq_cluster.hpp"

using namespace seqmine;

namespace {

std::string random_cps(Rng& rng, std::size_t max_len) {
  const std::size_t len = rng.uniform_index(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back("cps"[rng.uniform_index(3)]);
  return s;
}

DistanceMatrix random_integer_matrix(Rng& rng, std::size_t n, int max_value) {
  DistanceMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.set(i, j, static_cast<double>(1 + rng.uniform_index(max_value)));
  return m;
}

void check_dendrograms_equal(const Dendrogram& a, const Dendrogram& b) {
  REQUIRE(a.merges.size() == b.merges.size());
  for (std::size_t t = 0; t < a.merges.size(); ++t) {
    CHECK(a.merges[t].left == b.merges[t].left);
    CHECK(a.merges[t].right == b.merges[t].right);
    CHECK(a.merges[t].size == b.merges[t].size);
    CHECK(a.merges[t].height == doctest::Approx(b.merges[t].height).epsilon(1e-12));
  }
}

}  // namespace

TEST_SUITE("seq_cluster") {

TEST_CASE("levenshtein basics") {
  CHECK(levenshtein("", "ccs") == 3);
  CHECK(levenshtein("ccs", "") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("ccs", "ccs") == 0);
  CHECK(levenshtein("ccs", "cps") == 1);
  CHECK(levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("levenshtein agrees with the brute-force edit search") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::string a = random_cps(rng, 7);
    const std::string b = random_cps(rng, 7);
    CHECK(levenshtein(a, b) == oracle::levenshtein_brute(a, b));
  }
}

TEST_CASE("levenshtein metric axioms on random pairs") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string a = random_cps(rng, 6);
    const std::string b = random_cps(rng, 6);
    const std::string c = random_cps(rng, 6);
    const auto dab = levenshtein(a, b);
    CHECK(dab == levenshtein(b, a));
    CHECK((dab == 0) == (a == b));
    CHECK(dab <= levenshtein(a, c) + levenshtein(c, b));
    CHECK(dab <= a.size() + b.size());
  }
}

TEST_CASE("distance_matrix basics") {
  const DistanceMatrix single = distance_matrix({"ccc"});
  CHECK(single.size() == 1);
  CHECK(single.at(0, 0) == 0.0);

  const DistanceMatrix unit = distance_matrix({"c", "p", "s"});
  CHECK(unit.at(0, 1) == 1.0);
  CHECK(unit.at(0, 2) == 1.0);
  CHECK(unit.at(1, 2) == 1.0);
}

TEST_CASE("distance_matrix is symmetric with zero diagonal and thread-invariant") {
  Rng rng(5);
  std::vector<std::string> seqs;
  for (int i = 0; i < 30; ++i) seqs.push_back(random_cps(rng, 12));
  const DistanceMatrix serial = distance_matrix(seqs, 1);
  const DistanceMatrix parallel = distance_matrix(seqs, 3);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    CHECK(serial.at(i, i) == 0.0);
    for (std::size_t j = 0; j < seqs.size(); ++j) {
      CHECK(serial.at(i, j) == serial.at(j, i));
      CHECK(serial.at(i, j) == parallel.at(i, j));
    }
  }
}

TEST_CASE("two items merge at their distance") {
  DistanceMatrix m(2);
  m.set(0, 1, 3.5);
  for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
    const Dendrogram d = agglomerate(m, linkage);
    REQUIRE(d.merges.size() == 1);
    CHECK(d.merges[0].left == 0);
    CHECK(d.merges[0].right == 1);
    CHECK(d.merges[0].height == 3.5);
    CHECK(d.merges[0].size == 2);
  }
}

TEST_CASE("hand-computed three-point average linkage") {
  // d(0,1)=1, d(0,2)=10, d(1,2)=10. Average linkage merges (0,1) at 1, then
  // joins 2 at (10+10)/2 = 10.
  DistanceMatrix m(3);
  m.set(0, 1, 1.0);
  m.set(0, 2, 10.0);
  m.set(1, 2, 10.0);
  const Dendrogram d = agglomerate(m, Linkage::Average);
  REQUIRE(d.merges.size() == 2);
  CHECK(d.merges[0].left == 0);
  CHECK(d.merges[0].right == 1);
  CHECK(d.merges[0].height == 1.0);
  CHECK(d.merges[1].left == 2);
  CHECK(d.merges[1].right == 3);  // cluster created by the first merge
  CHECK(d.merges[1].height == 10.0);

  const auto labels = cut(d, 2);
  CHECK(labels == std::vector<std::size_t>{0, 0, 1});
}

TEST_CASE("agglomerate needs at least two items") {
  CHECK_THROWS_AS(agglomerate(DistanceMatrix(1), Linkage::Average), TooFewItems);
}

TEST_CASE("merge heights are nondecreasing for all three linkages") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const DistanceMatrix m = random_integer_matrix(rng, 2 + rng.uniform_index(30), 100);
    for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      const Dendrogram d = agglomerate(m, linkage);
      for (std::size_t t = 1; t < d.merges.size(); ++t)
        CHECK(d.merges[t].height >= d.merges[t - 1].height);
    }
  }
}

TEST_CASE("agglomerate matches the naive re-scan oracle merge for merge") {
  Rng rng(2718);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(24);
    const DistanceMatrix m = random_integer_matrix(rng, n, 12);  // small values force ties
    for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      check_dendrograms_equal(agglomerate(m, linkage), oracle::agglomerate_rescan(m, linkage));
    }
  }
}

TEST_CASE("agglomerate matches the oracle on real-valued distances too") {
  Rng rng(31415);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(18);
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, rng.uniform(0.1, 9.0));
    for (auto linkage : {Linkage::Single, Linkage::Complete, Linkage::Average}) {
      check_dendrograms_equal(agglomerate(m, linkage), oracle::agglomerate_rescan(m, linkage));
    }
  }
}

TEST_CASE("cut produces exactly k nonempty clusters labeled by smallest member") {
  Rng rng(99);
  const std::size_t n = 17;
  const DistanceMatrix m = random_integer_matrix(rng, n, 50);
  const Dendrogram d = agglomerate(m, Linkage::Complete);

  CHECK(cut(d, 1) == std::vector<std::size_t>(n, 0));
  const auto singles = cut(d, n);
  for (std::size_t i = 0; i < n; ++i) CHECK(singles[i] == i);

  for (std::size_t k = 2; k < n; ++k) {
    const auto labels = cut(d, k);
    std::set<std::size_t> seen(labels.begin(), labels.end());
    CHECK(seen.size() == k);
    // Cluster 0 owns leaf 0; labels first appear in increasing order.
    std::size_t next_new = 0;
    for (std::size_t label : labels)
      if (label == next_new) ++next_new;
      else CHECK(label < next_new);
  }
  CHECK_THROWS_AS(cut(d, 0), BadK);
  CHECK_THROWS_AS(cut(d, n + 1), BadK);
}

TEST_CASE("profile pools symbols across members") {
  const ActivityProfile p1 = profile({"ccs"});
  CHECK(p1.frac_c == doctest::Approx(2.0 / 3.0));
  CHECK(p1.frac_p == 0.0);
  CHECK(p1.frac_s == doctest::Approx(1.0 / 3.0));
  CHECK(p1.members == 1);

  const ActivityProfile p2 = profile({"ps", "ps"});
  CHECK(p2.frac_p == doctest::Approx(0.5));
  CHECK(p2.frac_s == doctest::Approx(0.5));
  CHECK(p2.mean_length == 2.0);

  // Pooled, not averaged per member: "c" + "ppp" -> 1/4 c, 3/4 p.
  const ActivityProfile p3 = profile({"c", "ppp"});
  CHECK(p3.frac_c == doctest::Approx(0.25));
  CHECK(p3.frac_p == doctest::Approx(0.75));

  CHECK_THROWS_AS(profile({}), EmptyCluster);
}

TEST_CASE("profile fractions always sum to one") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> members;
    const std::size_t count = 1 + rng.uniform_index(6);
    for (std::size_t i = 0; i < count; ++i) {
      std::string s = random_cps(rng, 10);
      if (s.empty()) s = "c";
      members.push_back(std::move(s));
    }
    const ActivityProfile p = profile(members);
    CHECK(p.frac_c + p.frac_p + p.frac_s == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("behavior labels follow the thresholds in rule order") {
  auto make = [](double c, double p, double s) {
    ActivityProfile prof;
    prof.frac_c = c;
    prof.frac_p = p;
    prof.frac_s = s;
    prof.mean_length = 10.0;
    prof.members = 5;
    return prof;
  };
  CHECK(label_behavior(make(0.05, 0.45, 0.50)) == BehaviorType::Observation);
  CHECK(label_behavior(make(0.90, 0.05, 0.05)) == BehaviorType::Construction);
  CHECK(label_behavior(make(0.34, 0.33, 0.33)) == BehaviorType::FullCycle);
  CHECK(label_behavior(make(0.60, 0.20, 0.20)) == BehaviorType::Construction);  // boundary
  CHECK(label_behavior(make(0.30, 0.35, 0.35)) == BehaviorType::FullCycle);     // frac_c == max_c

  LabelThresholds strict;
  strict.construction_min_c = 0.95;
  CHECK(label_behavior(make(0.90, 0.05, 0.05), strict) == BehaviorType::FullCycle);
}

TEST_CASE("merge_groups recovers planted families, checked by exhaustive scoring") {
  Rng rng(606);
  struct Family {
    double c, p, s, len;
    int count;
  };
  const std::array<Family, 3> families{{{0.05, 0.5, 0.45, 20.0, 2},
                                        {0.8, 0.1, 0.1, 12.0, 2},
                                        {0.34, 0.33, 0.33, 120.0, 3}}};
  std::vector<SubCluster> clusters;
  std::vector<std::size_t> planted;
  std::size_t member_id = 0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    for (int i = 0; i < families[f].count; ++i) {
      const double jc = (rng.next_double() - 0.5) * 0.02;
      const double jp = (rng.next_double() - 0.5) * 0.02;
      SubCluster sc;
      sc.profile.frac_c = families[f].c + jc;
      sc.profile.frac_p = families[f].p + jp;
      sc.profile.frac_s = 1.0 - sc.profile.frac_c - sc.profile.frac_p;
      sc.profile.mean_length = families[f].len * (0.9 + 0.2 * rng.next_double());
      sc.profile.members = 10;
      sc.member_ids = {member_id++};
      clusters.push_back(std::move(sc));
      planted.push_back(f);
    }
  }

  const auto merged = merge_groups(clusters, 3);
  REQUIRE(merged.size() == 3);

  std::vector<std::size_t> produced(clusters.size(), 0);
  for (std::size_t mc = 0; mc < merged.size(); ++mc)
    for (std::size_t source : merged[mc].source_clusters) produced[source] = mc;

  // Exhaustive oracle: embed identically, then find the 3-partition with
  // minimal total within-part pairwise distance.
  double lo = 1e300, hi = -1e300;
  for (const auto& c : clusters) {
    lo = std::min(lo, std::log(c.profile.mean_length));
    hi = std::max(hi, std::log(c.profile.mean_length));
  }
  std::vector<std::vector<double>> points;
  for (const auto& c : clusters)
    points.push_back({c.profile.frac_c, c.profile.frac_p, c.profile.frac_s,
                      (std::log(c.profile.mean_length) - lo) / (hi - lo)});
  auto dist = [&](std::size_t i, std::size_t j) {
    double ss = 0.0;
    for (std::size_t d = 0; d < 4; ++d)
      ss += (points[i][d] - points[j][d]) * (points[i][d] - points[j][d]);
    return std::sqrt(ss);
  };
  double best_score = 1e300;
  std::vector<std::size_t> best_partition;
  for (const auto& partition : oracle::enumerate_partitions(clusters.size(), 3)) {
    double score = 0.0;
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j)
        if (partition[i] == partition[j]) score += dist(i, j);
    if (score < best_score) {
      best_score = score;
      best_partition = partition;
    }
  }

  // All three groupings (planted, produced, oracle-optimal) must coincide.
  auto canonical = [&](const std::vector<std::size_t>& labels) {
    std::vector<std::set<std::size_t>> sets(3);
    for (std::size_t i = 0; i < labels.size(); ++i) sets[labels[i]].insert(i);
    std::sort(sets.begin(), sets.end());
    return sets;
  };
  CHECK(canonical(produced) == canonical(planted));
  CHECK(canonical(best_partition) == canonical(planted));
}

TEST_CASE("merge_groups identity when target equals the cluster count") {
  std::vector<SubCluster> clusters;
  for (int i = 0; i < 3; ++i) {
    SubCluster sc;
    sc.profile = profile({std::string(5 + i, "cps"[i])});
    sc.member_ids = {static_cast<std::size_t>(i)};
    clusters.push_back(std::move(sc));
  }
  const auto merged = merge_groups(clusters, 3);
  REQUIRE(merged.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(merged[i].source_clusters == std::vector<std::size_t>{i});
    CHECK(merged[i].member_ids == std::vector<std::size_t>{i});
  }
}

TEST_CASE("identical profiles always merge before a distinct one") {
  std::vector<SubCluster> clusters(3);
  clusters[0].profile = profile({"pspsps"});
  clusters[0].member_ids = {0};
  clusters[1].profile = profile({"pspsps"});
  clusters[1].member_ids = {1};
  clusters[2].profile = profile({"cccccc"});
  clusters[2].member_ids = {2};
  const auto merged = merge_groups(clusters, 2);
  REQUIRE(merged.size() == 2);
  for (const auto& mc : merged) {
    if (mc.source_clusters.size() == 2)
      CHECK(mc.source_clusters == std::vector<std::size_t>{0, 1});
  }
}

TEST_CASE("merge_groups refuses an unreachable target") {
  std::vector<SubCluster> clusters(2);
  clusters[0].profile = profile({"cc"});
  clusters[1].profile = profile({"pp"});
  CHECK_THROWS_AS(merge_groups(clusters, 3), TooFewClusters);
}

TEST_CASE("pool_profiles matches recomputing the profile from scratch") {
  const ActivityProfile a = profile({"ccs", "cp"});
  const ActivityProfile b = profile({"ssss"});
  const ActivityProfile pooled = pool_profiles(a, b);
  const ActivityProfile direct = profile({"ccs", "cp", "ssss"});
  CHECK(pooled.frac_c == doctest::Approx(direct.frac_c).epsilon(1e-12));
  CHECK(pooled.frac_p == doctest::Approx(direct.frac_p).epsilon(1e-12));
  CHECK(pooled.frac_s == doctest::Approx(direct.frac_s).epsilon(1e-12));
  CHECK(pooled.mean_length == doctest::Approx(direct.mean_length).epsilon(1e-12));
  CHECK(pooled.members == direct.members);
}

}  // TEST_SUITE
