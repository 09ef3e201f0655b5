#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqmine/errors.hpp"

namespace seqmine {

// Unit-cost edit distance (insert, delete, substitute). O(|a|*|b|) time,
// O(min(|a|,|b|)) working space.
std::size_t levenshtein(std::string_view a, std::string_view b);

// Symmetric pairwise distances stored condensed (i < j).
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n < 2 ? 0 : n * (n - 1) / 2, 0.0) {}

  std::size_t size() const { return n_; }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return d_[index(i, j)];
  }

  void set(std::size_t i, std::size_t j, double v) { d_[index(i, j)] = v; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
  }

  std::size_t n_;
  std::vector<double> d_;
};

// All pairwise Levenshtein distances. Pairs are independent, so they may be
// computed on several threads; the result does not depend on thread count.
DistanceMatrix distance_matrix(const std::vector<std::string>& sequences, unsigned threads = 1);

enum class Linkage { Single, Complete, Average };

std::string_view to_string(Linkage linkage);
Linkage linkage_from_string(std::string_view name);

struct Merge {
  std::size_t left;   // cluster ids; leaves are 0..n-1, merge t creates id n+t
  std::size_t right;  // left < right always
  double height;
  std::size_t size;   // leaves under the new cluster
};

struct Dendrogram {
  std::size_t n_leaves = 0;
  Linkage linkage = Linkage::Average;
  std::vector<Merge> merges;  // exactly n_leaves - 1 records
};

// Bottom-up agglomeration via Lance-Williams updates. At every step the pair
// with minimal linkage distance merges; ties break on the lexicographically
// smallest (left, right) cluster-id pair. Average linkage is tracked as
// cross-cluster distance sums so heights equal the naive mean exactly when
// inputs are exactly representable.
Dendrogram agglomerate(const DistanceMatrix& matrix, Linkage linkage);

// Undo the last k-1 merges; the connected components are the clusters.
// Labels 0..k-1 are assigned in order of each cluster's smallest leaf index.
std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t k);

struct ActivityProfile {
  double frac_c = 0.0;
  double frac_p = 0.0;
  double frac_s = 0.0;
  double mean_length = 0.0;
  std::size_t members = 0;
};

// Symbol fractions pooled over all member symbols (not averaged per member).
ActivityProfile profile(const std::vector<std::string>& member_symbols);

// Exact pooled combination of two profiles.
ActivityProfile pool_profiles(const ActivityProfile& a, const ActivityProfile& b);

enum class BehaviorType { Observation, Construction, FullCycle };

std::string_view to_string(BehaviorType type);

struct LabelThresholds {
  double construction_min_c = 0.6;   // frac_c >= this -> Construction
  double observation_min_ps = 0.7;   // frac_p + frac_s >= this and
  double observation_max_c = 0.3;    // frac_c < this -> Observation
};

// Rule order: Construction, then Observation, FullCycle as fallback.
BehaviorType label_behavior(const ActivityProfile& profile, const LabelThresholds& t = {});

struct SubCluster {
  ActivityProfile profile;
  std::vector<std::size_t> member_ids;  // caller-defined sequence identifiers
};

struct MergedCluster {
  ActivityProfile profile;
  std::vector<std::size_t> member_ids;
  std::vector<std::size_t> source_clusters;  // indices into the input list
};

// Replaces a by-eye cluster comparison with a deterministic one: agglomerate
// the per-cluster vectors (frac_c, frac_p, frac_s, min-max-normalized log
// mean length) under average linkage on Euclidean distance and cut at
// `target`. Members are pooled.
std::vector<MergedCluster> merge_groups(const std::vector<SubCluster>& clusters,
                                        std::size_t target = 3);

}  // namespace seqmine
