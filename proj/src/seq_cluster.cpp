#include "seqmine/seq_cluster.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace seqmine {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);  // b is the shorter one
  if (b.empty()) return a.size();

  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});

  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    const char ca = a[i - 1];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ca == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

DistanceMatrix distance_matrix(const std::vector<std::string>& sequences, unsigned threads) {
  const std::size_t n = sequences.size();
  DistanceMatrix m(n);
  if (n < 2) return m;

  auto fill_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i + 1 < n; i += stride)
      for (std::size_t j = i + 1; j < n; ++j)
        m.set(i, j, static_cast<double>(levenshtein(sequences[i], sequences[j])));
  };

  if (threads <= 1) {
    fill_rows(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fill_rows, t, threads);
    for (auto& th : pool) th.join();
  }
  return m;
}

std::string_view to_string(Linkage linkage) {
  switch (linkage) {
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
    case Linkage::Average: return "average";
  }
  return "?";
}

Linkage linkage_from_string(std::string_view name) {
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  if (name == "average") return Linkage::Average;
  throw InputError("unknown linkage '" + std::string(name) + "'");
}

Dendrogram agglomerate(const DistanceMatrix& matrix, Linkage linkage) {
  const std::size_t n = matrix.size();
  if (n < 2) throw TooFewItems("agglomerate: need at least 2 items");

  // Slot-compacted working state. For Average the slots hold cross-cluster
  // distance *sums*; the linkage value is sum / (size_i * size_j), so merged
  // sums stay exact for exactly-representable inputs.
  struct Slot {
    std::size_t id;
    std::size_t size;
  };
  std::vector<Slot> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = {i, 1};

  std::vector<double> work(n * n, 0.0);
  auto w = [&](std::size_t x, std::size_t y) -> double& { return work[x * n + y]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = matrix.at(i, j);

  Dendrogram out;
  out.n_leaves = n;
  out.linkage = linkage;
  out.merges.reserve(n - 1);

  std::size_t active = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    // Pick the closest pair; ties resolve to the smallest (id_lo, id_hi).
    std::size_t best_a = 0, best_b = 1;
    double best_value = std::numeric_limits<double>::infinity();
    std::size_t best_lo = 0, best_hi = 0;
    bool first = true;
    for (std::size_t x = 0; x < active; ++x) {
      for (std::size_t y = x + 1; y < active; ++y) {
        double value = w(x, y);
        if (linkage == Linkage::Average)
          value /= static_cast<double>(slots[x].size) * static_cast<double>(slots[y].size);
        const std::size_t lo = std::min(slots[x].id, slots[y].id);
        const std::size_t hi = std::max(slots[x].id, slots[y].id);
        const bool better =
            first || value < best_value ||
            (value == best_value && (lo < best_lo || (lo == best_lo && hi < best_hi)));
        if (better) {
          first = false;
          best_value = value;
          best_a = x;
          best_b = y;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }

    const std::size_t new_size = slots[best_a].size + slots[best_b].size;
    out.merges.push_back({best_lo, best_hi, best_value, new_size});

    // Lance-Williams update into slot best_a.
    for (std::size_t k = 0; k < active; ++k) {
      if (k == best_a || k == best_b) continue;
      double updated;
      switch (linkage) {
        case Linkage::Single: updated = std::min(w(k, best_a), w(k, best_b)); break;
        case Linkage::Complete: updated = std::max(w(k, best_a), w(k, best_b)); break;
        case Linkage::Average: updated = w(k, best_a) + w(k, best_b); break;
        default: updated = 0.0; break;
      }
      w(k, best_a) = w(best_a, k) = updated;
    }
    slots[best_a] = {n + step, new_size};

    // Compact: move the last active slot into best_b.
    const std::size_t last = active - 1;
    if (best_b != last) {
      slots[best_b] = slots[last];
      for (std::size_t k = 0; k < active; ++k) {
        w(k, best_b) = w(k, last);
        w(best_b, k) = w(last, k);
      }
    }
    --active;
  }
  return out;
}

std::vector<std::size_t> cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.n_leaves;
  if (k < 1 || k > n) throw BadK("cut: k must be in [1, n]");

  // Apply the first n-k merges; what remains are the clusters.
  std::vector<std::vector<std::size_t>> members_by_id(2 * n - 1);
  std::vector<bool> alive(2 * n - 1, false);
  for (std::size_t i = 0; i < n; ++i) {
    members_by_id[i] = {i};
    alive[i] = true;
  }
  for (std::size_t t = 0; t < n - k; ++t) {
    const Merge& m = dendrogram.merges[t];
    auto& merged = members_by_id[n + t];
    merged = std::move(members_by_id[m.left]);
    auto& right = members_by_id[m.right];
    merged.insert(merged.end(), right.begin(), right.end());
    right.clear();
    alive[m.left] = alive[m.right] = false;
    alive[n + t] = true;
  }

  struct Cluster {
    std::size_t min_leaf;
    const std::vector<std::size_t>* members;
  };
  std::vector<Cluster> clusters;
  for (std::size_t id = 0; id < 2 * n - 1; ++id) {
    if (!alive[id]) continue;
    const auto& mem = members_by_id[id];
    clusters.push_back({*std::min_element(mem.begin(), mem.end()), &mem});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.min_leaf < b.min_leaf; });

  std::vector<std::size_t> labels(n, 0);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (std::size_t leaf : *clusters[c].members) labels[leaf] = c;
  return labels;
}

ActivityProfile profile(const std::vector<std::string>& member_symbols) {
  if (member_symbols.empty()) throw EmptyCluster("profile: no members");

  std::size_t c = 0, p = 0, s = 0, total = 0;
  for (const auto& seq : member_symbols) {
    for (char ch : seq) {
      if (ch == 'c') ++c;
      else if (ch == 'p') ++p;
      else if (ch == 's') ++s;
    }
    total += seq.size();
  }
  if (total == 0) throw EmptyCluster("profile: members carry no symbols");

  ActivityProfile out;
  out.members = member_symbols.size();
  out.frac_c = static_cast<double>(c) / static_cast<double>(total);
  out.frac_p = static_cast<double>(p) / static_cast<double>(total);
  out.frac_s = static_cast<double>(s) / static_cast<double>(total);
  out.mean_length = static_cast<double>(total) / static_cast<double>(member_symbols.size());
  return out;
}

ActivityProfile pool_profiles(const ActivityProfile& a, const ActivityProfile& b) {
  const double wa = a.mean_length * static_cast<double>(a.members);
  const double wb = b.mean_length * static_cast<double>(b.members);
  const double total = wa + wb;

  ActivityProfile out;
  out.members = a.members + b.members;
  out.frac_c = (a.frac_c * wa + b.frac_c * wb) / total;
  out.frac_p = (a.frac_p * wa + b.frac_p * wb) / total;
  out.frac_s = (a.frac_s * wa + b.frac_s * wb) / total;
  out.mean_length = total / static_cast<double>(out.members);
  return out;
}

std::string_view to_string(BehaviorType type) {
  switch (type) {
    case BehaviorType::Observation: return "observation";
    case BehaviorType::Construction: return "construction";
    case BehaviorType::FullCycle: return "full_cycle";
  }
  return "?";
}

BehaviorType label_behavior(const ActivityProfile& profile, const LabelThresholds& t) {
  if (profile.frac_c >= t.construction_min_c) return BehaviorType::Construction;
  if (profile.frac_p + profile.frac_s >= t.observation_min_ps &&
      profile.frac_c < t.observation_max_c)
    return BehaviorType::Observation;
  return BehaviorType::FullCycle;
}

std::vector<MergedCluster> merge_groups(const std::vector<SubCluster>& clusters,
                                        std::size_t target) {
  if (target < 1) throw BadK("merge_groups: target must be >= 1");
  if (clusters.size() < target)
    throw TooFewClusters("merge_groups: fewer clusters than merge target");

  std::vector<std::vector<std::size_t>> grouping;
  if (clusters.size() == target) {
    for (std::size_t i = 0; i < clusters.size(); ++i) grouping.push_back({i});
  } else {
    // Profile-space coordinates: symbol fractions plus log mean length
    // min-max normalized so no single axis dominates.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& c : clusters) {
      const double v = std::log(c.profile.mean_length);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;

    std::vector<std::array<double, 4>> points;
    points.reserve(clusters.size());
    for (const auto& c : clusters)
      points.push_back({c.profile.frac_c, c.profile.frac_p, c.profile.frac_s,
                        (std::log(c.profile.mean_length) - lo) / span});

    DistanceMatrix dm(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        double ss = 0.0;
        for (std::size_t d = 0; d < 4; ++d) {
          const double diff = points[i][d] - points[j][d];
          ss += diff * diff;
        }
        dm.set(i, j, std::sqrt(ss));
      }

    const auto labels = cut(agglomerate(dm, Linkage::Average), target);
    grouping.assign(target, {});
    for (std::size_t i = 0; i < labels.size(); ++i) grouping[labels[i]].push_back(i);
  }

  std::vector<MergedCluster> merged;
  merged.reserve(grouping.size());
  for (const auto& source : grouping) {
    MergedCluster mc;
    mc.source_clusters = source;
    mc.profile = clusters[source[0]].profile;
    mc.member_ids = clusters[source[0]].member_ids;
    for (std::size_t idx = 1; idx < source.size(); ++idx) {
      const SubCluster& c = clusters[source[idx]];
      mc.profile = pool_profiles(mc.profile, c.profile);
      mc.member_ids.insert(mc.member_ids.end(), c.member_ids.begin(), c.member_ids.end());
    }
    merged.push_back(std::move(mc));
  }
  return merged;
}

}  // namespace seqmine
