#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "relemb/registry.hpp"

namespace relemb {

// Cluster assignment, one label in [0, k) per item.
struct Partition {
  std::vector<int> labels;
  int k = 0;

  std::size_t size() const { return labels.size(); }
};

// Lloyd's algorithm with k-means++ seeding, best of n_init restarts by
// within-cluster sum of squares. Deterministic given the seed: restart r
// uses seed + r and ties prefer the lower restart index. Emptied clusters
// are repaired by stealing the point farthest from its centroid.
Partition kmeans(std::span<const float> data, std::size_t n, int dim, int k,
                 int n_init = 10, std::uint64_t seed = 1, int max_iter = 300);

// Normalized mutual information I(a;b) / sqrt(H(a) H(b)). If either entropy
// is zero: 1 when the partitions are identical as groupings, else 0.
double nmi(const Partition& a, const Partition& b);

// Adjusted Rand index via the pair-counting contingency formula.
double ari(const Partition& a, const Partition& b);

// Clustering accuracy: the best fraction of agreements over all one-to-one
// matchings of predicted to true clusters (Hungarian assignment).
double acc(const Partition& pred, const Partition& truth);

// |top-k of `ranked` that are in `relevant`| / k.
double precision_at_k(std::span<const EntityId> ranked,
                      const std::unordered_set<EntityId>& relevant, std::size_t k);

// Minimum-cost perfect assignment on a square cost matrix; returns the
// column matched to each row. O(n^3).
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

}  // namespace relemb
