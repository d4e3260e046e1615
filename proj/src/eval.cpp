#include "relemb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "relemb/errors.hpp"
#include "relemb/rng.hpp"

namespace relemb {

namespace {

double sq_dist(const float* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double diff = static_cast<double>(a[i]) - b[i];
    s += diff * diff;
  }
  return s;
}

struct KMeansResult {
  std::vector<int> labels;
  double wcss = std::numeric_limits<double>::infinity();
};

KMeansResult lloyd_once(std::span<const float> data, std::size_t n, int d, int k,
                        std::uint64_t seed, int max_iter) {
  Rng rng(seed);
  std::vector<double> centroids(static_cast<std::size_t>(k) * d, 0.0);

  // k-means++ seeding.
  std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
  std::size_t first = static_cast<std::size_t>(rng.next_below(n));
  for (int j = 0; j < d; ++j) centroids[j] = data[first * d + j];
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sq = sq_dist(&data[i * d], &centroids[(c - 1) * d], d);
      min_sq[i] = std::min(min_sq[i], sq);
      total += min_sq[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = rng.next_double() * total;
      for (std::size_t i = 0; i < n; ++i) {
        target -= min_sq[i];
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.next_below(n));
    }
    for (int j = 0; j < d; ++j) centroids[c * d + j] = data[pick * d + j];
  }

  std::vector<int> labels(n, -1);
  std::vector<double> nearest(n, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_sq = sq_dist(&data[i * d], &centroids[0], d);
      for (int c = 1; c < k; ++c) {
        const double sq = sq_dist(&data[i * d], &centroids[c * d], d);
        if (sq < best_sq) {
          best_sq = sq;
          best = c;
        }
      }
      nearest[i] = best_sq;
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++counts[labels[i]];
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      // Repair: move the point farthest from its centroid.
      std::size_t far = 0;
      double far_sq = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[labels[i]] > 1 && nearest[i] > far_sq) {
          far_sq = nearest[i];
          far = i;
        }
      }
      --counts[labels[far]];
      labels[far] = c;
      counts[c] = 1;
      nearest[far] = 0.0;
      changed = true;
    }

    std::fill(centroids.begin(), centroids.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) centroids[labels[i] * d + j] += data[i * d + j];
    }
    for (int c = 0; c < k; ++c) {
      for (int j = 0; j < d; ++j) centroids[c * d + j] /= static_cast<double>(counts[c]);
    }
    if (!changed) break;
  }

  KMeansResult result;
  result.labels = std::move(labels);
  result.wcss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    result.wcss += sq_dist(&data[i * d], &centroids[result.labels[i] * d], d);
  }
  return result;
}

}  // namespace

Partition kmeans(std::span<const float> data, std::size_t n, int dim, int k,
                 int n_init, std::uint64_t seed, int max_iter) {
  if (k < 1) throw DataError("k must be >= 1");
  if (n_init < 1) throw DataError("n_init must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw DataError("k = " + std::to_string(k) + " exceeds " + std::to_string(n) +
                    " points");
  }
  if (data.size() != n * static_cast<std::size_t>(dim)) {
    throw DataError("data size does not match n * dim");
  }

  std::vector<KMeansResult> results(n_init);
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const int pool_size = static_cast<int>(std::min<std::size_t>(hw, n_init));
  if (pool_size <= 1 || n < 2048) {
    for (int r = 0; r < n_init; ++r) {
      results[r] = lloyd_once(data, n, dim, k, seed + static_cast<std::uint64_t>(r),
                              max_iter);
    }
  } else {
    // Restarts are independent; selection below stays deterministic.
    std::vector<std::thread> pool;
    for (int w = 0; w < pool_size; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < n_init; r += pool_size) {
          results[r] = lloyd_once(data, n, dim, k, seed + static_cast<std::uint64_t>(r),
                                  max_iter);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  int best = 0;
  for (int r = 1; r < n_init; ++r) {
    if (results[r].wcss < results[best].wcss) best = r;
  }
  return Partition{std::move(results[best].labels), k};
}

namespace {

// Contingency table and marginals of two partitions over the same items.
struct Contingency {
  std::vector<std::vector<double>> table;  // [a.k][b.k]
  std::vector<double> row;                 // a marginals
  std::vector<double> col;                 // b marginals
  double n = 0.0;
};

Contingency contingency(const Partition& a, const Partition& b) {
  if (a.labels.size() != b.labels.size()) {
    throw DataError("partitions differ in length: " + std::to_string(a.labels.size()) +
                    " vs " + std::to_string(b.labels.size()));
  }
  Contingency c;
  c.table.assign(a.k, std::vector<double>(b.k, 0.0));
  c.row.assign(a.k, 0.0);
  c.col.assign(b.k, 0.0);
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    c.table[a.labels[i]][b.labels[i]] += 1.0;
    c.row[a.labels[i]] += 1.0;
    c.col[b.labels[i]] += 1.0;
  }
  c.n = static_cast<double>(a.labels.size());
  return c;
}

double entropy(const std::vector<double>& counts, double n) {
  double h = 0.0;
  for (double c : counts) {
    if (c > 0.0) h -= (c / n) * std::log(c / n);
  }
  return h;
}

bool same_grouping(const Contingency& c) {
  // Identical up to relabeling: every row maps to exactly one column and
  // vice versa.
  for (const auto& row : c.table) {
    int nonzero = 0;
    for (double x : row) nonzero += x > 0.0;
    if (nonzero > 1) return false;
  }
  for (std::size_t j = 0; j < c.col.size(); ++j) {
    int nonzero = 0;
    for (const auto& row : c.table) nonzero += row[j] > 0.0;
    if (nonzero > 1) return false;
  }
  return true;
}

}  // namespace

double nmi(const Partition& a, const Partition& b) {
  const Contingency c = contingency(a, b);
  const double ha = entropy(c.row, c.n);
  const double hb = entropy(c.col, c.n);
  if (ha == 0.0 || hb == 0.0) {
    return same_grouping(c) ? 1.0 : 0.0;
  }
  double mi = 0.0;
  for (int i = 0; i < a.k; ++i) {
    for (int j = 0; j < b.k; ++j) {
      const double nij = c.table[i][j];
      if (nij > 0.0) {
        mi += (nij / c.n) * std::log((nij * c.n) / (c.row[i] * c.col[j]));
      }
    }
  }
  return mi / std::sqrt(ha * hb);
}

double ari(const Partition& a, const Partition& b) {
  const Contingency c = contingency(a, b);
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };

  double sum_ij = 0.0;
  for (const auto& row : c.table) {
    for (double x : row) sum_ij += choose2(x);
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (double x : c.row) sum_a += choose2(x);
  for (double x : c.col) sum_b += choose2(x);

  const double pairs = choose2(c.n);
  const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return 1.0;  // both partitions trivial
  return (sum_ij - expected) / (maximum - expected);
}

double acc(const Partition& pred, const Partition& truth) {
  const Contingency c = contingency(pred, truth);
  const std::size_t m = std::max(c.row.size(), c.col.size());
  // Hungarian minimizes; negate the agreement counts and pad square.
  std::vector<std::vector<double>> cost(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < c.row.size(); ++i) {
    for (std::size_t j = 0; j < c.col.size(); ++j) cost[i][j] = -c.table[i][j];
  }
  const std::vector<int> match = hungarian(cost);
  double agreed = 0.0;
  for (std::size_t i = 0; i < c.row.size(); ++i) {
    const std::size_t j = static_cast<std::size_t>(match[i]);
    if (j < c.col.size()) agreed += c.table[i][j];
  }
  return agreed / c.n;
}

double precision_at_k(std::span<const EntityId> ranked,
                      const std::unordered_set<EntityId>& relevant, std::size_t k) {
  if (k < 1) throw DataError("k must be >= 1");
  std::size_t hits = 0;
  const std::size_t limit = std::min(k, ranked.size());
  for (std::size_t i = 0; i < limit; ++i) {
    if (relevant.count(ranked[i]) > 0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

// Shortest-augmenting-path assignment with row/column potentials.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) throw DataError("cost matrix must be square");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // column -> row (1-based)
  std::vector<int> way(n + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> min_v(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] != 0) row_to_col[match[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace relemb
