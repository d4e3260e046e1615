#include "relemb/postproc.hpp"

#include <algorithm>
#include <cmath>

#include "relemb/errors.hpp"
#include "relemb/matrix.hpp"

namespace relemb {

std::vector<float> type_mean(const EmbeddingSet& emb, TypeId type) {
  const std::size_t n = emb.count(type);
  const int d = emb.dim();
  std::vector<double> acc(d, 0.0);
  for (EntityId i = 0; i < n; ++i) {
    auto v = emb.row(type, i);
    for (int k = 0; k < d; ++k) acc[k] += v[k];
  }
  std::vector<float> mean(d, 0.0f);
  if (n > 0) {
    for (int k = 0; k < d; ++k) mean[k] = static_cast<float>(acc[k] / static_cast<double>(n));
  }
  return mean;
}

void center_by_type(EmbeddingSet& emb) {
  for (TypeId t = 0; t < emb.type_count(); ++t) {
    if (emb.count(t) == 0) continue;
    const std::vector<float> mean = type_mean(emb, t);
    for (EntityId i = 0; i < emb.count(t); ++i) {
      auto v = emb.row(t, i);
      for (int k = 0; k < emb.dim(); ++k) v[k] -= mean[k];
    }
  }
}

std::vector<std::vector<double>> pairwise_distances(const EmbeddingSet& emb,
                                                    const std::vector<TypeId>& types) {
  std::vector<std::pair<TypeId, EntityId>> order;
  for (TypeId t : types) {
    if (emb.count(t) == 0) throw DataError("type has no entities");
    for (EntityId i = 0; i < emb.count(t); ++i) order.emplace_back(t, i);
  }
  const std::size_t n = order.size();
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    auto va = emb.row(order[a].first, order[a].second);
    for (std::size_t b = a + 1; b < n; ++b) {
      auto vb = emb.row(order[b].first, order[b].second);
      double s = 0.0;
      for (int k = 0; k < emb.dim(); ++k) {
        const double diff = static_cast<double>(va[k]) - static_cast<double>(vb[k]);
        s += diff * diff;
      }
      dist[a][b] = dist[b][a] = std::sqrt(s);
    }
  }
  return dist;
}

std::vector<Neighbor> nearest_neighbors(const EmbeddingSet& emb,
                                        std::span<const float> query,
                                        TypeId target_type, std::size_t k,
                                        std::int64_t exclude) {
  double qnorm = 0.0;
  for (float x : query) qnorm += static_cast<double>(x) * x;
  qnorm = std::sqrt(qnorm);
  if (!(qnorm > 0.0)) throw DataError("query vector has zero norm");

  std::vector<Neighbor> scored;
  scored.reserve(emb.count(target_type));
  for (EntityId i = 0; i < emb.count(target_type); ++i) {
    if (exclude >= 0 && static_cast<EntityId>(exclude) == i) continue;
    auto v = emb.row(target_type, i);
    double dot = 0.0, vnorm = 0.0;
    for (std::size_t j = 0; j < query.size(); ++j) {
      dot += static_cast<double>(query[j]) * v[j];
      vnorm += static_cast<double>(v[j]) * v[j];
    }
    vnorm = std::sqrt(vnorm);
    const double cos = vnorm > 0.0 ? dot / (qnorm * vnorm) : 0.0;
    scored.push_back({i, cos});
  }
  std::sort(scored.begin(), scored.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.score != b.score ? a.score > b.score : a.entity < b.entity;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

double pmi(const EntityRelationMatrix& m, EntityId i, EntityId j) {
  double cell = 0.0;
  double row_mass = 0.0;
  double col_mass = 0.0;
  for (const Triplet& t : m.cells()) {
    if (t.row == i) row_mass += t.weight;
    if (t.col == j) col_mass += t.weight;
    if (t.row == i && t.col == j) cell = t.weight;
  }
  if (cell <= 0.0) {
    throw DataError("PMI undefined: cell (" + std::to_string(i) + "," +
                    std::to_string(j) + ") is zero");
  }
  const double mass = m.total_mass();
  return std::log((cell / mass) / ((row_mass / mass) * (col_mass / mass)));
}

}  // namespace relemb
