#pragma once

#include <string>
#include <vector>

#include "relemb/registry.hpp"
#include "relemb/trainer.hpp"

namespace relemb {

// Per-type mean removal: each embedding becomes v - mean(type). Types are
// centered independently, which makes cross-type distances commensurate.
void center_by_type(EmbeddingSet& embeddings);

// Mean embedding of one type.
std::vector<float> type_mean(const EmbeddingSet& embeddings, TypeId type);

// Dense symmetric L2 distance matrix over the entities of the listed types,
// blocks laid out in type_list order. Row index = offset of the type block
// plus entity id.
std::vector<std::vector<double>> pairwise_distances(const EmbeddingSet& embeddings,
                                                    const std::vector<TypeId>& type_list);

struct Neighbor {
  EntityId entity;
  double score;  // cosine similarity
};

// Top-k entities of `target_type` by cosine similarity to `query`,
// descending, ties broken by entity id. `exclude` skips one id (the query
// entity itself when it belongs to the target type); pass -1 to keep all.
std::vector<Neighbor> nearest_neighbors(const EmbeddingSet& embeddings,
                                        std::span<const float> query,
                                        TypeId target_type, std::size_t k,
                                        std::int64_t exclude = -1);

// Pointwise mutual information of one cell under P = M / total_mass:
// log(P[i,j] / (row_marginal_i * col_marginal_j)). Throws DataError when the
// cell is zero.
double pmi(const EntityRelationMatrix& m, EntityId i, EntityId j);

}  // namespace relemb
