#include "relemb/alias_table.hpp"

#include <numeric>

#include "relemb/errors.hpp"

namespace relemb {

AliasTable::AliasTable(const EntityRelationMatrix& matrix) {
  cells_.reserve(matrix.nnz());
  std::vector<double> weights;
  weights.reserve(matrix.nnz());
  for (const Triplet& t : matrix.cells()) {
    cells_.emplace_back(t.row, t.col);
    weights.push_back(t.weight);
  }
  build(weights);
}

AliasTable::AliasTable(std::vector<std::pair<EntityId, EntityId>> cells,
                       const std::vector<double>& weights)
    : cells_(std::move(cells)) {
  if (cells_.size() != weights.size()) {
    throw DataError("alias table: cells and weights differ in length");
  }
  build(weights);
}

// Vose's construction: scale each probability by n, then repeatedly pair one
// under-full column with one over-full column. Residual mass is tracked with
// a single subtraction per pairing so drift stays at a few ulps.
void AliasTable::build(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DataError("alias table over an empty matrix");

  const double mass = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(mass > 0.0)) throw DataError("alias table requires positive total mass");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);

  std::vector<double> scaled(n);
  const double scale = static_cast<double>(n) / mass;
  for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * scale;

  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    const std::uint32_t l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  // Leftovers are exactly full up to rounding.
  for (std::uint32_t i : large) prob_[i] = 1.0;
  for (std::uint32_t i : small) prob_[i] = 1.0;
}

double AliasTable::reconstructed_probability(std::size_t k) const {
  const std::size_t n = prob_.size();
  double mass = prob_[k];
  for (std::size_t j = 0; j < n; ++j) {
    if (j != k && alias_[j] == k) mass += 1.0 - prob_[j];
  }
  return mass / static_cast<double>(n);
}

NegativeSampler::NegativeSampler(std::uint32_t n_entities, bool exclude_positive)
    : n_entities_(n_entities), exclude_positive_(exclude_positive) {
  if (n_entities == 0) throw DataError("negative sampling over an empty type");
}

void NegativeSampler::sample(std::size_t n, EntityId positive, Rng& rng,
                             std::vector<EntityId>& out) const {
  for (std::size_t i = 0; i < n; ++i) {
    EntityId id = static_cast<EntityId>(rng.next_below(n_entities_));
    if (exclude_positive_ && n_entities_ > 1) {
      while (id == positive) id = static_cast<EntityId>(rng.next_below(n_entities_));
    }
    out.push_back(id);
  }
}

GlobalAliasTable::GlobalAliasTable(const MatrixSet& set)
    : table_(concat(set, matrix_of_)) {}

AliasTable GlobalAliasTable::concat(const MatrixSet& set,
                                    std::vector<std::uint32_t>& matrix_of) {
  std::vector<std::pair<EntityId, EntityId>> cells;
  std::vector<double> weights;
  for (std::size_t m = 0; m < set.size(); ++m) {
    for (const Triplet& t : set[m].cells()) {
      cells.emplace_back(t.row, t.col);
      weights.push_back(t.weight);
      matrix_of.push_back(static_cast<std::uint32_t>(m));
    }
  }
  return AliasTable(std::move(cells), weights);
}

}  // namespace relemb
