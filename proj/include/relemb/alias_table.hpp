#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "relemb/matrix.hpp"
#include "relemb/rng.hpp"

namespace relemb {

// O(1) discrete sampler over the nonzero cells of one matrix. A cell is drawn
// with probability weight / total_mass using two uniform draws: a column pick
// and a coin flip against that column's residual probability.
class AliasTable {
 public:
  explicit AliasTable(const EntityRelationMatrix& matrix);

  // Used by the global-normalization mode: sample over arbitrary cell weights.
  AliasTable(std::vector<std::pair<EntityId, EntityId>> cells,
             const std::vector<double>& weights);

  std::size_t size() const { return cells_.size(); }

  std::size_t sample_index(Rng& rng) const {
    const std::size_t k = static_cast<std::size_t>(rng.next_below(cells_.size()));
    return rng.next_double() < prob_[k] ? k : alias_[k];
  }

  std::pair<EntityId, EntityId> sample(Rng& rng) const { return cells_[sample_index(rng)]; }

  const std::pair<EntityId, EntityId>& cell(std::size_t k) const { return cells_[k]; }

  // Probability the table assigns to cell k, reconstructed from the prob and
  // alias arrays. Test hook: must equal weight_k / total_mass within 1e-12.
  double reconstructed_probability(std::size_t k) const;

  const std::vector<double>& prob() const { return prob_; }
  const std::vector<std::uint32_t>& alias() const { return alias_; }

 private:
  void build(const std::vector<double>& weights);

  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<std::pair<EntityId, EntityId>> cells_;
};

// Uniform sampler over the entities of one type. Optionally excludes a given
// positive id by resampling (only useful for very small types).
class NegativeSampler {
 public:
  NegativeSampler(std::uint32_t n_entities, bool exclude_positive = false);

  // Draws n ids i.i.d. uniform; duplicates permitted. Appends to `out`.
  void sample(std::size_t n, EntityId positive, Rng& rng,
              std::vector<EntityId>& out) const;

 private:
  std::uint32_t n_entities_;
  bool exclude_positive_;
};

// One alias table over the concatenation of every matrix in the set,
// normalized by the grand total mass. Exists to reproduce the ablation where
// matrices with small raw mass are starved of samples.
class GlobalAliasTable {
 public:
  explicit GlobalAliasTable(const MatrixSet& set);

  // Returns (matrix index, row id, col id).
  std::tuple<std::size_t, EntityId, EntityId> sample(Rng& rng) const {
    const std::size_t k = table_.sample_index(rng);
    const auto& cell = table_.cell(k);
    return {matrix_of_[k], cell.first, cell.second};
  }

  std::size_t size() const { return table_.size(); }

 private:
  std::vector<std::uint32_t> matrix_of_;  // must precede table_: concat fills it
  AliasTable table_;

  static AliasTable concat(const MatrixSet& set, std::vector<std::uint32_t>& matrix_of);
};

}  // namespace relemb
