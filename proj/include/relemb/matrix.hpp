#pragma once

#include <cstdint>
#include <vector>

#include "relemb/registry.hpp"

namespace relemb {

struct Triplet {
  EntityId row;
  EntityId col;
  double weight;
};

// Sparse nonnegative matrix between a row entity-type and a column
// entity-type. Built once, then immutable: cells are deduplicated (duplicate
// coordinates summed), zero weights dropped, and the total mass precomputed.
class EntityRelationMatrix {
 public:
  // Validates and normalizes raw triplets. Throws DataError on a negative
  // weight (reported with its cell location), an out-of-range id, or an
  // all-zero result.
  static EntityRelationMatrix build(TypeId row_type, TypeId col_type,
                                    std::uint32_t n_rows, std::uint32_t n_cols,
                                    std::vector<Triplet> triplets,
                                    double alpha = 1.0);

  TypeId row_type() const { return row_type_; }
  TypeId col_type() const { return col_type_; }
  std::uint32_t n_rows() const { return n_rows_; }
  std::uint32_t n_cols() const { return n_cols_; }
  double total_mass() const { return total_mass_; }
  double alpha() const { return alpha_; }
  void set_alpha(double alpha);

  const std::vector<Triplet>& cells() const { return cells_; }
  std::size_t nnz() const { return cells_.size(); }

 private:
  EntityRelationMatrix() = default;

  TypeId row_type_ = kInvalidType;
  TypeId col_type_ = kInvalidType;
  std::uint32_t n_rows_ = 0;
  std::uint32_t n_cols_ = 0;
  std::vector<Triplet> cells_;  // sorted by (row, col), unique, weight > 0
  double total_mass_ = 0.0;
  double alpha_ = 1.0;
};

// Ordered list of matrices sharing one registry. Order is significant: the
// trainer visits matrices in declared order.
class MatrixSet {
 public:
  explicit MatrixSet(const EntityRegistry& registry) : registry_(&registry) {}

  // Validates the matrix against the registry (types exist, dimensions do not
  // exceed the registered entity counts) and appends it.
  void add(EntityRelationMatrix matrix);

  const EntityRegistry& registry() const { return *registry_; }
  const std::vector<EntityRelationMatrix>& matrices() const { return matrices_; }
  std::vector<EntityRelationMatrix>& matrices() { return matrices_; }
  std::size_t size() const { return matrices_.size(); }
  bool empty() const { return matrices_.empty(); }
  const EntityRelationMatrix& operator[](std::size_t i) const { return matrices_[i]; }

 private:
  const EntityRegistry* registry_;
  std::vector<EntityRelationMatrix> matrices_;
};

}  // namespace relemb
