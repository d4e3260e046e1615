#include "relemb/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relemb/errors.hpp"

namespace relemb {

EntityRelationMatrix EntityRelationMatrix::build(TypeId row_type, TypeId col_type,
                                                 std::uint32_t n_rows,
                                                 std::uint32_t n_cols,
                                                 std::vector<Triplet> triplets,
                                                 double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw DataError("alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  for (const Triplet& t : triplets) {
    if (!(t.weight >= 0.0)) {  // also catches NaN
      throw DataError("negative weight " + std::to_string(t.weight) + " at cell (" +
                      std::to_string(t.row) + "," + std::to_string(t.col) + ")");
    }
    if (t.row >= n_rows || t.col >= n_cols) {
      throw DataError("cell (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                      ") outside " + std::to_string(n_rows) + "x" +
                      std::to_string(n_cols) + " matrix");
    }
  }

  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  // Merge duplicate cells, drop zeros.
  std::vector<Triplet> cells;
  cells.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (!cells.empty() && cells.back().row == t.row && cells.back().col == t.col) {
      cells.back().weight += t.weight;
    } else {
      cells.push_back(t);
    }
  }
  std::erase_if(cells, [](const Triplet& t) { return t.weight == 0.0; });

  double mass = 0.0;
  for (const Triplet& t : cells) mass += t.weight;
  if (cells.empty() || !(mass > 0.0)) {
    throw DataError("matrix has no positive entries");
  }

  EntityRelationMatrix m;
  m.row_type_ = row_type;
  m.col_type_ = col_type;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.cells_ = std::move(cells);
  m.total_mass_ = mass;
  m.alpha_ = alpha;
  return m;
}

void EntityRelationMatrix::set_alpha(double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw DataError("alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  alpha_ = alpha;
}

void MatrixSet::add(EntityRelationMatrix matrix) {
  const EntityRegistry& reg = *registry_;
  if (matrix.row_type() >= reg.type_count() || matrix.col_type() >= reg.type_count()) {
    throw DataError("matrix references a type missing from the registry");
  }
  if (matrix.n_rows() > reg.entity_count(matrix.row_type()) ||
      matrix.n_cols() > reg.entity_count(matrix.col_type())) {
    throw DataError("matrix dimensions exceed registered entity counts for types '" +
                    reg.type_name(matrix.row_type()) + "' x '" +
                    reg.type_name(matrix.col_type()) + "'");
  }
  matrices_.push_back(std::move(matrix));
}

}  // namespace relemb
