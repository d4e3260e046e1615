#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relemb/matrix.hpp"
#include "relemb/registry.hpp"

namespace relemb::synth {

// Rectangular fill, half-open ranges.
struct BlockFill {
  std::uint32_t row_begin, row_end;
  std::uint32_t col_begin, col_end;
  double value;
};

struct BlockSpec {
  std::string row_type;
  std::string col_type;
  std::uint32_t n_rows = 0;
  std::uint32_t n_cols = 0;
  std::vector<BlockFill> blocks;  // overlaps sum
  double alpha = 1.0;
};

// Builds the block matrix and registers entities named <type><i> in id
// order. Throws DataError when a block falls outside the matrix shape.
EntityRelationMatrix block_matrix(const BlockSpec& spec, EntityRegistry& registry);

// 20x20 matrix whose diagonal carries `n_blocks` equal all-ones blocks.
// n_blocks = 2 gives two 10x10 blocks; n_blocks = 4 gives four 5x5 blocks.
EntityRelationMatrix diag_ones_matrix(EntityRegistry& registry,
                                      const std::string& row_type,
                                      const std::string& col_type, int n_blocks);

// 20x20 matrix with a center 10x10 block and four corner 5x5 blocks, all
// filled with 0.1.
EntityRelationMatrix center_corner_matrix(EntityRegistry& registry,
                                          const std::string& row_type,
                                          const std::string& col_type);

// 20 labels split into n_blocks equal contiguous groups.
std::vector<int> block_labels(int n_blocks);

// 20 labels grouping the corner rows {0-4, 15-19} vs the center rows {5-14}.
std::vector<int> center_corner_labels();

}  // namespace relemb::synth
