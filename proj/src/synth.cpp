#include "relemb/synth.hpp"

#include <unordered_map>

#include "relemb/errors.hpp"

namespace relemb::synth {

EntityRelationMatrix block_matrix(const BlockSpec& spec, EntityRegistry& registry) {
  if (spec.n_rows == 0 || spec.n_cols == 0) {
    throw DataError("block spec has an empty shape");
  }
  const TypeId tr = registry.add_type_auto(spec.row_type);
  const TypeId tc = registry.add_type_auto(spec.col_type);
  for (std::uint32_t i = 0; i < spec.n_rows; ++i) {
    registry.register_entity(tr, spec.row_type + std::to_string(i));
  }
  for (std::uint32_t j = 0; j < spec.n_cols; ++j) {
    registry.register_entity(tc, spec.col_type + std::to_string(j));
  }

  std::unordered_map<std::uint64_t, double> fill;
  for (const BlockFill& b : spec.blocks) {
    if (b.row_begin >= b.row_end || b.col_begin >= b.col_end ||
        b.row_end > spec.n_rows || b.col_end > spec.n_cols) {
      throw DataError("block [" + std::to_string(b.row_begin) + "," +
                      std::to_string(b.row_end) + ")x[" + std::to_string(b.col_begin) +
                      "," + std::to_string(b.col_end) + ") inconsistent with " +
                      std::to_string(spec.n_rows) + "x" + std::to_string(spec.n_cols) +
                      " shape");
    }
    for (std::uint32_t i = b.row_begin; i < b.row_end; ++i) {
      for (std::uint32_t j = b.col_begin; j < b.col_end; ++j) {
        fill[(static_cast<std::uint64_t>(i) << 32) | j] += b.value;
      }
    }
  }

  std::vector<Triplet> triplets;
  triplets.reserve(fill.size());
  for (const auto& [key, w] : fill) {
    triplets.push_back({static_cast<EntityId>(key >> 32),
                        static_cast<EntityId>(key & 0xffffffffu), w});
  }
  return EntityRelationMatrix::build(tr, tc, spec.n_rows, spec.n_cols,
                                     std::move(triplets), spec.alpha);
}

EntityRelationMatrix diag_ones_matrix(EntityRegistry& registry,
                                      const std::string& row_type,
                                      const std::string& col_type, int n_blocks) {
  constexpr std::uint32_t kSize = 20;
  if (n_blocks < 1 || kSize % n_blocks != 0) {
    throw DataError("n_blocks must divide 20");
  }
  const std::uint32_t block = kSize / static_cast<std::uint32_t>(n_blocks);
  BlockSpec spec{row_type, col_type, kSize, kSize, {}, 1.0};
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(n_blocks); ++b) {
    spec.blocks.push_back({b * block, (b + 1) * block, b * block, (b + 1) * block, 1.0});
  }
  return block_matrix(spec, registry);
}

EntityRelationMatrix center_corner_matrix(EntityRegistry& registry,
                                          const std::string& row_type,
                                          const std::string& col_type) {
  BlockSpec spec{row_type, col_type, 20, 20, {}, 1.0};
  spec.blocks.push_back({5, 15, 5, 15, 0.1});   // center 10x10
  spec.blocks.push_back({0, 5, 0, 5, 0.1});     // corners 5x5
  spec.blocks.push_back({0, 5, 15, 20, 0.1});
  spec.blocks.push_back({15, 20, 0, 5, 0.1});
  spec.blocks.push_back({15, 20, 15, 20, 0.1});
  return block_matrix(spec, registry);
}

std::vector<int> block_labels(int n_blocks) {
  std::vector<int> labels(20);
  const int block = 20 / n_blocks;
  for (int i = 0; i < 20; ++i) labels[i] = i / block;
  return labels;
}

std::vector<int> center_corner_labels() {
  std::vector<int> labels(20);
  for (int i = 0; i < 20; ++i) labels[i] = (i >= 5 && i < 15) ? 1 : 0;
  return labels;
}

}  // namespace relemb::synth
