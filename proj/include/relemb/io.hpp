#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relemb/matrix.hpp"
#include "relemb/registry.hpp"
#include "relemb/trainer.hpp"

namespace relemb {

// Matrix file: header "#matrix <row_type> <col_type> alpha=<float>", then one
// "row_name<TAB>col_name<TAB>weight" line per cell. Weights round-trip
// bit-exactly. Type names ending in "-ctx" load as context aliases.
void write_matrix(const std::string& path, const EntityRelationMatrix& matrix,
                  const EntityRegistry& registry);
EntityRelationMatrix read_matrix(const std::string& path, EntityRegistry& registry);

// Vocabulary file: "<type><TAB><name>" per line; id = line order within type.
void write_vocab(const std::string& path, const EntityRegistry& registry);
void read_vocab(const std::string& path, EntityRegistry& registry);

// Embedding file: first line "<total_entities> <dim>", then one line per
// entity: "<type>:<name>" followed by dim floats at 9 significant digits.
void write_embeddings(const std::string& path, const EmbeddingSet& embeddings,
                      const EntityRegistry& registry);
std::pair<EntityRegistry, EmbeddingSet> read_embeddings(const std::string& path);

// Label file: "type:name<TAB>label" per line.
struct LabeledEntities {
  TypeId type = kInvalidType;
  std::vector<EntityId> entities;
  std::vector<int> labels;  // dense cluster ids in label-file order
  int k = 0;
};
void write_labels(const std::string& path, const EntityRegistry& registry, TypeId type,
                  const std::vector<int>& labels);
// Resolves names against the registry; unknown entities are collected and
// reported in one DataError with a count.
LabeledEntities read_labels(const std::string& path, const EntityRegistry& registry);

// Distance matrix export: header "#dist <type1>,<type2>,..." then dense rows.
void write_distances(const std::string& path,
                     const std::vector<std::vector<double>>& dist,
                     const std::vector<std::string>& type_names);

// Neighbor export: "query<TAB>rank<TAB>type:name<TAB>score" lines.
struct NeighborLine {
  std::string query;
  int rank;
  std::string entity;  // "type:name"
  double score;
};
void write_neighbors(const std::string& path, const std::vector<NeighborLine>& lines);

}  // namespace relemb
