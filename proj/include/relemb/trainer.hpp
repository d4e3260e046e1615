#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relemb/matrix.hpp"
#include "relemb/registry.hpp"
#include "relemb/rng.hpp"

namespace relemb {

// Dense d-dimensional vector per entity, grouped by entity-type. Stored as
// one contiguous float block per type, row-major.
class EmbeddingSet {
 public:
  EmbeddingSet(const EntityRegistry& registry, int dim);
  EmbeddingSet(std::vector<std::size_t> type_sizes, int dim);

  int dim() const { return dim_; }
  std::size_t type_count() const { return data_.size(); }
  std::size_t count(TypeId type) const { return data_[type].size() / dim_; }

  std::span<float> row(TypeId type, EntityId id) {
    return {data_[type].data() + static_cast<std::size_t>(id) * dim_,
            static_cast<std::size_t>(dim_)};
  }
  std::span<const float> row(TypeId type, EntityId id) const {
    return {data_[type].data() + static_cast<std::size_t>(id) * dim_,
            static_cast<std::size_t>(dim_)};
  }

  std::span<float> type_block(TypeId type) { return data_[type]; }
  std::span<const float> type_block(TypeId type) const { return data_[type]; }

  // (type, entity) of the first non-finite component, if any.
  struct BadValue {
    TypeId type;
    EntityId entity;
  };
  std::optional<BadValue> find_non_finite() const;

 private:
  int dim_;
  std::vector<std::vector<float>> data_;
};

enum class SamplingMode {
  kIndependent,  // one batch per matrix per iteration, each matrix normalized alone
  kGlobal,       // one batch over the concatenation, normalized by the grand mass
};

// Hyperparameters of the training loop plus sampling options. Per-matrix
// alpha weights live on the matrices themselves.
struct TrainConfig {
  int n_iter = 1000;
  int n_neg = 5;
  double eta = 0.025;
  int dim = 100;
  int batch_size = 128;
  std::uint64_t seed = 1;
  int workers = 1;
  SamplingMode sampling = SamplingMode::kIndependent;
  bool lr_decay = false;             // linear decay to eta/100 over the run
  bool exclude_positive = false;     // resample negatives colliding with e_q
  bool smoothed_negatives = false;   // column-mass^0.75 instead of uniform
  int probe_pairs = 256;             // probe-set size per matrix

  void validate() const;  // throws DataError on violated invariants
};

struct TrainProgress {
  int iteration;       // iterations completed so far
  int total;           // configured n_iter
  double probe_loss;   // mean pair loss over the fixed probe set
};

struct TrainHooks {
  // Called after init (iteration 0) and after every 10% of iterations.
  std::function<void(const TrainProgress&)> on_probe;
  // Called every `checkpoint_every` iterations when positive.
  int checkpoint_every = 0;
  std::function<void(int iteration, const EmbeddingSet&)> on_checkpoint;
};

// Random init: each component i.i.d. uniform on [-0.5/dim, +0.5/dim].
EmbeddingSet init_embeddings(const EntityRegistry& registry, int dim, Rng& rng);

// Runs the sampled-SGD loop over the matrix set and returns the final
// embeddings. Throws NumericError (with iteration and entity) if a
// non-finite value appears.
EmbeddingSet train(const MatrixSet& set, const TrainConfig& config,
                   const TrainHooks* hooks = nullptr);

// Same, but starting from caller-provided embeddings (must match the
// registry and config.dim).
void train_into(EmbeddingSet& embeddings, const MatrixSet& set,
                const TrainConfig& config, const TrainHooks* hooks = nullptr);

}  // namespace relemb
