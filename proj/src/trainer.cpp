#include "relemb/trainer.hpp"

#include <cmath>
#include <mutex>
#include <optional>
#include <set>
#include <thread>

#include "relemb/alias_table.hpp"
#include "relemb/errors.hpp"
#include "relemb/sgd.hpp"

namespace relemb {

EmbeddingSet::EmbeddingSet(const EntityRegistry& registry, int dim) : dim_(dim) {
  data_.resize(registry.type_count());
  for (TypeId t = 0; t < registry.type_count(); ++t) {
    data_[t].assign(registry.entity_count(t) * static_cast<std::size_t>(dim), 0.0f);
  }
}

EmbeddingSet::EmbeddingSet(std::vector<std::size_t> type_sizes, int dim) : dim_(dim) {
  data_.resize(type_sizes.size());
  for (std::size_t t = 0; t < type_sizes.size(); ++t) {
    data_[t].assign(type_sizes[t] * static_cast<std::size_t>(dim), 0.0f);
  }
}

std::optional<EmbeddingSet::BadValue> EmbeddingSet::find_non_finite() const {
  for (TypeId t = 0; t < data_.size(); ++t) {
    const auto& block = data_[t];
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (!std::isfinite(block[i])) {
        return BadValue{t, static_cast<EntityId>(i / dim_)};
      }
    }
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (n_iter < 0) throw DataError("n_iter must be >= 0");
  if (n_neg < 0) throw DataError("n_neg must be >= 0");
  if (!(eta > 0.0)) throw DataError("eta must be > 0");
  if (dim < 1) throw DataError("dim must be >= 1");
  if (batch_size < 1) throw DataError("batch_size must be >= 1");
  if (workers < 1) throw DataError("workers must be >= 1");
}

EmbeddingSet init_embeddings(const EntityRegistry& registry, int dim, Rng& rng) {
  if (dim < 1) throw DataError("dim must be >= 1");
  EmbeddingSet emb(registry, dim);
  const float bound = 0.5f / static_cast<float>(dim);
  for (TypeId t = 0; t < registry.type_count(); ++t) {
    auto block = emb.type_block(t);
    for (float& x : block) {
      x = static_cast<float>(rng.next_range(-bound, bound));
    }
  }
  return emb;
}

namespace {

struct MatrixSampler {
  AliasTable table;
  NegativeSampler negatives;
  std::optional<AliasTable> smoothed;  // column-mass^0.75 sampler, when enabled
  TypeId row_type;
  TypeId col_type;
  float alpha;
};

AliasTable make_smoothed_table(const EntityRelationMatrix& m) {
  std::vector<double> col_mass(m.n_cols(), 0.0);
  for (const Triplet& t : m.cells()) col_mass[t.col] += t.weight;
  std::vector<std::pair<EntityId, EntityId>> cells;
  std::vector<double> weights;
  for (EntityId c = 0; c < m.n_cols(); ++c) {
    if (col_mass[c] > 0.0) {
      cells.emplace_back(c, c);
      weights.push_back(std::pow(col_mass[c], 0.75));
    }
  }
  return AliasTable(std::move(cells), weights);
}

std::vector<MatrixSampler> make_samplers(const MatrixSet& set, const TrainConfig& cfg) {
  const EntityRegistry& reg = set.registry();
  std::vector<MatrixSampler> samplers;
  samplers.reserve(set.size());
  for (const EntityRelationMatrix& m : set.matrices()) {
    const auto n_col_entities =
        static_cast<std::uint32_t>(reg.entity_count(m.col_type()));
    MatrixSampler s{AliasTable(m),
                    NegativeSampler(n_col_entities, cfg.exclude_positive),
                    std::nullopt,
                    m.row_type(),
                    m.col_type(),
                    static_cast<float>(m.alpha())};
    if (cfg.smoothed_negatives) s.smoothed = make_smoothed_table(m);
    samplers.push_back(std::move(s));
  }
  return samplers;
}

// Fixed set of (matrix, pair, negatives) used to track the loss across the
// run. Sampled once from a stream independent of the training stream.
struct ProbeSet {
  struct Item {
    std::uint32_t matrix;
    EntityId row, col;
    std::vector<EntityId> negs;
  };
  std::vector<Item> items;

  static ProbeSet make(const std::vector<MatrixSampler>& samplers,
                       const TrainConfig& cfg) {
    ProbeSet probe;
    Rng rng(cfg.seed ^ 0x70726f6265ULL);
    for (std::uint32_t m = 0; m < samplers.size(); ++m) {
      for (int i = 0; i < cfg.probe_pairs; ++i) {
        Item item;
        item.matrix = m;
        auto [p, q] = samplers[m].table.sample(rng);
        item.row = p;
        item.col = q;
        samplers[m].negatives.sample(cfg.n_neg, q, rng, item.negs);
        probe.items.push_back(std::move(item));
      }
    }
    return probe;
  }

  double mean_loss(const EmbeddingSet& emb,
                   const std::vector<MatrixSampler>& samplers) const {
    if (items.empty()) return 0.0;
    double total = 0.0;
    std::vector<std::span<const float>> negs;
    for (const Item& item : items) {
      const MatrixSampler& s = samplers[item.matrix];
      negs.clear();
      for (EntityId n : item.negs) negs.push_back(emb.row(s.col_type, n));
      total += pair_loss<float>(emb.row(s.row_type, item.row),
                                emb.row(s.col_type, item.col), negs);
    }
    return total / static_cast<double>(items.size());
  }
};

class Worker {
 public:
  Worker(EmbeddingSet& emb, const std::vector<MatrixSampler>& samplers,
         const GlobalAliasTable* global, const TrainConfig& cfg, std::uint64_t seed)
      : emb_(emb),
        samplers_(samplers),
        global_(global),
        cfg_(cfg),
        rng_(seed),
        delta_(cfg.dim, 0.0f) {
    neg_ids_.reserve(cfg.n_neg);
    neg_spans_.reserve(cfg.n_neg);
  }

  // Runs iterations [begin, end) stepping by `stride`.
  void run(int begin, int end, int stride) {
    for (int iter = begin; iter < end; iter += stride) {
      const float eta = effective_eta(iter);
      if (global_ != nullptr) {
        const std::size_t draws = cfg_.batch_size * samplers_.size();
        for (std::size_t b = 0; b < draws; ++b) {
          auto [m, p, q] = global_->sample(rng_);
          step(samplers_[m], p, q, eta, iter);
        }
      } else {
        for (const MatrixSampler& s : samplers_) {
          for (int b = 0; b < cfg_.batch_size; ++b) {
            auto [p, q] = s.table.sample(rng_);
            step(s, p, q, eta, iter);
          }
        }
      }
    }
  }

 private:
  float effective_eta(int iter) const {
    if (!cfg_.lr_decay || cfg_.n_iter <= 0) return static_cast<float>(cfg_.eta);
    const double frac = static_cast<double>(iter) / static_cast<double>(cfg_.n_iter);
    return static_cast<float>(cfg_.eta * (1.0 - 0.99 * frac));
  }

  void step(const MatrixSampler& s, EntityId p, EntityId q, float eta, int iter) {
    neg_ids_.clear();
    if (s.smoothed.has_value()) {
      for (int i = 0; i < cfg_.n_neg; ++i) {
        EntityId id = s.smoothed->sample(rng_).first;
        if (cfg_.exclude_positive) {
          while (id == q && s.smoothed->size() > 1) id = s.smoothed->sample(rng_).first;
        }
        neg_ids_.push_back(id);
      }
    } else {
      s.negatives.sample(cfg_.n_neg, q, rng_, neg_ids_);
    }
    neg_spans_.clear();
    for (EntityId n : neg_ids_) neg_spans_.push_back(emb_.row(s.col_type, n));

    const float dot_pq =
        update_pair<float>(emb_.row(s.row_type, p), emb_.row(s.col_type, q),
                           neg_spans_, eta, s.alpha, delta_);
    if (!std::isfinite(dot_pq)) {
      throw NumericError("non-finite embedding at iteration " + std::to_string(iter) +
                         " (sampled row entity id " + std::to_string(p) + ")");
    }
  }

  EmbeddingSet& emb_;
  const std::vector<MatrixSampler>& samplers_;
  const GlobalAliasTable* global_;
  const TrainConfig& cfg_;
  Rng rng_;
  std::vector<float> delta_;
  std::vector<EntityId> neg_ids_;
  std::vector<std::span<float>> neg_spans_;
};

void check_finite(const EmbeddingSet& emb, const EntityRegistry& reg, int iter) {
  if (auto bad = emb.find_non_finite()) {
    throw NumericError("non-finite embedding at iteration " + std::to_string(iter) +
                       " for entity " + reg.type_name(bad->type) + ":" +
                       reg.entity_name(bad->type, bad->entity));
  }
}

}  // namespace

void train_into(EmbeddingSet& emb, const MatrixSet& set, const TrainConfig& cfg,
                const TrainHooks* hooks) {
  cfg.validate();
  if (set.empty()) throw DataError("matrix set is empty");
  const EntityRegistry& reg = set.registry();
  if (emb.dim() != cfg.dim) throw DataError("embedding dim does not match config dim");

  std::vector<MatrixSampler> samplers = make_samplers(set, cfg);
  std::optional<GlobalAliasTable> global;
  if (cfg.sampling == SamplingMode::kGlobal) global.emplace(set);

  ProbeSet probe = ProbeSet::make(samplers, cfg);
  auto emit_probe = [&](int iter) {
    if (hooks != nullptr && hooks->on_probe) {
      hooks->on_probe(TrainProgress{iter, cfg.n_iter, probe.mean_loss(emb, samplers)});
    }
  };
  emit_probe(0);

  std::vector<Worker> workers;
  workers.reserve(cfg.workers);
  for (int w = 0; w < cfg.workers; ++w) {
    workers.emplace_back(emb, samplers, global ? &*global : nullptr, cfg,
                         cfg.seed + 0x9e3779b97f4a7c15ULL * (w + 1));
  }

  // Segment boundaries: the ten probe points plus every checkpoint multiple.
  std::set<int> probe_points;
  for (int k = 1; k <= 10; ++k) probe_points.insert(cfg.n_iter * k / 10);
  probe_points.erase(0);
  std::set<int> breakpoints = probe_points;
  breakpoints.insert(cfg.n_iter);
  const int every = hooks != nullptr ? hooks->checkpoint_every : 0;
  if (every > 0) {
    for (int i = every; i < cfg.n_iter; i += every) breakpoints.insert(i);
  }
  breakpoints.erase(0);

  // Within a segment workers share the iteration range round-robin
  // (lock-free updates, nondeterministic when workers > 1).
  int done = 0;
  for (int end : breakpoints) {
    if (cfg.workers == 1) {
      workers[0].run(done, end, 1);
    } else {
      std::vector<std::thread> pool;
      std::exception_ptr failure;
      std::mutex failure_mutex;
      for (int w = 0; w < cfg.workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            workers[w].run(done + w, end, cfg.workers);
          } catch (...) {
            std::scoped_lock lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      if (failure) std::rethrow_exception(failure);
    }
    done = end;
    check_finite(emb, reg, done);
    if (probe_points.count(done) > 0) emit_probe(done);
    if (every > 0 && hooks->on_checkpoint && done % every == 0 && done < cfg.n_iter) {
      hooks->on_checkpoint(done, emb);
    }
  }
  if (cfg.n_iter == 0) check_finite(emb, reg, 0);
}

EmbeddingSet train(const MatrixSet& set, const TrainConfig& cfg,
                   const TrainHooks* hooks) {
  cfg.validate();
  Rng rng(cfg.seed);
  EmbeddingSet emb = init_embeddings(set.registry(), cfg.dim, rng);
  train_into(emb, set, cfg, hooks);
  return emb;
}

}  // namespace relemb
