// relemb: learn entity embeddings from sets of entity-relation matrices.
//
// Subcommands:
//   build   derive a matrix from tabular or text input
//   train   run the sampled-SGD loop over a matrix set
//   eval    k-means the embeddings and score against ground-truth labels
//   export  centered embeddings, distance matrices, neighbor lists
//   synth   emit the synthetic block tasks with label files
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "relemb/builders.hpp"
#include "relemb/errors.hpp"
#include "relemb/eval.hpp"
#include "relemb/io.hpp"
#include "relemb/postproc.hpp"
#include "relemb/run_config.hpp"
#include "relemb/synth.hpp"
#include "relemb/trainer.hpp"

namespace fs = std::filesystem;
using namespace relemb;

namespace {

struct BuildArgs {
  std::string recipe;
  std::string input;
  std::string out;
  std::string row, col, via;
  char delimiter = '\t';
  int window = 5;
  std::size_t vocab_size = 10000;
  double threshold = 0.0;
  int top_k = 100;
  double alpha = 1.0;
};

int cmd_build(const BuildArgs& args) {
  EntityRegistry registry;
  std::optional<EntityRelationMatrix> matrix;

  if (args.recipe == "cooccur") {
    if (args.row.empty() || args.col.empty()) {
      throw DataError("cooccur needs --row and --col attribute names");
    }
    const TabularSource src = read_tabular(args.input, args.delimiter);
    matrix = cooccurrence(src, args.row, args.col, registry);
  } else if (args.recipe == "tfidf") {
    EntityRelationMatrix counts = read_matrix(args.input, registry);
    matrix = tfidf_transform(counts);
  } else if (args.recipe == "coattend") {
    if (args.row.empty() || args.via.empty()) {
      throw DataError("coattend needs --row and --via attribute names");
    }
    const TabularSource src = read_tabular(args.input, args.delimiter);
    matrix = coattendance(src, args.row, args.via, registry);
  } else if (args.recipe == "similarity") {
    // Rows of the input matrix are the feature vectors.
    EntityRelationMatrix feats = read_matrix(args.input, registry);
    std::vector<std::vector<double>> features(
        feats.n_rows(), std::vector<double>(feats.n_cols(), 0.0));
    for (const Triplet& t : feats.cells()) features[t.row][t.col] = t.weight;
    matrix = similarity_matrix(features, registry.type_name(feats.row_type()),
                               registry, args.threshold, args.top_k);
  } else if (args.recipe == "wordcontext") {
    const Corpus corpus = read_corpus(args.input);
    matrix = word_context(corpus, args.window, args.vocab_size, registry);
  } else if (args.recipe == "bow") {
    const Corpus corpus = read_corpus(args.input);
    matrix = bow_matrix(corpus, args.vocab_size, registry);
  } else {
    throw DataError("unknown recipe '" + args.recipe + "'");
  }

  matrix->set_alpha(args.alpha);
  write_matrix(args.out, *matrix, registry);
  std::cout << args.out << ": " << matrix->nnz() << " cells, total mass "
            << matrix->total_mass() << "\n";
  return 0;
}

int cmd_train(const std::string& config_path) {
  RunConfig cfg = RunConfig::parse_file(config_path);
  cfg.validate();

  EntityRegistry registry;
  if (cfg.vocab) read_vocab(*cfg.vocab, registry);
  std::vector<EntityRelationMatrix> loaded;
  for (const RunConfig::MatrixRef& ref : cfg.matrices) {
    EntityRelationMatrix m = read_matrix(ref.path, registry);
    if (ref.alpha) m.set_alpha(*ref.alpha);
    loaded.push_back(std::move(m));
  }
  MatrixSet set(registry);
  for (auto& m : loaded) set.add(std::move(m));

  fs::create_directories(cfg.out_dir);
  {
    std::ofstream echo(fs::path(cfg.out_dir) / "effective.cfg");
    cfg.echo(echo);
  }

  std::ofstream probe_log(fs::path(cfg.out_dir) / "probe.log");
  TrainHooks hooks;
  hooks.on_probe = [&](const TrainProgress& p) {
    probe_log << p.iteration << '\t' << p.probe_loss << '\n';
    std::cout << "iter " << p.iteration << "/" << p.total << " probe-loss "
              << p.probe_loss << "\n";
  };
  hooks.checkpoint_every = cfg.checkpoint_every;
  hooks.on_checkpoint = [&](int iter, const EmbeddingSet& emb) {
    const fs::path path =
        fs::path(cfg.out_dir) / ("checkpoint_" + std::to_string(iter) + ".txt");
    write_embeddings(path.string(), emb, registry);
  };

  EmbeddingSet emb = train(set, cfg.train, &hooks);

  const fs::path emb_path = fs::path(cfg.out_dir) / "embeddings.txt";
  write_embeddings(emb_path.string(), emb, registry);
  write_vocab((fs::path(cfg.out_dir) / "vocab.txt").string(), registry);
  std::cout << "wrote " << emb_path.string() << "\n";
  return 0;
}

int cmd_eval(const std::string& emb_path, const std::string& labels_path, int k,
             int n_init, std::uint64_t seed) {
  auto [registry, emb] = read_embeddings(emb_path);
  const LabeledEntities truth = read_labels(labels_path, registry);

  const int dim = emb.dim();
  std::vector<float> data;
  data.reserve(truth.entities.size() * dim);
  for (EntityId id : truth.entities) {
    auto v = emb.row(truth.type, id);
    data.insert(data.end(), v.begin(), v.end());
  }

  const int clusters = k > 0 ? k : truth.k;
  const Partition pred =
      kmeans(data, truth.entities.size(), dim, clusters, n_init, seed);
  const Partition gold{truth.labels, truth.k};

  std::cout << "nmi=" << nmi(pred, gold) << "\n"
            << "ari=" << ari(pred, gold) << "\n"
            << "acc=" << acc(pred, gold) << "\n";
  return 0;
}

struct ExportArgs {
  std::string embeddings;
  std::string out;
  bool center = false;
  bool drop_context = false;
  std::string dist_types;   // comma-separated
  std::string target_type;  // neighbor search
  std::vector<std::string> queries;
  std::size_t k = 50;
};

int cmd_export(const ExportArgs& args) {
  auto [registry, emb] = read_embeddings(args.embeddings);
  if (args.center) center_by_type(emb);

  if (!args.dist_types.empty()) {
    std::vector<TypeId> types;
    std::vector<std::string> names;
    std::istringstream list(args.dist_types);
    std::string name;
    while (std::getline(list, name, ',')) {
      types.push_back(registry.type_id(name));
      names.push_back(name);
    }
    write_distances(args.out, pairwise_distances(emb, types), names);
    return 0;
  }

  if (!args.target_type.empty()) {
    const TypeId target = registry.type_id(args.target_type);
    std::vector<NeighborLine> lines;
    for (const std::string& query : args.queries) {
      const auto colon = query.find(':');
      if (colon == std::string::npos) {
        throw DataError("query must be type:name, got '" + query + "'");
      }
      const TypeId qt = registry.type_id(query.substr(0, colon));
      const auto qid = registry.find_entity(qt, query.substr(colon + 1));
      if (!qid) throw DataError("unknown query entity '" + query + "'");
      const std::int64_t exclude =
          qt == target ? static_cast<std::int64_t>(*qid) : -1;
      const auto neighbors =
          nearest_neighbors(emb, emb.row(qt, *qid), target, args.k, exclude);
      for (std::size_t r = 0; r < neighbors.size(); ++r) {
        lines.push_back({query, static_cast<int>(r + 1),
                         args.target_type + ":" +
                             registry.entity_name(target, neighbors[r].entity),
                         neighbors[r].score});
      }
    }
    write_neighbors(args.out, lines);
    return 0;
  }

  // Plain (optionally centered) embedding export.
  if (args.drop_context) {
    EntityRegistry kept;
    std::vector<TypeId> kept_ids;
    for (TypeId t = 0; t < registry.type_count(); ++t) {
      if (registry.alias_target(t)) continue;
      const TypeId nt = kept.add_type(registry.type_name(t));
      for (const std::string& entity : registry.entity_names(t)) {
        kept.register_entity(nt, entity);
      }
      kept_ids.push_back(t);
    }
    EmbeddingSet out(kept, emb.dim());
    for (TypeId nt = 0; nt < kept_ids.size(); ++nt) {
      const TypeId t = kept_ids[nt];
      for (EntityId i = 0; i < registry.entity_count(t); ++i) {
        auto src = emb.row(t, i);
        auto dst = out.row(nt, i);
        std::copy(src.begin(), src.end(), dst.begin());
      }
    }
    write_embeddings(args.out, out, kept);
  } else {
    write_embeddings(args.out, emb, registry);
  }
  return 0;
}

int cmd_synth(const std::string& preset, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  EntityRegistry registry;

  if (preset == "two-source") {
    const auto ab = synth::diag_ones_matrix(registry, "A", "B", 2);
    const auto ac = synth::center_corner_matrix(registry, "A", "C");
    write_matrix((out / "ab.matrix").string(), ab, registry);
    write_matrix((out / "ac.matrix").string(), ac, registry);
    const TypeId ta = registry.type_id("A");
    write_labels((out / "a_4way.labels").string(), registry, ta, synth::block_labels(4));
    write_labels((out / "a_ab2way.labels").string(), registry, ta,
                 synth::block_labels(2));
    write_labels((out / "a_ac2way.labels").string(), registry, ta,
                 synth::center_corner_labels());
  } else if (preset == "four-block") {
    const auto ab = synth::diag_ones_matrix(registry, "A", "B", 4);
    write_matrix((out / "ab.matrix").string(), ab, registry);
    write_labels((out / "a_4way.labels").string(), registry, registry.type_id("A"),
                 synth::block_labels(4));
    write_labels((out / "b_4way.labels").string(), registry, registry.type_id("B"),
                 synth::block_labels(4));
  } else {
    throw DataError("unknown preset '" + preset + "' (two-source, four-block)");
  }
  write_vocab((out / "vocab.txt").string(), registry);
  std::cout << "wrote " << preset << " task to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding learning over entity-relation matrix sets"};
  app.require_subcommand(1);

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Derive an entity-relation matrix");
  build->add_option("recipe", build_args.recipe,
                    "cooccur | tfidf | coattend | similarity | wordcontext | bow")
      ->required();
  build->add_option("input", build_args.input, "input file")->required();
  build->add_option("--out", build_args.out, "output matrix file")->required();
  build->add_option("--row", build_args.row, "row attribute");
  build->add_option("--col", build_args.col, "column attribute");
  build->add_option("--via", build_args.via, "attendance attribute");
  build->add_option("--delim", build_args.delimiter, "field delimiter");
  build->add_option("--window", build_args.window, "sliding window size");
  build->add_option("--vocab-size", build_args.vocab_size, "vocabulary cutoff");
  build->add_option("--threshold", build_args.threshold, "similarity threshold");
  build->add_option("--top-k", build_args.top_k, "similarity row sparsification");
  build->add_option("--alpha", build_args.alpha, "matrix update weight");

  std::string config_path;
  CLI::App* train = app.add_subcommand("train", "Learn embeddings from a config");
  train->add_option("--config", config_path, "run configuration file")->required();

  std::string emb_path, labels_path;
  int eval_k = 0, eval_n_init = 10;
  std::uint64_t eval_seed = 1;
  CLI::App* eval = app.add_subcommand("eval", "Cluster embeddings and score");
  eval->add_option("--embeddings", emb_path, "embedding file")->required();
  eval->add_option("--labels", labels_path, "ground-truth label file")->required();
  eval->add_option("--k", eval_k, "cluster count (default: label count)");
  eval->add_option("--n-init", eval_n_init, "k-means restarts");
  eval->add_option("--seed", eval_seed, "k-means seed");

  ExportArgs export_args;
  CLI::App* exp = app.add_subcommand("export", "Export embeddings or derived views");
  exp->add_option("--embeddings", export_args.embeddings, "embedding file")->required();
  exp->add_option("--out", export_args.out, "output file")->required();
  exp->add_flag("--center", export_args.center, "remove each type's mean first");
  exp->add_flag("--drop-context", export_args.drop_context,
                "omit context-alias types from embedding export");
  exp->add_option("--dist", export_args.dist_types, "types for a distance matrix");
  exp->add_option("--neighbors", export_args.target_type, "target type for retrieval");
  exp->add_option("--query", export_args.queries, "query entity type:name");
  exp->add_option("--k", export_args.k, "neighbors per query");

  std::string preset, synth_out = "synth";
  CLI::App* synth_cmd = app.add_subcommand("synth", "Emit a synthetic block task");
  synth_cmd->add_option("preset", preset, "two-source | four-block")->required();
  synth_cmd->add_option("--out", synth_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build) return cmd_build(build_args);
    if (*train) return cmd_train(config_path);
    if (*eval) return cmd_eval(emb_path, labels_path, eval_k, eval_n_init, eval_seed);
    if (*exp) return cmd_export(export_args);
    if (*synth_cmd) return cmd_synth(preset, synth_out);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
