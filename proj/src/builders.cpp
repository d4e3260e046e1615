#include "relemb/builders.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "relemb/errors.hpp"

namespace relemb {

std::size_t TabularSource::attribute_index(const std::string& name) const {
  auto it = std::find(attributes.begin(), attributes.end(), name);
  if (it == attributes.end()) {
    throw DataError("unknown attribute '" + name + "'");
  }
  return static_cast<std::size_t>(it - attributes.begin());
}

TabularSource read_tabular(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tabular file '" + path + "'");

  auto split = [delimiter](const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = line.find(delimiter, start);
      if (pos == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    return fields;
  };

  TabularSource source;
  std::string line;
  if (!std::getline(in, line)) throw DataError("tabular file '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  source.attributes = split(line);

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line);
    if (fields.size() > source.attributes.size()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": more fields than header columns");
    }
    std::vector<std::optional<std::string>> row(source.attributes.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (!fields[i].empty()) row[i] = std::move(fields[i]);
    }
    source.rows.push_back(std::move(row));
  }
  return source;
}

EntityRelationMatrix cooccurrence(const TabularSource& source,
                                  const std::string& attr_a,
                                  const std::string& attr_b,
                                  EntityRegistry& registry) {
  if (attr_a == attr_b) {
    throw DataError("cooccurrence needs two distinct attributes; use coattendance "
                    "for same-type relationships");
  }
  const std::size_t ia = source.attribute_index(attr_a);
  const std::size_t ib = source.attribute_index(attr_b);
  const TypeId ta = registry.add_type(attr_a);
  const TypeId tb = registry.add_type(attr_b);

  // Register every value of each attribute, then count co-present pairs.
  for (const auto& row : source.rows) {
    if (row[ia]) registry.register_entity(ta, *row[ia]);
    if (row[ib]) registry.register_entity(tb, *row[ib]);
  }
  std::unordered_map<std::uint64_t, double> counts;
  for (const auto& row : source.rows) {
    if (!row[ia] || !row[ib]) continue;
    const EntityId a = *registry.find_entity(ta, *row[ia]);
    const EntityId b = *registry.find_entity(tb, *row[ib]);
    counts[(static_cast<std::uint64_t>(a) << 32) | b] += 1.0;
  }

  std::vector<Triplet> triplets;
  triplets.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    triplets.push_back({static_cast<EntityId>(key >> 32),
                        static_cast<EntityId>(key & 0xffffffffu), w});
  }
  return EntityRelationMatrix::build(
      ta, tb, static_cast<std::uint32_t>(registry.entity_count(ta)),
      static_cast<std::uint32_t>(registry.entity_count(tb)), std::move(triplets));
}

EntityRelationMatrix tfidf_transform(const EntityRelationMatrix& counts) {
  std::vector<std::uint32_t> df(counts.n_cols(), 0);
  for (const Triplet& t : counts.cells()) ++df[t.col];  // cells are unique per (row,col)

  const double n_rows = static_cast<double>(counts.n_rows());
  std::vector<Triplet> out;
  out.reserve(counts.nnz());
  for (const Triplet& t : counts.cells()) {
    const double idf = std::log(n_rows / static_cast<double>(df[t.col]));
    if (idf > 0.0) out.push_back({t.row, t.col, t.weight * idf});
  }
  if (out.empty()) {
    throw DataError("tf-idf dropped every column (all columns occur in every row)");
  }
  return EntityRelationMatrix::build(counts.row_type(), counts.col_type(),
                                     counts.n_rows(), counts.n_cols(), std::move(out),
                                     counts.alpha());
}

EntityRelationMatrix coattendance(const TabularSource& source,
                                  const std::string& attr_a,
                                  const std::string& via_attr,
                                  EntityRegistry& registry) {
  if (attr_a == via_attr) {
    throw DataError("coattendance needs a distinct via attribute");
  }
  const std::size_t ia = source.attribute_index(attr_a);
  const std::size_t iv = source.attribute_index(via_attr);
  const TypeId ta = registry.add_type(attr_a);
  const TypeId tc = registry.add_context_type(attr_a + "-ctx", ta);

  // Distinct (entity, via-value) attendances, grouped by via-value.
  std::unordered_map<std::string, std::vector<EntityId>> attendees;
  std::unordered_set<std::string> seen;
  for (const auto& row : source.rows) {
    if (row[ia]) {
      const EntityId a = registry.register_entity(ta, *row[ia]);
      registry.register_entity(tc, *row[ia]);
      if (row[iv]) {
        std::string key = *row[iv] + "\x1f" + *row[ia];
        if (seen.insert(std::move(key)).second) {
          attendees[*row[iv]].push_back(a);
        }
      }
    }
  }

  // Each shared via-value contributes one unit to every attending pair, which
  // sums to the intersection cardinality.
  std::unordered_map<std::uint64_t, double> inter;
  for (auto& [via, ids] : attendees) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        inter[(static_cast<std::uint64_t>(ids[i]) << 32) | ids[j]] += 1.0;
      }
    }
  }

  // Context-type ids can differ from the target ids when the alias type was
  // populated earlier; map columns by name.
  std::vector<EntityId> ctx_of(registry.entity_count(ta));
  for (EntityId a = 0; a < ctx_of.size(); ++a) {
    ctx_of[a] = *registry.find_entity(tc, registry.entity_name(ta, a));
  }

  std::vector<Triplet> triplets;
  triplets.reserve(inter.size() * 2);
  for (const auto& [key, w] : inter) {
    const auto a1 = static_cast<EntityId>(key >> 32);
    const auto a2 = static_cast<EntityId>(key & 0xffffffffu);
    triplets.push_back({a1, ctx_of[a2], w});
    triplets.push_back({a2, ctx_of[a1], w});
  }
  const auto n = static_cast<std::uint32_t>(registry.entity_count(ta));
  return EntityRelationMatrix::build(ta, tc, n,
                                     static_cast<std::uint32_t>(registry.entity_count(tc)),
                                     std::move(triplets));
}

EntityRelationMatrix similarity_matrix(const std::vector<std::vector<double>>& features,
                                       const std::string& type_name,
                                       EntityRegistry& registry, double threshold,
                                       int top_k) {
  const TypeId ta = registry.type_id(type_name);
  if (features.size() != registry.entity_count(ta)) {
    throw DataError("feature count does not match entities of type '" + type_name + "'");
  }
  const TypeId tc = registry.add_context_type(type_name + "-ctx", ta);
  std::vector<EntityId> ctx_of(features.size());
  for (EntityId i = 0; i < features.size(); ++i) {
    ctx_of[i] = registry.register_entity(tc, registry.entity_name(ta, i));
  }

  const std::size_t n = features.size();
  const std::size_t d = n > 0 ? features[0].size() : 0;
  std::vector<double> norm(n, 0.0);
  bool any_nonzero = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != d) {
      throw DataError("feature vectors must all have the same length");
    }
    double s = 0.0;
    for (double x : features[i]) s += x * x;
    norm[i] = std::sqrt(s);
    any_nonzero = any_nonzero || norm[i] > 0.0;
  }
  if (!any_nonzero) throw DataError("all feature vectors are zero");

  std::vector<Triplet> triplets;
  std::vector<Triplet> row_cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (norm[i] == 0.0) continue;
    row_cells.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || norm[j] == 0.0) continue;
      double cos = 0.0;
      for (std::size_t k = 0; k < d; ++k) cos += features[i][k] * features[j][k];
      cos /= norm[i] * norm[j];
      cos = std::max(cos, 0.0);
      if (cos > threshold) {
        row_cells.push_back({static_cast<EntityId>(i), ctx_of[j], cos});
      }
    }
    if (top_k > 0 && row_cells.size() > static_cast<std::size_t>(top_k)) {
      std::partial_sort(row_cells.begin(), row_cells.begin() + top_k, row_cells.end(),
                        [](const Triplet& a, const Triplet& b) {
                          return a.weight != b.weight ? a.weight > b.weight
                                                      : a.col < b.col;
                        });
      row_cells.resize(top_k);
    }
    triplets.insert(triplets.end(), row_cells.begin(), row_cells.end());
  }
  return EntityRelationMatrix::build(
      ta, tc, static_cast<std::uint32_t>(n),
      static_cast<std::uint32_t>(registry.entity_count(tc)), std::move(triplets));
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

Corpus read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file '" + path + "'");
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    corpus.push_back(tokenize(line));
  }
  if (corpus.empty()) throw DataError("corpus '" + path + "' is empty");
  return corpus;
}

std::vector<std::string> top_vocabulary(const Corpus& corpus, std::size_t vocab_size) {
  struct Stat {
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  std::size_t position = 0;
  for (const auto& doc : corpus) {
    for (const auto& token : doc) {
      auto [it, inserted] = stats.try_emplace(token);
      if (inserted) it->second.first = position;
      ++it->second.count;
      ++position;
    }
  }
  std::vector<std::pair<std::string, Stat>> items(stats.begin(), stats.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    return a.second.count != b.second.count ? a.second.count > b.second.count
                                            : a.second.first < b.second.first;
  });
  if (items.size() > vocab_size) items.resize(vocab_size);
  std::vector<std::string> vocab;
  vocab.reserve(items.size());
  for (auto& [token, stat] : items) vocab.push_back(std::move(token));
  return vocab;
}

EntityRelationMatrix word_context(const Corpus& corpus, int window,
                                  std::size_t vocab_size, EntityRegistry& registry) {
  if (window < 1) throw DataError("window must be >= 1");
  if (corpus.empty()) throw DataError("corpus is empty");

  const std::vector<std::string> vocab = top_vocabulary(corpus, vocab_size);
  const TypeId tw = registry.add_type("word");
  const TypeId tc = registry.add_context_type("word-ctx", tw);
  std::unordered_map<std::string, std::uint32_t> index;  // token -> vocab rank
  std::vector<EntityId> word_id(vocab.size());
  std::vector<EntityId> ctx_id(vocab.size());
  for (std::uint32_t v = 0; v < vocab.size(); ++v) {
    word_id[v] = registry.register_entity(tw, vocab[v]);
    ctx_id[v] = registry.register_entity(tc, vocab[v]);
    index.emplace(vocab[v], v);
  }

  constexpr std::uint32_t kOov = static_cast<std::uint32_t>(-1);
  std::unordered_map<std::uint64_t, double> counts;
  std::vector<std::uint32_t> ids;
  for (const auto& doc : corpus) {
    ids.clear();
    for (const auto& token : doc) {
      auto it = index.find(token);
      ids.push_back(it == index.end() ? kOov : it->second);
    }
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] == kOov) continue;
      const std::size_t stop = std::min(ids.size(), i + 1 + static_cast<std::size_t>(window));
      for (std::size_t j = i + 1; j < stop; ++j) {
        if (ids[j] == kOov) continue;
        counts[(static_cast<std::uint64_t>(word_id[ids[i]]) << 32) | ctx_id[ids[j]]] += 1.0;
        counts[(static_cast<std::uint64_t>(word_id[ids[j]]) << 32) | ctx_id[ids[i]]] += 1.0;
      }
    }
  }

  std::vector<Triplet> triplets;
  triplets.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    triplets.push_back({static_cast<EntityId>(key >> 32),
                        static_cast<EntityId>(key & 0xffffffffu), w});
  }
  return EntityRelationMatrix::build(
      tw, tc, static_cast<std::uint32_t>(registry.entity_count(tw)),
      static_cast<std::uint32_t>(registry.entity_count(tc)), std::move(triplets));
}

EntityRelationMatrix bow_matrix(const Corpus& corpus, std::size_t vocab_size,
                                EntityRegistry& registry) {
  if (corpus.empty()) throw DataError("corpus is empty");
  const std::vector<std::string> vocab = top_vocabulary(corpus, vocab_size);
  const TypeId td = registry.add_type("doc");
  const TypeId tw = registry.add_type("word");
  std::unordered_map<std::string, EntityId> index;
  for (const std::string& token : vocab) {
    index.emplace(token, registry.register_entity(tw, token));
  }

  std::unordered_map<std::uint64_t, double> counts;
  for (std::size_t doc = 0; doc < corpus.size(); ++doc) {
    const EntityId d = registry.register_entity(td, "doc" + std::to_string(doc));
    for (const auto& token : corpus[doc]) {
      auto it = index.find(token);
      if (it == index.end()) continue;
      counts[(static_cast<std::uint64_t>(d) << 32) | it->second] += 1.0;
    }
  }

  std::vector<Triplet> triplets;
  triplets.reserve(counts.size());
  for (const auto& [key, w] : counts) {
    triplets.push_back({static_cast<EntityId>(key >> 32),
                        static_cast<EntityId>(key & 0xffffffffu), w});
  }
  return EntityRelationMatrix::build(
      td, tw, static_cast<std::uint32_t>(registry.entity_count(td)),
      static_cast<std::uint32_t>(registry.entity_count(tw)), std::move(triplets));
}

}  // namespace relemb
