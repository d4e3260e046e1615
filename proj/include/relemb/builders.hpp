#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relemb/matrix.hpp"
#include "relemb/registry.hpp"

namespace relemb {

// Tabular input: records of attribute -> categorical value. Missing values
// are simply absent from the record and skipped by every recipe.
struct TabularSource {
  std::vector<std::string> attributes;
  // One entry per record; index aligned with `attributes`, nullopt = missing.
  std::vector<std::vector<std::optional<std::string>>> rows;

  std::size_t attribute_index(const std::string& name) const;  // throws DataError
};

// Reads a delimiter-separated file with a header row. Empty fields become
// missing values.
TabularSource read_tabular(const std::string& path, char delimiter = '\t');

// cell (a, b) = number of records where attr_a = a and attr_b = b.
// Registers row/column entities under types named after the attributes.
EntityRelationMatrix cooccurrence(const TabularSource& source,
                                  const std::string& attr_a,
                                  const std::string& attr_b,
                                  EntityRegistry& registry);

// cell (i, j) = M[i,j] * ln(n_rows / df_j); columns present in every row get
// idf 0 and are dropped.
EntityRelationMatrix tfidf_transform(const EntityRelationMatrix& counts);

// cell (a1, a2) = |via-values seen with a1  intersect  via-values seen with
// a2|, a1 != a2. Columns are registered under the context alias
// "<attr_a>-ctx" so the trainer treats the two sides as distinct types.
EntityRelationMatrix coattendance(const TabularSource& source,
                                  const std::string& attr_a,
                                  const std::string& via_attr,
                                  EntityRegistry& registry);

// cell (i, j) = cosine(f_i, f_j) for i != j when above `threshold`;
// optionally keeps only the top_k strongest entries per row. Negative
// cosines clamp to zero. Entities must already be registered under
// `type_name`; columns go to "<type_name>-ctx".
EntityRelationMatrix similarity_matrix(const std::vector<std::vector<double>>& features,
                                       const std::string& type_name,
                                       EntityRegistry& registry,
                                       double threshold = 0.0, int top_k = 100);

// Lowercases and splits on non-alphanumeric runs.
std::vector<std::string> tokenize(const std::string& text);

using Corpus = std::vector<std::vector<std::string>>;  // tokenized documents

// One document per line.
Corpus read_corpus(const std::string& path);

// The `vocab_size` most frequent tokens, ties broken by first occurrence.
std::vector<std::string> top_vocabulary(const Corpus& corpus, std::size_t vocab_size);

// cell (w, c) counts ordered target-context pairs within `window` inside a
// document. Both directions are emitted. Out-of-vocabulary tokens keep their
// positions but contribute no pairs. Types: "word" x "word-ctx".
EntityRelationMatrix word_context(const Corpus& corpus, int window,
                                  std::size_t vocab_size, EntityRegistry& registry);

// cell (doc, word) = term count restricted to the vocabulary.
// Types: "doc" x "word"; documents are named doc0, doc1, ...
EntityRelationMatrix bow_matrix(const Corpus& corpus, std::size_t vocab_size,
                                EntityRegistry& registry);

}  // namespace relemb
