#include "relemb/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "relemb/errors.hpp"

namespace relemb {

namespace {

void require_clean_name(const std::string& name, const char* what) {
  if (name.find('\t') != std::string::npos || name.find('\n') != std::string::npos) {
    throw DataError(std::string(what) + " '" + name + "' contains a tab or newline");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return in;
}

double parse_double(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw DataError(where + ": bad number '" + text + "'");
  }
  return value;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

// "type:name" -> (type, name); splits on the first ':'.
std::pair<std::string, std::string> split_entity_ref(const std::string& ref,
                                                     const std::string& where) {
  const std::size_t pos = ref.find(':');
  if (pos == std::string::npos) {
    throw DataError(where + ": expected type:name, got '" + ref + "'");
  }
  return {ref.substr(0, pos), ref.substr(pos + 1)};
}

}  // namespace

void write_matrix(const std::string& path, const EntityRelationMatrix& m,
                  const EntityRegistry& reg) {
  std::ofstream out = open_out(path);
  const std::string& row_type = reg.type_name(m.row_type());
  const std::string& col_type = reg.type_name(m.col_type());
  require_clean_name(row_type, "type name");
  require_clean_name(col_type, "type name");

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", m.alpha());
  out << "#matrix " << row_type << ' ' << col_type << " alpha=" << buf << '\n';
  for (const Triplet& t : m.cells()) {
    const std::string& rn = reg.entity_name(m.row_type(), t.row);
    const std::string& cn = reg.entity_name(m.col_type(), t.col);
    require_clean_name(rn, "entity name");
    require_clean_name(cn, "entity name");
    std::snprintf(buf, sizeof(buf), "%.17g", t.weight);
    out << rn << '\t' << cn << '\t' << buf << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

EntityRelationMatrix read_matrix(const std::string& path, EntityRegistry& reg) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty matrix file");

  std::istringstream header(line);
  std::string tag, row_type, col_type, alpha_field;
  header >> tag >> row_type >> col_type >> alpha_field;
  if (tag != "#matrix" || row_type.empty() || col_type.empty() ||
      alpha_field.rfind("alpha=", 0) != 0) {
    throw DataError(path + ":1: bad header, expected '#matrix <row> <col> alpha=<v>'");
  }
  const double alpha = parse_double(alpha_field.substr(6), path + ":1");

  const TypeId tr = reg.add_type_auto(row_type);
  const TypeId tc = reg.add_type_auto(col_type);

  std::vector<Triplet> triplets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected row<TAB>col<TAB>weight");
    }
    const EntityId r = reg.register_entity(tr, fields[0]);
    const EntityId c = reg.register_entity(tc, fields[1]);
    const double w = parse_double(fields[2], path + ":" + std::to_string(line_no));
    if (w < 0.0) {
      throw DataError(path + ":" + std::to_string(line_no) + ": negative weight");
    }
    triplets.push_back({r, c, w});
  }
  return EntityRelationMatrix::build(
      tr, tc, static_cast<std::uint32_t>(reg.entity_count(tr)),
      static_cast<std::uint32_t>(reg.entity_count(tc)), std::move(triplets), alpha);
}

void write_vocab(const std::string& path, const EntityRegistry& reg) {
  std::ofstream out = open_out(path);
  for (TypeId t = 0; t < reg.type_count(); ++t) {
    require_clean_name(reg.type_name(t), "type name");
    for (const std::string& name : reg.entity_names(t)) {
      require_clean_name(name, "entity name");
      out << reg.type_name(t) << '\t' << name << '\n';
    }
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

void read_vocab(const std::string& path, EntityRegistry& reg) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected type<TAB>name");
    }
    reg.register_entity(reg.add_type_auto(fields[0]), fields[1]);
  }
}

void write_embeddings(const std::string& path, const EmbeddingSet& emb,
                      const EntityRegistry& reg) {
  std::ofstream out = open_out(path);
  std::size_t total = 0;
  for (TypeId t = 0; t < reg.type_count(); ++t) total += reg.entity_count(t);
  out << total << ' ' << emb.dim() << '\n';

  char buf[32];
  for (TypeId t = 0; t < reg.type_count(); ++t) {
    const std::string& type_name = reg.type_name(t);
    for (EntityId i = 0; i < reg.entity_count(t); ++i) {
      const std::string& name = reg.entity_name(t, i);
      if (name.find('"') != std::string::npos) {
        throw DataError("entity name '" + name + "' contains a quote");
      }
      out << '"' << type_name << ':' << name << '"';
      auto v = emb.row(t, i);
      for (int d = 0; d < emb.dim(); ++d) {
        std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v[d]));
        out << ' ' << buf;
      }
      out << '\n';
    }
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::pair<EntityRegistry, EmbeddingSet> read_embeddings(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty embedding file");
  std::istringstream header(line);
  std::size_t total = 0;
  int dim = 0;
  if (!(header >> total >> dim) || dim < 1) {
    throw DataError(path + ":1: bad header, expected '<total> <dim>'");
  }

  EntityRegistry reg;
  std::vector<std::pair<std::pair<TypeId, EntityId>, std::vector<float>>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line[0] != '"') throw DataError(where + ": expected quoted entity reference");
    const std::size_t close = line.find('"', 1);
    if (close == std::string::npos) throw DataError(where + ": unterminated quote");
    auto [type_name, name] = split_entity_ref(line.substr(1, close - 1), where);

    const TypeId t = reg.add_type_auto(type_name);
    const EntityId id = reg.register_entity(t, name);

    std::vector<float> values;
    values.reserve(dim);
    std::istringstream rest(line.substr(close + 1));
    double x = 0.0;
    while (rest >> x) values.push_back(static_cast<float>(x));
    if (static_cast<int>(values.size()) != dim) {
      throw DataError(where + ": expected " + std::to_string(dim) + " floats, got " +
                      std::to_string(values.size()));
    }
    rows.push_back({{t, id}, std::move(values)});
  }
  if (rows.size() != total) {
    throw DataError(path + ": header promises " + std::to_string(total) +
                    " entities, file has " + std::to_string(rows.size()));
  }

  EmbeddingSet emb(reg, dim);
  for (const auto& [key, values] : rows) {
    auto dst = emb.row(key.first, key.second);
    std::copy(values.begin(), values.end(), dst.begin());
  }
  return {std::move(reg), std::move(emb)};
}

void write_labels(const std::string& path, const EntityRegistry& reg, TypeId type,
                  const std::vector<int>& labels) {
  if (labels.size() != reg.entity_count(type)) {
    throw DataError("label count does not match entity count");
  }
  std::ofstream out = open_out(path);
  for (EntityId i = 0; i < labels.size(); ++i) {
    out << reg.type_name(type) << ':' << reg.entity_name(type, i) << '\t' << labels[i]
        << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

LabeledEntities read_labels(const std::string& path, const EntityRegistry& reg) {
  std::ifstream in = open_in(path);
  LabeledEntities result;
  std::map<std::string, int> label_ids;
  std::vector<std::string> unknown;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2) {
      throw DataError(where + ": expected type:name<TAB>label");
    }
    auto [type_name, name] = split_entity_ref(fields[0], where);
    if (!reg.has_type(type_name)) {
      unknown.push_back(fields[0]);
      continue;
    }
    const TypeId t = reg.type_id(type_name);
    if (result.type == kInvalidType) {
      result.type = t;
    } else if (result.type != t) {
      throw DataError(where + ": labels mix entity types");
    }
    const auto id = reg.find_entity(t, name);
    if (!id) {
      unknown.push_back(fields[0]);
      continue;
    }
    const auto [it, inserted] = label_ids.try_emplace(fields[1], result.k);
    if (inserted) ++result.k;
    result.entities.push_back(*id);
    result.labels.push_back(it->second);
  }
  if (!unknown.empty()) {
    std::string msg = path + ": " + std::to_string(unknown.size()) +
                      " labeled entities missing from the embeddings:";
    for (std::size_t i = 0; i < std::min<std::size_t>(unknown.size(), 5); ++i) {
      msg += " " + unknown[i];
    }
    if (unknown.size() > 5) msg += " ...";
    throw DataError(msg);
  }
  if (result.entities.empty()) throw DataError(path + ": no labels");
  return result;
}

void write_distances(const std::string& path,
                     const std::vector<std::vector<double>>& dist,
                     const std::vector<std::string>& type_names) {
  std::ofstream out = open_out(path);
  out << "#dist ";
  for (std::size_t i = 0; i < type_names.size(); ++i) {
    out << (i > 0 ? "," : "") << type_names[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : dist) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", row[j]);
      out << (j > 0 ? " " : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

void write_neighbors(const std::string& path, const std::vector<NeighborLine>& lines) {
  std::ofstream out = open_out(path);
  char buf[32];
  for (const NeighborLine& l : lines) {
    std::snprintf(buf, sizeof(buf), "%.9g", l.score);
    out << l.query << '\t' << l.rank << '\t' << l.entity << '\t' << buf << '\n';
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace relemb
