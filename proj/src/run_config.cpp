#include "relemb/run_config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "relemb/errors.hpp"

namespace relemb {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

long parse_int(const std::string& text, const std::string& where) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(where + ": bad integer '" + text + "'");
  }
  return v;
}

double parse_float(const std::string& text, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DataError(where + ": bad number '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "1" || text == "true" || text == "on") return true;
  if (text == "0" || text == "false" || text == "off") return false;
  throw DataError(where + ": bad flag '" + text + "' (use 0/1)");
}

}  // namespace

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  return parse(in, path);
}

RunConfig RunConfig::parse(std::istream& in, const std::string& context) {
  RunConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = context + ":" + std::to_string(line_no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw DataError(where + ": empty value for '" + key + "'");

    if (key == "matrix") {
      std::istringstream parts(value);
      MatrixRef ref;
      parts >> ref.path;
      std::string extra;
      while (parts >> extra) {
        if (extra.rfind("alpha=", 0) == 0) {
          ref.alpha = parse_float(extra.substr(6), where);
        } else {
          throw DataError(where + ": unexpected token '" + extra + "'");
        }
      }
      cfg.matrices.push_back(std::move(ref));
    } else if (key == "vocab") {
      cfg.vocab = value;
    } else if (key == "dim") {
      cfg.train.dim = static_cast<int>(parse_int(value, where));
    } else if (key == "n_iter") {
      cfg.train.n_iter = static_cast<int>(parse_int(value, where));
    } else if (key == "n_neg") {
      cfg.train.n_neg = static_cast<int>(parse_int(value, where));
    } else if (key == "eta") {
      cfg.train.eta = parse_float(value, where);
    } else if (key == "batch_size") {
      cfg.train.batch_size = static_cast<int>(parse_int(value, where));
    } else if (key == "seed") {
      cfg.train.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "workers") {
      cfg.train.workers = static_cast<int>(parse_int(value, where));
    } else if (key == "sampling") {
      if (value == "independent") {
        cfg.train.sampling = SamplingMode::kIndependent;
      } else if (value == "global") {
        cfg.train.sampling = SamplingMode::kGlobal;
      } else {
        throw DataError(where + ": sampling must be 'independent' or 'global'");
      }
    } else if (key == "lr_decay") {
      cfg.train.lr_decay = parse_bool(value, where);
    } else if (key == "exclude_positive") {
      cfg.train.exclude_positive = parse_bool(value, where);
    } else if (key == "smoothed_negatives") {
      cfg.train.smoothed_negatives = parse_bool(value, where);
    } else if (key == "probe_pairs") {
      cfg.train.probe_pairs = static_cast<int>(parse_int(value, where));
    } else if (key == "checkpoint_every") {
      cfg.checkpoint_every = static_cast<int>(parse_int(value, where));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else {
      throw DataError(where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

void RunConfig::echo(std::ostream& out) const {
  out << std::setprecision(17);
  for (const MatrixRef& m : matrices) {
    out << "matrix = " << m.path;
    if (m.alpha) out << " alpha=" << *m.alpha;
    out << '\n';
  }
  if (vocab) out << "vocab = " << *vocab << '\n';
  out << "dim = " << train.dim << '\n';
  out << "n_iter = " << train.n_iter << '\n';
  out << "n_neg = " << train.n_neg << '\n';
  out << "eta = " << train.eta << '\n';
  out << "batch_size = " << train.batch_size << '\n';
  out << "seed = " << train.seed << '\n';
  out << "workers = " << train.workers << '\n';
  out << "sampling = "
      << (train.sampling == SamplingMode::kGlobal ? "global" : "independent") << '\n';
  out << "lr_decay = " << (train.lr_decay ? 1 : 0) << '\n';
  out << "exclude_positive = " << (train.exclude_positive ? 1 : 0) << '\n';
  out << "smoothed_negatives = " << (train.smoothed_negatives ? 1 : 0) << '\n';
  out << "probe_pairs = " << train.probe_pairs << '\n';
  out << "checkpoint_every = " << checkpoint_every << '\n';
  out << "out = " << out_dir << '\n';
}

void RunConfig::validate() const {
  train.validate();
  if (matrices.empty()) throw DataError("config lists no matrices");
  for (const MatrixRef& m : matrices) {
    if (!std::filesystem::exists(m.path)) {
      throw DataError("matrix file '" + m.path + "' does not exist");
    }
    if (m.alpha && (*m.alpha < 0.0 || *m.alpha > 1.0)) {
      throw DataError("alpha for '" + m.path + "' must lie in [0,1]");
    }
  }
  if (vocab && !std::filesystem::exists(*vocab)) {
    throw DataError("vocab file '" + *vocab + "' does not exist");
  }
}

}  // namespace relemb
