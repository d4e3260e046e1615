#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relemb/trainer.hpp"

namespace relemb {

// Plain-text run configuration: one "key = value" per line, '#' comments.
// Matrix lines may carry a per-matrix alpha that overrides the file header:
//   matrix = path/to/ab.matrix alpha=0.5
struct RunConfig {
  struct MatrixRef {
    std::string path;
    std::optional<double> alpha;
  };

  std::vector<MatrixRef> matrices;
  std::optional<std::string> vocab;  // pre-registers entities, fixing id order
  TrainConfig train;
  int checkpoint_every = 0;
  std::string out_dir = "run";

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse(std::istream& in, const std::string& context);

  // Emits a config that parses back to this exact configuration.
  void echo(std::ostream& out) const;

  // Checks numeric invariants and that every referenced file exists.
  void validate() const;
};

}  // namespace relemb
