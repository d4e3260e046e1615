#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "relemb/errors.hpp"
#include "relemb/io.hpp"
#include "relemb/matrix.hpp"
#include "relemb/rng.hpp"
#include "relemb/synth.hpp"

using namespace relemb;

namespace {

EntityRegistry two_types(int n_rows, int n_cols) {
  EntityRegistry reg;
  const TypeId a = reg.add_type("A");
  const TypeId b = reg.add_type("B");
  for (int i = 0; i < n_rows; ++i) reg.register_entity(a, "A" + std::to_string(i));
  for (int j = 0; j < n_cols; ++j) reg.register_entity(b, "B" + std::to_string(j));
  return reg;
}

}  // namespace

TEST_CASE("duplicate cells sum, zero weights drop") {
  auto m = EntityRelationMatrix::build(0, 1, 2, 2, {{0, 0, 1.0}, {0, 0, 1.0}});
  CHECK(m.nnz() == 1);
  CHECK(m.cells()[0].weight == 2.0);
  CHECK(m.total_mass() == 2.0);

  auto z = EntityRelationMatrix::build(0, 1, 2, 2, {{0, 1, 0.5}, {1, 0, 0.0}});
  CHECK(z.nnz() == 1);
  CHECK(z.cells()[0].row == 0);
  CHECK(z.cells()[0].col == 1);
  CHECK(z.total_mass() == 0.5);
}

TEST_CASE("negative weights and empty matrices are rejected") {
  CHECK_THROWS_WITH_AS(
      (EntityRelationMatrix::build(0, 1, 1, 1, {{0, 0, -1.0}})),
      doctest::Contains("(0,0)"), DataError);
  CHECK_THROWS_AS((EntityRelationMatrix::build(0, 1, 2, 2, {{0, 0, 0.0}})), DataError);
  CHECK_THROWS_AS((EntityRelationMatrix::build(0, 1, 1, 1, {{0, 1, 1.0}})), DataError);
}

TEST_CASE("total mass is the exact sum of stored weights") {
  auto single = EntityRelationMatrix::build(0, 1, 1, 1, {{0, 0, 3.5}});
  CHECK(single.total_mass() == 3.5);

  // Four 5x5 all-ones diagonal blocks: 100 ones.
  EntityRegistry reg;
  auto blocks = synth::diag_ones_matrix(reg, "A", "B", 4);
  CHECK(blocks.total_mass() == doctest::Approx(100.0).epsilon(0));
  CHECK(blocks.nnz() == 100);
}

TEST_CASE("alpha is validated") {
  CHECK_THROWS_AS((EntityRelationMatrix::build(0, 1, 1, 1, {{0, 0, 1.0}}, 1.5)),
                  DataError);
  auto m = EntityRelationMatrix::build(0, 1, 1, 1, {{0, 0, 1.0}}, 0.5);
  CHECK(m.alpha() == 0.5);
  CHECK_THROWS_AS(m.set_alpha(-0.1), DataError);
}

TEST_CASE("matrix set validates types and dimensions") {
  EntityRegistry reg = two_types(3, 3);
  MatrixSet set(reg);
  set.add(EntityRelationMatrix::build(0, 1, 3, 3, {{0, 0, 1.0}}));
  CHECK(set.size() == 1);
  CHECK_THROWS_AS(set.add(EntityRelationMatrix::build(0, 7, 3, 3, {{0, 0, 1.0}})),
                  DataError);
  CHECK_THROWS_AS(set.add(EntityRelationMatrix::build(0, 1, 5, 3, {{4, 0, 1.0}})),
                  DataError);
}

TEST_CASE("matrix file round-trips bit-exactly") {
  EntityRegistry reg = two_types(30, 30);
  Rng rng(17);
  std::vector<Triplet> triplets;
  for (int i = 0; i < 120; ++i) {
    triplets.push_back({static_cast<EntityId>(rng.next_below(30)),
                        static_cast<EntityId>(rng.next_below(30)),
                        rng.next_double() * 10.0 + 1e-9});
  }
  auto m = EntityRelationMatrix::build(0, 1, 30, 30, triplets, 0.37);

  const std::string path =
      (std::filesystem::temp_directory_path() / "relemb_roundtrip.matrix").string();
  write_matrix(path, m, reg);

  EntityRegistry reg2 = two_types(30, 30);
  auto back = read_matrix(path, reg2);

  REQUIRE(back.nnz() == m.nnz());
  CHECK(back.alpha() == m.alpha());
  for (std::size_t i = 0; i < m.nnz(); ++i) {
    CHECK(back.cells()[i].row == m.cells()[i].row);
    CHECK(back.cells()[i].col == m.cells()[i].col);
    CHECK(back.cells()[i].weight == m.cells()[i].weight);  // bit-exact
  }

  // Independent recount over the serialized file.
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  double mass = 0.0;
  while (std::getline(in, line)) {
    const auto tab = line.rfind('\t');
    mass += std::stod(line.substr(tab + 1));
  }
  CHECK(mass == doctest::Approx(m.total_mass()).epsilon(1e-15));
  std::remove(path.c_str());
}
