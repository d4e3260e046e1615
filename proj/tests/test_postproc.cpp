#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "relemb/errors.hpp"
#include "relemb/postproc.hpp"
#include "relemb/rng.hpp"
#include "relemb/trainer.hpp"

using namespace relemb;

namespace {

EmbeddingSet make_set(const std::vector<std::vector<std::vector<float>>>& per_type) {
  std::vector<std::size_t> sizes;
  for (const auto& t : per_type) sizes.push_back(t.size());
  const int dim = static_cast<int>(per_type[0][0].size());
  EmbeddingSet emb(sizes, dim);
  for (TypeId t = 0; t < per_type.size(); ++t) {
    for (EntityId i = 0; i < per_type[t].size(); ++i) {
      auto dst = emb.row(t, i);
      std::copy(per_type[t][i].begin(), per_type[t][i].end(), dst.begin());
    }
  }
  return emb;
}

}  // namespace

TEST_CASE("centering removes each type's mean") {
  EmbeddingSet emb = make_set({{{1, 1}, {3, 3}}});
  center_by_type(emb);
  CHECK(emb.row(0, 0)[0] == doctest::Approx(-1.0));
  CHECK(emb.row(0, 0)[1] == doctest::Approx(-1.0));
  CHECK(emb.row(0, 1)[0] == doctest::Approx(1.0));
  CHECK(emb.row(0, 1)[1] == doctest::Approx(1.0));
}

TEST_CASE("a single-entity type centers to the zero vector") {
  EmbeddingSet emb = make_set({{{2.5f, -1.5f, 4.0f}}});
  center_by_type(emb);
  for (float x : emb.row(0, 0)) CHECK(x == doctest::Approx(0.0));
}

TEST_CASE("post-centering type means are numerically zero") {
  EntityRegistry reg;
  const TypeId a = reg.add_type("a");
  const TypeId b = reg.add_type("b");
  for (int i = 0; i < 100; ++i) {
    reg.register_entity(a, "a" + std::to_string(i));
    reg.register_entity(b, "b" + std::to_string(i));
  }
  Rng rng(6);
  EmbeddingSet emb = init_embeddings(reg, 12, rng);
  // Push the clouds away from the origin.
  for (TypeId t : {a, b}) {
    auto block = emb.type_block(t);
    for (auto& x : block) x += t == a ? 3.0f : -7.0f;
  }
  center_by_type(emb);

  for (TypeId t : {a, b}) {
    const std::vector<float> mean = type_mean(emb, t);
    double mean_norm = 0.0;
    for (float x : mean) mean_norm += static_cast<double>(x) * x;
    mean_norm = std::sqrt(mean_norm);

    double row_norm = 0.0;
    for (EntityId i = 0; i < emb.count(t); ++i) {
      double n = 0.0;
      for (float x : emb.row(t, i)) n += static_cast<double>(x) * x;
      row_norm += std::sqrt(n);
    }
    row_norm /= static_cast<double>(emb.count(t));
    CHECK(mean_norm < 1e-6 * row_norm);
  }
}

TEST_CASE("centering preserves within-type distances") {
  EntityRegistry reg;
  const TypeId a = reg.add_type("a");
  for (int i = 0; i < 40; ++i) reg.register_entity(a, "a" + std::to_string(i));
  Rng rng(41);
  EmbeddingSet emb = init_embeddings(reg, 10, rng);

  const auto before = pairwise_distances(emb, {a});
  center_by_type(emb);
  const auto after = pairwise_distances(emb, {a});
  for (std::size_t i = 0; i < before.size(); ++i) {
    for (std::size_t j = 0; j < before.size(); ++j) {
      CHECK(std::fabs(before[i][j] - after[i][j]) < 1e-6);
    }
  }
}

TEST_CASE("pairwise distance closed forms and metric axioms") {
  SUBCASE("identical embeddings give the zero matrix") {
    EmbeddingSet emb = make_set({{{1, 2}, {1, 2}, {1, 2}}});
    const auto d = pairwise_distances(emb, {0});
    for (const auto& row : d) {
      for (double x : row) CHECK(x == doctest::Approx(0.0));
    }
  }

  SUBCASE("3-4-5 triangle") {
    EmbeddingSet emb = make_set({{{0, 0}, {3, 4}}});
    const auto d = pairwise_distances(emb, {0});
    CHECK(d[0][1] == doctest::Approx(5.0));
    CHECK(d[1][0] == doctest::Approx(5.0));
    CHECK(d[0][0] == 0.0);
  }

  SUBCASE("symmetry, zero diagonal and the triangle inequality") {
    EntityRegistry reg;
    const TypeId a = reg.add_type("a");
    const TypeId b = reg.add_type("b");
    for (int i = 0; i < 15; ++i) reg.register_entity(a, "a" + std::to_string(i));
    for (int i = 0; i < 10; ++i) reg.register_entity(b, "b" + std::to_string(i));
    Rng rng(8);
    EmbeddingSet emb = init_embeddings(reg, 6, rng);

    const auto d = pairwise_distances(emb, {a, b});
    REQUIRE(d.size() == 25);
    for (std::size_t i = 0; i < d.size(); ++i) {
      CHECK(d[i][i] == 0.0);
      for (std::size_t j = 0; j < d.size(); ++j) {
        CHECK(d[i][j] == d[j][i]);
        for (std::size_t k = 0; k < d.size(); ++k) {
          CHECK(d[i][j] <= d[i][k] + d[k][j] + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("block layout follows the type list order") {
  EmbeddingSet emb = make_set({{{0, 0}}, {{3, 4}}});
  const auto d = pairwise_distances(emb, {1, 0});
  REQUIRE(d.size() == 2);
  CHECK(d[0][1] == doctest::Approx(5.0));
}

TEST_CASE("nearest neighbors ranks by cosine with id tie-breaks") {
  EmbeddingSet emb = make_set({{{1, 0}, {0.9f, 0.1f}, {0, 1}, {-1, 0}, {1, 0}}});

  SUBCASE("an exact match comes first with score 1") {
    const std::vector<float> query{1, 0};
    const auto top = nearest_neighbors(emb, query, 0, 3);
    REQUIRE(top.size() == 3);
    CHECK(top[0].entity == 0);  // tie with entity 4 broken by id
    CHECK(top[0].score == doctest::Approx(1.0));
    CHECK(top[1].entity == 4);
  }

  SUBCASE("excluding the query entity") {
    const auto top = nearest_neighbors(emb, emb.row(0, 0), 0, 2, /*exclude=*/0);
    CHECK(top[0].entity == 4);
  }

  SUBCASE("k beyond the type size returns the full ranking") {
    const std::vector<float> query{0, 1};
    const auto top = nearest_neighbors(emb, query, 0, 100);
    CHECK(top.size() == 5);
  }

  SUBCASE("zero query vector is rejected") {
    const std::vector<float> query{0, 0};
    CHECK_THROWS_AS(nearest_neighbors(emb, query, 0, 3), DataError);
  }
}

TEST_CASE("neighbor ranking equals a brute-force sort") {
  EntityRegistry reg;
  const TypeId t = reg.add_type("w");
  for (int i = 0; i < 10; ++i) reg.register_entity(t, "w" + std::to_string(i));
  Rng rng(3);
  EmbeddingSet emb = init_embeddings(reg, 5, rng);
  std::vector<float> query(5);
  for (auto& x : query) x = static_cast<float>(rng.next_range(-1.0, 1.0));

  const auto got = nearest_neighbors(emb, query, t, 10);

  // Oracle: exhaustive cosine computation in double.
  std::vector<std::pair<double, EntityId>> oracle;
  double qn = 0.0;
  for (float x : query) qn += static_cast<double>(x) * x;
  for (EntityId i = 0; i < 10; ++i) {
    double dot = 0.0, vn = 0.0;
    for (int j = 0; j < 5; ++j) {
      dot += static_cast<double>(query[j]) * emb.row(t, i)[j];
      vn += static_cast<double>(emb.row(t, i)[j]) * emb.row(t, i)[j];
    }
    oracle.push_back({dot / std::sqrt(qn * vn), i});
  }
  std::sort(oracle.begin(), oracle.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  REQUIRE(got.size() == oracle.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].entity == oracle[i].second);
    CHECK(got[i].score == doctest::Approx(oracle[i].first).epsilon(1e-9));
  }
}

TEST_CASE("pmi closed forms and the brute-force oracle") {
  SUBCASE("2x2 identity counts give ln 2 on the diagonal") {
    auto m = EntityRelationMatrix::build(0, 1, 2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
    CHECK(pmi(m, 0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  SUBCASE("rank-one matrices have zero pmi everywhere") {
    // Outer product of (1,2) and (3,1).
    auto m = EntityRelationMatrix::build(
        0, 1, 2, 2, {{0, 0, 3.0}, {0, 1, 1.0}, {1, 0, 6.0}, {1, 1, 2.0}});
    for (EntityId i = 0; i < 2; ++i) {
      for (EntityId j = 0; j < 2; ++j) {
        CHECK(pmi(m, i, j) == doctest::Approx(0.0).epsilon(1e-12));
      }
    }
  }

  SUBCASE("zero cells are signaled") {
    auto m = EntityRelationMatrix::build(0, 1, 2, 2, {{0, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(pmi(m, 0, 1), DataError);
  }

  SUBCASE("random 5x5 counts match explicit probability tables") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
      double table[5][5];
      std::vector<Triplet> triplets;
      double mass = 0.0;
      for (EntityId i = 0; i < 5; ++i) {
        for (EntityId j = 0; j < 5; ++j) {
          const double w = static_cast<double>(1 + rng.next_below(9));
          table[i][j] = w;
          mass += w;
          triplets.push_back({i, j, w});
        }
      }
      auto m = EntityRelationMatrix::build(0, 1, 5, 5, triplets);

      for (EntityId i = 0; i < 5; ++i) {
        for (EntityId j = 0; j < 5; ++j) {
          double row = 0.0, col = 0.0;
          for (int q = 0; q < 5; ++q) {
            row += table[i][q] / mass;
            col += table[q][j] / mass;
          }
          const double expected = std::log((table[i][j] / mass) / (row * col));
          CHECK(pmi(m, i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
      }
    }
  }
}
