#include <doctest.h>

#include <cmath>
#include <vector>

#include "relemb/rng.hpp"
#include "relemb/sgd.hpp"

using namespace relemb;

namespace {

using Vec = std::vector<double>;

double loss_of(const Vec& vp, const Vec& vq, const std::vector<Vec>& negs) {
  std::vector<std::span<const double>> views(negs.begin(), negs.end());
  return pair_loss<double>(vp, vq, views);
}

}  // namespace

TEST_CASE("loss closed forms") {
  // s(0) = 0.5 -> ln 2.
  CHECK(loss_of({0, 0}, {1, 1}, {}) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // Saturated positive dot -> loss vanishes.
  CHECK(loss_of({1000, 0}, {1, 0}, {}) == doctest::Approx(0.0).epsilon(1e-12));

  // Hand evaluation: vp=[1,0], vq=[0,1], one negative [1,0].
  const double expected = std::log(2.0) + std::log(1.0 + std::exp(1.0));
  CHECK(loss_of({1, 0}, {0, 1}, {{1, 0}}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.693147 + 1.313262).epsilon(1e-6));
}

TEST_CASE("loss is nonnegative on random inputs") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(8));
    auto draw = [&] {
      Vec v(d);
      for (auto& x : v) x = rng.next_range(-3.0, 3.0);
      return v;
    };
    const Vec vp = draw(), vq = draw();
    std::vector<Vec> negs(rng.next_below(4));
    for (auto& n : negs) n = draw();
    CHECK(loss_of(vp, vq, negs) >= 0.0);
  }
}

TEST_CASE("positive update: direct substitution at s(0)") {
  Vec vp{1, 0}, vq{0, 1};
  update_positive<double>(vp, vq, 1.0, 1.0);
  // g = s(0) - 1 = -0.5.
  CHECK(vq[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(vq[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vp[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vp[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("negative update: direct substitution at s(0)") {
  Vec vp{1, 0}, vn{0, 1};
  update_negative<double>(vp, vn, 1.0, 1.0);
  // g = s(0) = 0.5.
  CHECK(vn[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(vn[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vp[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vp[1] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("alpha = 0 freezes both updates") {
  Rng rng(3);
  Vec vp{0.3, -0.2, 1.1}, vq{0.5, 0.4, -0.7};
  Vec vp0 = vp, vq0 = vq;
  update_positive<double>(vp, vq, 0.5, 0.0);
  CHECK(vp == vp0);
  CHECK(vq == vq0);
  update_negative<double>(vp, vq, 0.5, 0.0);
  CHECK(vp == vp0);
  CHECK(vq == vq0);
}

TEST_CASE("update directions are forced by the equations") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_below(7));
    Vec vp(d), vq(d);
    for (auto& x : vp) x = rng.next_range(-1.0, 1.0);
    for (auto& x : vq) x = rng.next_range(-1.0, 1.0);
    Vec vp0 = vp, vq0 = vq;
    update_positive<double>(vp, vq, 0.1, 0.8);
    // (vp' - vp) parallel to vq, (vq' - vq) parallel to vp: cross terms vanish.
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        CHECK((vp[i] - vp0[i]) * vq0[j] ==
              doctest::Approx((vp[j] - vp0[j]) * vq0[i]).epsilon(1e-9));
        CHECK((vq[i] - vq0[i]) * vp0[j] ==
              doctest::Approx((vq[j] - vq0[j]) * vp0[i]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("negative update decreases the dot product for small eta") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(rng.next_below(7));
    Vec vp(d), vn(d);
    for (auto& x : vp) x = rng.next_range(-1.0, 1.0);
    for (auto& x : vn) x = rng.next_range(-1.0, 1.0);
    const double before = dot<double>(vp, vn);
    update_negative<double>(vp, vn, 1e-3, 1.0);
    CHECK(dot<double>(vp, vn) < before);
  }
}

// The heart of the trainer: one update_pair step must equal a gradient step
// on the pair loss, every partial evaluated at the pre-update point.
TEST_CASE("analytic updates match central finite differences") {
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(8));
    const int n_neg = static_cast<int>(rng.next_below(6));
    auto draw = [&] {
      Vec v(d);
      for (auto& x : v) x = rng.next_range(-2.0, 2.0);
      return v;
    };
    Vec vp = draw(), vq = draw();
    std::vector<Vec> negs(n_neg);
    for (auto& n : negs) n = draw();

    const double eta = 0.05, alpha = 0.7;

    // Analytic step.
    Vec vp_new = vp, vq_new = vq;
    std::vector<Vec> negs_new = negs;
    {
      std::vector<std::span<double>> views(negs_new.begin(), negs_new.end());
      Vec scratch(d);
      update_pair<double>(vp_new, vq_new, views, eta, alpha, scratch);
    }

    // Central finite differences of the loss, one coordinate at a time.
    const double h = 1e-6;
    auto fd_check = [&](Vec& vec, const Vec& updated) {
      for (int i = 0; i < d; ++i) {
        const double saved = vec[i];
        vec[i] = saved + h;
        const double up = loss_of(vp, vq, negs);
        vec[i] = saved - h;
        const double down = loss_of(vp, vq, negs);
        vec[i] = saved;
        const double grad = (up - down) / (2.0 * h);
        const double analytic = (saved - updated[i]) / (eta * alpha);
        const double scale = std::max({std::fabs(grad), std::fabs(analytic), 1e-8});
        worst = std::max(worst, std::fabs(grad - analytic) / scale);
      }
    };
    fd_check(vp, vp_new);
    fd_check(vq, vq_new);
    for (int n = 0; n < n_neg; ++n) fd_check(negs[n], negs_new[n]);
  }
  CHECK(worst < 1e-5);
}
