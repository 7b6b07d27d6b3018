// tests/test_self_express.cc

#include <cmath>

#include "doctest.h"
#include "ref/ref_kernels.h"
#include "sea/error.h"
#include "sea/rng.h"
#include "sea/self_express.h"

using namespace sea;

namespace {
const double kEps = 1e-8;

MatF rows(std::initializer_list<std::initializer_list<float>> data) {
  MatF m(static_cast<int>(data.size()),
         static_cast<int>(data.begin()->size()));
  int i = 0;
  for (const auto& r : data) {
    int j = 0;
    for (float v : r) m.at(i, j++) = v;
    ++i;
  }
  return m;
}
}  // namespace

TEST_CASE("cosine_gram identical, orthogonal, and mixed rows") {
  const MatF same = cosine_gram(rows({{1, 0}, {1, 0}}), kEps);
  CHECK(same.at(0, 1) == doctest::Approx(1.0));
  CHECK(same.at(1, 1) == doctest::Approx(1.0));

  const MatF ortho = cosine_gram(rows({{1, 0}, {0, 1}}), kEps);
  CHECK(ortho.at(0, 0) == doctest::Approx(1.0));
  CHECK(ortho.at(0, 1) == doctest::Approx(0.0));

  const MatF mixed = cosine_gram(rows({{1, 1}, {1, 0}, {0, 1}}), kEps);
  CHECK(mixed.at(0, 1) == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(mixed.at(0, 2) == doctest::Approx(0.70711).epsilon(1e-4));
  CHECK(mixed.at(1, 2) == doctest::Approx(0.0));
}

TEST_CASE("cosine_gram zero rows stay zero through the eps guard") {
  const MatF g = cosine_gram(rows({{0, 0}, {1, 2}}), kEps);
  CHECK(g.at(0, 0) == 0.0f);
  CHECK(g.at(0, 1) == 0.0f);
  CHECK(g.at(1, 0) == 0.0f);
}

TEST_CASE("cosine_gram matches the serial reference") {
  Rng rng(21);
  MatF z(40, 8);
  for (float& x : z.v) x = static_cast<float>(std::fabs(rng.gaussian()));
  const MatF a = cosine_gram(z, kEps);
  const MatF b = ref::cosine_gram_serial(z, kEps);
  for (size_t i = 0; i < a.v.size(); ++i) CHECK(a.v[i] == b.v[i]);
}

TEST_CASE("zero_diagonal") {
  const MatF out = zero_diagonal(rows({{1, 0.5}, {0.5, 1}}));
  CHECK(out.at(0, 0) == 0.0f);
  CHECK(out.at(0, 1) == 0.5f);
  CHECK(out.at(1, 1) == 0.0f);

  const MatF one = zero_diagonal(rows({{1}}));
  CHECK(one.at(0, 0) == 0.0f);

  CHECK_THROWS_AS((void)zero_diagonal(MatF(2, 3)), Error);
}

TEST_CASE("row_normalize examples") {
  const MatF keep = row_normalize(rows({{0, 1}, {1, 0}}), kEps);
  CHECK(keep.at(0, 1) == doctest::Approx(1.0));
  CHECK(keep.at(1, 0) == doctest::Approx(1.0));

  const MatF w =
      row_normalize(rows({{0, 2, 2}, {1, 0, 3}, {2, 2, 0}}), kEps);
  CHECK(w.at(0, 1) == doctest::Approx(0.5));
  CHECK(w.at(1, 0) == doctest::Approx(0.25));
  CHECK(w.at(1, 2) == doctest::Approx(0.75));
  CHECK(w.at(2, 0) == doctest::Approx(0.5));

  const MatF zero = row_normalize(rows({{0, 0}, {3, 1}}), kEps);
  CHECK(zero.at(0, 0) == 0.0f);
  CHECK(zero.at(0, 1) == 0.0f);

  CHECK_THROWS_AS((void)row_normalize(rows({{-1, 2}}), kEps), Error);
}

TEST_CASE("self_express worked cases") {
  // Two identical rows express each other exactly.
  const MatF twin = rows({{1, 0}, {1, 0}});
  const auto se = self_express(twin, kEps);
  CHECK(se.zbar.at(0, 0) == doctest::Approx(1.0));
  CHECK(se.zbar.at(1, 0) == doctest::Approx(1.0));

  // Any N=2 input with a positive cosine swaps rows.
  const MatF two = rows({{2, 1}, {1, 3}});
  const auto swapped = self_express(two, kEps);
  CHECK(swapped.w.at(0, 1) == doctest::Approx(1.0));
  CHECK(swapped.w.at(1, 0) == doctest::Approx(1.0));
  CHECK(swapped.zbar.at(0, 0) == doctest::Approx(1.0));
  CHECK(swapped.zbar.at(0, 1) == doctest::Approx(3.0));

  // Orthogonal rows leave nothing once the diagonal is removed.
  const auto ortho = self_express(rows({{1, 0}, {0, 1}}), kEps);
  for (float v : ortho.zbar.v) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("self-expression invariants on random non-negative input") {
  Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.uniform_int(2, 12);
    const int k = rng.uniform_int(1, 6);
    MatF z(n, k);
    for (float& x : z.v) x = static_cast<float>(std::fabs(rng.gaussian()));
    const auto se = self_express(z, kEps);
    for (int i = 0; i < n; ++i) {
      CHECK(se.a.at(i, i) == 0.0f);
      for (int j = 0; j < n; ++j) {
        CHECK(std::fabs(se.a.at(i, j) - se.a.at(j, i)) <= 1e-6);
      }
      double sum = 0.0;
      for (int j = 0; j < n; ++j) sum += se.w.at(i, j);
      const bool unit = std::fabs(sum - 1.0) <= 1e-6;
      bool all_zero = true;
      for (int j = 0; j < n; ++j)
        if (se.w.at(i, j) != 0.0f) all_zero = false;
      CHECK((unit || all_zero));
    }
  }
}

TEST_CASE("W is invariant to positive per-row rescaling of Z") {
  Rng rng(23);
  MatF z(8, 4);
  for (float& x : z.v) x = static_cast<float>(std::fabs(rng.gaussian()) + 0.1);
  MatF scaled = z;
  for (int i = 0; i < z.rows; ++i) {
    const float c = static_cast<float>(0.1 + 3.0 * rng.uniform());
    for (int j = 0; j < z.cols; ++j) scaled.at(i, j) *= c;
  }
  const auto w1 = self_express(z, kEps).w;
  const auto w2 = self_express(scaled, kEps).w;
  for (size_t i = 0; i < w1.v.size(); ++i) {
    CHECK(w1.v[i] == doctest::Approx(w2.v[i]).epsilon(1e-5));
  }
}

TEST_CASE("mse") {
  MatF x(1, 2), y(1, 2);
  x.v = {0, 0};
  y.v = {1, 1};
  CHECK(mse(x, y) == doctest::Approx(1.0));
  CHECK(mse(x, x) == 0.0);

  MatF a(2, 2), b(2, 2);
  a.v = {1, 2, 3, 4};
  b.v = {1, 1, 1, 1};
  CHECK(mse(a, b) == doctest::Approx(3.5));
  CHECK(mse(a, b) == ref::mse_serial(a, b));

  CHECK_THROWS_AS((void)mse(MatF(1, 2), MatF(2, 1)), Error);
}
