#include <random>

#include "doctest.h"
#include "stltube/sets/polytope.hpp"
#include "stltube/sets/zonotope.hpp"

using namespace stltube;

namespace {

Zonotope random_zono(std::mt19937_64& rng, int dim, int gens) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Vec c(dim);
  for (int i = 0; i < dim; ++i) c[i] = u(rng);
  Mat G(dim, gens);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < gens; ++j) G(i, j) = u(rng);
  return Zonotope(c, G);
}

}  // namespace

TEST_CASE("minkowski: identity element and direct formula") {
  Zonotope z(Vec::Zero(2), Mat::Identity(2, 2));
  Zonotope empty_gen = Zonotope::singleton(Vec::Zero(2));
  auto s = minkowski(z, empty_gen);
  CHECK(s.num_generators() == 2);
  CHECK(s.center().isApprox(z.center()));
  CHECK(s.generators().isApprox(z.generators()));

  Vec c1(2), c2(2);
  c1 << 1, 0;
  c2 << 0, 1;
  auto t = minkowski(Zonotope(c1, Mat::Identity(2, 2)), Zonotope(c2, Mat::Identity(2, 2)));
  CHECK(t.center()(0) == doctest::Approx(1));
  CHECK(t.center()(1) == doctest::Approx(1));
  CHECK(t.num_generators() == 4);

  CHECK_THROWS_AS(minkowski(z, Zonotope::singleton(Vec::Zero(3))), std::invalid_argument);
}

TEST_CASE("minkowski: interval hulls add componentwise (oracle)") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    auto a = random_zono(rng, 3, 4);
    auto b = random_zono(rng, 3, 2);
    auto [lo_a, hi_a] = interval_hull(a);
    auto [lo_b, hi_b] = interval_hull(b);
    auto [lo_s, hi_s] = interval_hull(minkowski(a, b));
    CHECK((lo_s - (lo_a + lo_b)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hi_s - (hi_a + hi_b)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("affine_map: identity, collapse to singleton, distributivity") {
  std::mt19937_64 rng(13);
  auto z = random_zono(rng, 3, 5);
  auto id = affine_map(Mat::Identity(3, 3), Vec::Zero(3), z);
  CHECK(id.center().isApprox(z.center()));
  CHECK(id.generators().isApprox(z.generators()));

  Vec off(2);
  off << 4, -1;
  auto pt = affine_map(Mat::Zero(2, 3), off, z);
  CHECK(pt.center().isApprox(off));
  CHECK(pt.generators().cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // A(a (+) b) = Aa (+) Ab exactly on representations
  auto a = random_zono(rng, 3, 4);
  auto b = random_zono(rng, 3, 3);
  Mat A = Mat::Random(2, 3);
  auto lhs = affine_map(A, Vec::Zero(2), minkowski(a, b));
  auto rhs = minkowski(affine_map(A, Vec::Zero(2), a), affine_map(A, Vec::Zero(2), b));
  CHECK(lhs.center().isApprox(rhs.center()));
  CHECK(lhs.generators().isApprox(rhs.generators()));
}

TEST_CASE("interval_hull: unit square, singleton, sampled members stay inside") {
  Zonotope z(Vec::Zero(2), Mat::Identity(2, 2));
  auto [lo, hi] = interval_hull(z);
  CHECK(lo(0) == doctest::Approx(-1));
  CHECK(hi(1) == doctest::Approx(1));

  Vec c(2);
  c << 1, 1;
  auto [slo, shi] = interval_hull(Zonotope::singleton(c));
  CHECK(slo.isApprox(c));
  CHECK(shi.isApprox(c));

  std::mt19937_64 rng(21);
  auto zr = random_zono(rng, 4, 6);
  auto [rlo, rhi] = interval_hull(zr);
  for (int k = 0; k < 1000; ++k) {
    Vec p = zr.sample(rng);
    CHECK(((p - rlo).array() >= -1e-12).all());
    CHECK(((rhi - p).array() >= -1e-12).all());
  }
}

TEST_CASE("affine_map: 1000 sampled images are members of the mapped zonotope hull") {
  std::mt19937_64 rng(99);
  auto z = random_zono(rng, 3, 5);
  Mat A = Mat::Random(2, 3);
  Vec b = Vec::Random(2);
  auto img = affine_map(A, b, z);
  auto [lo, hi] = interval_hull(img);
  for (int k = 0; k < 1000; ++k) {
    Vec p = A * z.sample(rng) + b;
    CHECK(((p - lo).array() >= -1e-9).all());
    CHECK(((hi - p).array() >= -1e-9).all());
  }
}

TEST_CASE("HPolytope: box construction and membership") {
  Vec lo(2), hi(2);
  lo << -1, 0;
  hi << 1, 2;
  auto P = HPolytope::from_box(lo, hi);
  CHECK(P.rows() == 4);
  Vec in(2), out(2);
  in << 0, 1;
  out << 1.5, 1;
  CHECK(P.contains(in));
  CHECK(!P.contains(out));
}
