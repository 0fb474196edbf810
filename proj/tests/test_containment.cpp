#include <random>

#include "doctest.h"
#include "stltube/sets/containment.hpp"

using namespace stltube;
using opt::LinExpr;
using opt::OptModel;
using opt::SolveStatus;

namespace {

Zonotope random_zono(std::mt19937_64& rng, int dim, int gens, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec c(dim);
  for (int i = 0; i < dim; ++i) c[i] = u(rng);
  Mat G(dim, gens);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < gens; ++j) G(i, j) = u(rng);
  return Zonotope(c, G);
}

struct EncodeResult {
  bool feasible;
  ContainmentCert cert;
};

EncodeResult try_encode(const Zonotope& inner, const Zonotope& outer) {
  OptModel m;
  auto h = encode_zono_in_zono(m, ModelZono::constant(inner), outer);
  m.set_objective(opt::ObjSense::Minimize, LinExpr(0.0));
  m.freeze();
  auto s = opt::solve_lp(m);
  if (s.status != SolveStatus::Optimal) return {false, {}};
  return {true, extract_cert(h, s)};
}

bool polytope_encode_feasible(const Zonotope& inner, const HPolytope& outer) {
  OptModel m;
  encode_zono_in_polytope(m, ModelZono::constant(inner), outer);
  m.set_objective(opt::ObjSense::Minimize, LinExpr(0.0));
  m.freeze();
  return opt::solve_lp(m).status == SolveStatus::Optimal;
}

}  // namespace

TEST_CASE("zono-in-zono: scaling certificate recovered and replayed") {
  Zonotope inner(Vec::Zero(2), 0.5 * Mat::Identity(2, 2));
  Zonotope outer(Vec::Zero(2), Mat::Identity(2, 2));
  auto r = try_encode(inner, outer);
  REQUIRE(r.feasible);
  CHECK(replay_cert(r.cert, inner, outer));
  CHECK(r.cert.gamma.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("zono-in-zono: oversized inner rejected without inflation") {
  Zonotope inner(Vec::Zero(2), 2.0 * Mat::Identity(2, 2));
  Zonotope outer(Vec::Zero(2), Mat::Identity(2, 2));
  CHECK(!try_encode(inner, outer).feasible);
}

TEST_CASE("zono-in-zono: soundness on random pairs via membership sampling") {
  std::mt19937_64 rng(2024);
  int certified = 0;
  for (int k = 0; k < 120; ++k) {
    auto inner = random_zono(rng, 2, 2 + static_cast<int>(rng() % 3), 0.6);
    auto outer = random_zono(rng, 2, 2 + static_cast<int>(rng() % 4), 1.0);
    auto r = try_encode(inner, outer);
    if (!r.feasible) continue;
    ++certified;
    CHECK(replay_cert(r.cert, inner, outer, 0.0, 1e-7));
    for (int s = 0; s < 100; ++s) {
      Vec p = inner.sample(rng);
      CHECK(contains_point(outer, p));
    }
  }
  CHECK(certified > 5);  // the generator mix must exercise feasible cases
}

TEST_CASE("zono-in-polytope: tight box, shifted infeasible, hull exactness oracle") {
  Zonotope z1(Vec::Zero(1), Mat::Identity(1, 1));
  Vec lo(1), hi(1);
  lo << -1, hi << 1;
  CHECK(polytope_encode_feasible(z1, HPolytope::from_box(lo, hi)));

  Vec c(1);
  c << 0.5;
  Mat H(1, 1);
  H << 1.0;
  Vec h(1);
  h << 1.0;
  CHECK(!polytope_encode_feasible(Zonotope(c, Mat::Identity(1, 1)), HPolytope(H, h)));

  std::mt19937_64 rng(7);
  for (int k = 0; k < 60; ++k) {
    auto z = random_zono(rng, 3, 4, 0.8);
    Vec blo(3), bhi(3);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    for (int i = 0; i < 3; ++i) {
      blo[i] = -u(rng);
      bhi[i] = u(rng);
    }
    auto box = HPolytope::from_box(blo, bhi);
    auto [zlo, zhi] = interval_hull(z);
    bool inside = ((zlo - blo).array() >= -1e-12).all() && ((bhi - zhi).array() >= -1e-12).all();
    CHECK(polytope_encode_feasible(z, box) == inside);
  }
}

TEST_CASE("directed_hausdorff: containment gives zero, doubled box gives one") {
  Zonotope I2(Vec::Zero(2), Mat::Identity(2, 2));
  Zonotope half(Vec::Zero(2), 0.5 * Mat::Identity(2, 2));
  CHECK(directed_hausdorff(I2, half) == doctest::Approx(0.0).epsilon(1e-9));

  Zonotope dbl(Vec::Zero(2), 2.0 * Mat::Identity(2, 2));
  CHECK(directed_hausdorff(I2, dbl) == doctest::Approx(1.0));
}

TEST_CASE("directed_hausdorff: monotone under inner scaling, zero iff encoder feasible") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 25; ++k) {
    auto target = random_zono(rng, 2, 3, 1.0);
    auto z = random_zono(rng, 2, 2, 0.8);
    double d1 = directed_hausdorff(target, z);
    Zonotope zl(z.center(), 1.7 * z.generators());
    double d2 = directed_hausdorff(target, zl);
    CHECK(d2 >= d1 - 1e-9);

    bool feas = try_encode(z, target).feasible;
    CHECK((d1 <= 1e-6) == feas);
  }
}

TEST_CASE("directed_hausdorff to polytope: support-function form") {
  Vec lo(2), hi(2);
  lo << -1, -1;
  hi << 1, 1;
  auto box = HPolytope::from_box(lo, hi);
  Zonotope z(Vec::Zero(2), 2.0 * Mat::Identity(2, 2));
  CHECK(directed_hausdorff(box, z) == doctest::Approx(1.0));
  Zonotope in(Vec::Zero(2), 0.25 * Mat::Identity(2, 2));
  CHECK(directed_hausdorff(box, in) == doctest::Approx(0.0));
}

TEST_CASE("contains_point: center, vertex, outside the hull") {
  Zonotope z(Vec::Zero(2), Mat::Identity(2, 2));
  CHECK(contains_point(z, Vec::Zero(2)));
  Vec v(2);
  v << 1, 1;
  CHECK(contains_point(z, v));
  Vec o(2);
  o << 1.01, 0;
  CHECK(!contains_point(z, o));
}

TEST_CASE("min_inf_norm_solve recovers the preimage under full column rank") {
  std::mt19937_64 rng(17);
  Mat G(3, 3);
  G << 2, 0, 1, 0, 1, 0, 1, 0, 3;
  Vec b(3);
  b << 0.3, -0.7, 0.2;
  auto x = min_inf_norm_solve(G, G * b);
  REQUIRE(x.has_value());
  CHECK((*x - b).cwiseAbs().maxCoeff() < 1e-8);

  // inconsistent system
  Mat Z = Mat::Zero(2, 1);
  Vec r(2);
  r << 1, 0;
  CHECK(!min_inf_norm_solve(Z, r).has_value());
}
