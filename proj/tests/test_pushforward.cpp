#include <random>
#include <set>

#include "doctest.h"
#include "tropsplit/pushforward.hpp"

using namespace tropsplit;

namespace {

ZVec zv(const std::vector<long>& v) {
  ZVec out;
  for (long x : v) out.push_back(Int(x));
  return out;
}

IntMatrix colmat(const std::vector<std::vector<long>>& columns) {
  std::vector<ZVec> c;
  for (const auto& x : columns) c.push_back(zv(x));
  return IntMatrix::from_columns(c);
}

FanPtr p1xp1_fan() {
  return std::make_shared<Fan>(
      Fan::build(2, {zv({1, 0}), zv({0, 1}), zv({-1, 0}), zv({0, -1})},
                 {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
}

FanPtr p2_fan() {
  return std::make_shared<Fan>(Fan::build(
      2, {zv({1, 0}), zv({0, 1}), zv({-1, -1})}, {{0, 1}, {1, 2}, {2, 0}}));
}

SourceStratum apex_source(std::size_t rank) {
  return SourceStratum{rank, Cone::zero(rank)};
}

// Independent route for [closure of a one-dimensional subtorus] in a rank-2
// complete fan: for each ray, solve t*y + v = s*w exactly and keep rays hit
// at a single interior point; the coefficient is |det[y w]|.
std::map<std::size_t, Int> brute_force_line_cycle(const Fan& fan,
                                                  const ZVec& y,
                                                  const ZVec& v) {
  std::map<std::size_t, Int> out;
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Cone& c = fan.cone(i);
    if (c.dim() != 1) continue;
    const ZVec& w = c.rays()[0];
    // t*y - s*w = -v ; 2x2 Cramer solve
    Rat det = Rat(y[0]) * Rat(-w[1]) - Rat(-w[0]) * Rat(y[1]);
    if (det == 0) continue;  // parallel: empty or infinite, never one point
    Rat s = (Rat(y[0]) * Rat(-v[1]) - Rat(-v[0]) * Rat(y[1])) / det;
    if (s <= 0) continue;  // apex hits are non-interior, misses are empty
    Int coeff = abs(y[0] * w[1] - w[0] * y[1]);
    out[i] = coeff;
  }
  return out;
}

}  // namespace

TEST_CASE("genericity check") {
  FanPtr fan = p1xp1_fan();
  IntMatrix diag = colmat({{1, 1}});
  SUBCASE("diagonal with v=(1,0) is generic") {
    auto report = check_generic(*fan, diag, std::nullopt, zv({1, 0}));
    CHECK(report.generic);
  }
  SUBCASE("diagonal with v=(1,1) fails on rays through the apex") {
    auto report = check_generic(*fan, diag, std::nullopt, zv({1, 1}));
    CHECK(!report.generic);
    REQUIRE(!report.witnesses.empty());
    bool saw_e1 = false;
    for (const auto& w : report.witnesses) {
      if (fan->cone(w.cone_index) == Cone::from_rays(2, {zv({1, 0})})) {
        saw_e1 = true;
        CHECK(w.slice.kind == AffineSliceResult::Kind::point);
        CHECK(!w.slice.interior);
      }
    }
    CHECK(saw_e1);
  }
  SUBCASE("full-lattice subspace is generic for any v") {
    auto report =
        check_generic(*fan, IntMatrix::identity(2), std::nullopt, zv({7, -3}));
    CHECK(report.generic);
  }
}

TEST_CASE("worked example: diagonal line in the product of two lines") {
  FanPtr fan = p1xp1_fan();
  IntMatrix diag = colmat({{1, 1}});
  auto res = pushforward(fan, diag, apex_source(1), zv({1, 0}), std::nullopt);
  std::size_t ray_e1 = fan->find(Cone::from_rays(2, {zv({1, 0})}));
  std::size_t ray_neg_e2 = fan->find(Cone::from_rays(2, {zv({0, -1})}));
  REQUIRE(res.cycle.terms.size() == 2);
  CHECK(res.cycle.terms.at(ray_e1) == 1);
  CHECK(res.cycle.terms.at(ray_neg_e2) == 1);
  CHECK(res.stack_index == 1);
  CHECK(res.fan_complete);
  CHECK(!res.empty_delta);

  auto brute = brute_force_line_cycle(*fan, zv({1, 1}), zv({1, 0}));
  CHECK(brute == res.cycle.terms);
}

TEST_CASE("non-generic displacement is refused") {
  FanPtr fan = p1xp1_fan();
  IntMatrix diag = colmat({{1, 1}});
  CHECK_THROWS_AS(
      pushforward(fan, diag, apex_source(1), zv({1, 1}), std::nullopt),
      NotGenericError);
}

TEST_CASE("identity pushforward returns the stratum itself") {
  FanPtr fan = p2_fan();
  for (std::size_t tau = 0; tau < fan->size(); ++tau) {
    if (fan->cone(tau).dim() != 1) continue;
    SourceStratum src{2, fan->cone(tau)};
    auto res = pushforward(fan, IntMatrix::identity(2), src, zv({1, 0}),
                           std::nullopt);
    REQUIRE(res.cycle.terms.size() == 1);
    CHECK(res.cycle.terms.begin()->first == tau);
    CHECK(res.cycle.terms.begin()->second == 1);
  }
}

TEST_CASE("point stratum pushes to the smooth maximal cone containing v") {
  FanPtr fan = p2_fan();
  IntMatrix f(2, 0);
  SourceStratum src{0, Cone::zero(0)};
  auto res = pushforward(fan, f, src, zv({1, 2}), std::nullopt);
  std::size_t target = fan->find(Cone::from_rays(2, {zv({1, 0}), zv({0, 1})}));
  REQUIRE(res.cycle.terms.size() == 1);
  CHECK(res.cycle.terms.at(target) == 1);
}

TEST_CASE("displacement scale invariance") {
  FanPtr fan = p1xp1_fan();
  IntMatrix diag = colmat({{1, 1}});
  auto a = pushforward(fan, diag, apex_source(1), zv({1, 0}), std::nullopt);
  auto b = pushforward(fan, diag, apex_source(1), zv({5, 0}), std::nullopt);
  CHECK(a.cycle.terms == b.cycle.terms);
}

TEST_CASE("stack index") {
  FanPtr fan = p1xp1_fan();
  SUBCASE("saturated diagonal image gives 1") {
    auto res = pushforward(fan, colmat({{1, 1}}), apex_source(1), zv({1, 0}),
                           IntMatrix(1, 0));
    CHECK(res.stack_index == 1);
  }
  SUBCASE("doubled inclusion gives 2") {
    FanPtr line = std::make_shared<Fan>(
        Fan::build(1, {zv({1}), zv({-1})}, {{0}, {1}}));
    auto res = pushforward(line, colmat({{2}}), apex_source(1), zv({1}),
                           IntMatrix(1, 0));
    CHECK(res.stack_index == 2);
  }
  SUBCASE("doubled diagonal gives 2") {
    auto res = pushforward(fan, colmat({{2, 2}}), apex_source(1), zv({1, 0}),
                           IntMatrix(1, 0));
    CHECK(res.stack_index == 2);
    // coefficients are unchanged by the quotient data
    auto plain = pushforward(fan, colmat({{2, 2}}), apex_source(1), zv({1, 0}),
                             std::nullopt);
    CHECK(plain.stack_index == 1);
    CHECK(plain.cycle.terms == res.cycle.terms);
  }
}

TEST_CASE("line closures in random complete rank-2 fans match brute force") {
  std::mt19937_64 rng(60902);
  std::uniform_int_distribution<long> entry(-4, 4);
  int done = 0;
  while (done < 30) {
    std::set<ZVec> rayset;
    std::uniform_int_distribution<std::size_t> count(2, 5);
    std::size_t want = count(rng);
    while (rayset.size() < 2 * want) {
      ZVec r = {Int(entry(rng)), Int(entry(rng))};
      if (r[0] == 0 && r[1] == 0) continue;
      r = primitive(r);
      ZVec neg = {-r[0], -r[1]};
      rayset.insert(r);
      rayset.insert(neg);
    }
    std::vector<ZVec> rays(rayset.begin(), rayset.end());
    // order rays by angle using exact cross products
    std::sort(rays.begin(), rays.end(), [](const ZVec& a, const ZVec& b) {
      auto half = [](const ZVec& v) {
        return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
      };
      if (half(a) != half(b)) return half(a) < half(b);
      Int cross = a[0] * b[1] - a[1] * b[0];
      return cross > 0;
    });
    std::vector<std::vector<std::size_t>> cones;
    for (std::size_t i = 0; i < rays.size(); ++i)
      cones.push_back({i, (i + 1) % rays.size()});
    FanPtr fan;
    try {
      fan = std::make_shared<Fan>(Fan::build(2, rays, cones));
    } catch (const FanError&) {
      continue;  // antipodal-only configurations can degenerate
    }
    if (!fan->is_complete()) continue;

    ZVec y = {Int(entry(rng)), Int(entry(rng))};
    ZVec v = {Int(entry(rng)), Int(entry(rng))};
    if ((y[0] == 0 && y[1] == 0) || (v[0] == 0 && v[1] == 0)) continue;
    IntMatrix sub = IntMatrix::from_columns({y});
    if (!check_generic(*fan, sub, std::nullopt, v).generic) continue;
    auto res = pushforward(fan, sub, apex_source(1), v, std::nullopt);
    CHECK(res.cycle.terms == brute_force_line_cycle(*fan, y, v));
    // identity law on every ray of the same fan
    for (std::size_t tau = 0; tau < fan->size(); ++tau) {
      if (fan->cone(tau).dim() != 1) continue;
      SourceStratum src{2, fan->cone(tau)};
      auto idres = pushforward(fan, IntMatrix::identity(2), src, v,
                               std::nullopt);
      REQUIRE(idres.cycle.terms.size() == 1);
      CHECK(idres.cycle.terms.begin()->first == tau);
      CHECK(idres.cycle.terms.begin()->second == 1);
    }
    ++done;
  }
}

TEST_CASE("empty displacement set is flagged, not fatal") {
  // non-complete fan: single quadrant; displaced line missing it entirely
  FanPtr quad = std::make_shared<Fan>(
      Fan::build(2, {zv({1, 0}), zv({0, 1})}, {{0, 1}}));
  IntMatrix sub = colmat({{1, -1}});
  auto res = pushforward(quad, sub, apex_source(1), zv({-1, -1}), std::nullopt);
  CHECK(res.empty_delta);
  CHECK(!res.fan_complete);
  CHECK(res.cycle.terms.empty());
}
