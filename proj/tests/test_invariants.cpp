#include "algebraic_examples.hpp"
#include "doctest.h"
#include "khleo/invariants.hpp"
#include "khleo/khovanov.hpp"
#include "support.hpp"

using namespace khleo;
using namespace testing_support;

namespace {

Verdict at(const LEOTriple& t, int q, Refinement r, int n = 1) { return fullness(t, q, {r, n}).status; }

int hat(const LEOTriple& t, Refinement r, int n = 1) { return *refined(t, {r, n}).hat; }

}  // namespace

TEST_CASE("trivial triple: localized target and the fullness ladder") {
  LEOTriple u = trivial_triple(Flavor::Unreduced);
  validate(u);
  LocalizedTarget lt = localized_target(u);
  CHECK(lt.q0 == -3);
  CHECK(lt.group.rank == 2);
  CHECK(lt.group.torsion.empty());
  for (int n : {1, 2, 5}) {
    CHECK(at(u, -3, Refinement::Bockstein, n) == Verdict::Full);
    CHECK(at(u, -1, Refinement::Bockstein, n) == Verdict::HalfFull);
    CHECK(at(u, 1, Refinement::Bockstein, n) == Verdict::NotHalfFull);
    CHECK(at(u, 3, Refinement::Bockstein, n) == Verdict::NotHalfFull);
  }
  CHECK(at(u, -1, Refinement::BetaSum) == Verdict::HalfFull);
  for (Refinement r : {Refinement::Oddly, Refinement::Completely}) {
    CHECK(at(u, -3, r) == Verdict::Full);
    CHECK(at(u, -1, r) == Verdict::Full);
    CHECK(at(u, 1, r) == Verdict::HalfFull);
    CHECK(at(u, 3, r) == Verdict::NotHalfFull);
  }
  auto w = fullness(u, -3, {Refinement::Bockstein, 1});
  CHECK(w.witnesses.size() == 2);
}

TEST_CASE("trivial triples have vanishing invariants") {
  InvariantConfig cfg;
  cfg.bockstein = {1, 2, 3};
  for (Flavor fl : {Flavor::Unreduced, Flavor::Reduced}) {
    LEOTriple t = trivial_triple(fl);
    auto rep = refined_invariants(t, cfg);
    for (auto& [p, s] : rep.s_field) CHECK(s == SPair{0, 0});
    CHECK(*rep.s_integral == SPair{0, 0});
    for (auto& [n, r] : rep.bockstein) {
      if (fl == Flavor::Unreduced) {
        CHECK(*r.r == 0);
        CHECK(*r.s == 0);
      } else {
        CHECK(*r.hat == 0);
      }
    }
    for (auto* r : {&*rep.beta, &*rep.oddly, &*rep.completely}) {
      if (fl == Flavor::Unreduced) {
        CHECK(*r->r == 0);
        CHECK(*r->s == 0);
      } else {
        CHECK(*r->hat == 0);
      }
    }
    CHECK(triviality(t));
  }
  LEOTriple two = two_reduce(trivial_triple(Flavor::Reduced));
  CHECK(hat(two, Refinement::Oddly) == 0);
  CHECK(s_field(two, 2) == SPair{0, 0});
  CHECK(triviality(two));
  CHECK(dual(trivial_triple(Flavor::Unreduced)).D.gens.size() == 2);
  auto g = graded_s(trivial_triple(Flavor::Reduced));
  CHECK(g.sQ == 0);
  CHECK(g.sZ == 0);
  CHECK(g.length == 0);
  CHECK(g.c.empty());
}

TEST_CASE("spread example: s+ and s- drift apart") {
  for (int k = 0; k <= 4; ++k) {
    CAPTURE(k);
    LEOTriple t = from_algebraic(spread_example(k));
    SPair s = s_field(t, 2);
    SPair sd = s_field(dual(t), 2);
    // free generators of the localized homology sit at q = 1 and q = -1 + 2k
    int hi = std::max(1, -1 + 2 * k), lo = std::min(1, -1 + 2 * k);
    CHECK(s.plus == hi - 1);
    CHECK(s.minus == lo + 1);
    CHECK(sd.plus == -lo - 1);
    CHECK(sd.minus == -hi + 1);
    if (k >= 1) {
      CHECK(s == SPair{2 * k - 2, 2});
      CHECK(sd == SPair{-2, 2 - 2 * k});
    }
    for (uint32_t p : {0u, 3u}) CHECK(s_field(t, p) == s);
  }
}

TEST_CASE("shipped algebraic file matches the builder") {
  std::ifstream in(std::string(KHLEO_SOURCE_DIR) + "/data/algebraic/spread_k2.json");
  REQUIRE(in.good());
  json j = json::parse(in);
  LEOTriple a = from_algebraic(j), b = from_algebraic(spread_example(2));
  CHECK(s_field(a, 2) == s_field(b, 2));
  CHECK(a.D.size() == 6);
}

TEST_CASE("two-step example: Bockstein orders") {
  for (int n = 1; n <= 4; ++n) {
    CAPTURE(n);
    LEOTriple t = from_algebraic(bockstein_example(n));
    CHECK(s_field(t, 2).plus == 0);
    for (int m = 1; m <= 6; ++m) CHECK(hat(t, Refinement::Bockstein, m) == (m < n ? 0 : 2));
    CHECK(hat(t, Refinement::BetaSum) == hat(t, Refinement::Bockstein, 1));
    CHECK(hat(t, Refinement::Oddly) == 0);
    CHECK(hat(t, Refinement::Completely) == 0);
    LEOTriple d = dual(t);
    for (int m = 1; m <= 6; ++m) CHECK(hat(d, Refinement::Bockstein, m) == 0);
    CHECK(hat(d, Refinement::Oddly) == -2);
    CHECK(hat(d, Refinement::Completely) == -2);
    CHECK_FALSE(triviality(t));
  }
}

TEST_CASE("beta sum example: only the sum is full") {
  LEOTriple t = from_algebraic(beta_sum_example());
  CHECK(s_field(t, 2).plus == 0);
  for (int n = 1; n <= 4; ++n) {
    CHECK(at(t, 0, Refinement::Bockstein, n) != Verdict::Full);
    CHECK(hat(t, Refinement::Bockstein, n) == 0);
  }
  CHECK(at(t, 0, Refinement::BetaSum) == Verdict::Full);
  CHECK(hat(t, Refinement::BetaSum) == 2);
  CHECK(hat(t, Refinement::Oddly) == 0);
  CHECK(hat(t, Refinement::Completely) == 0);
  LEOTriple d = dual(t);
  CHECK(at(d, 0, Refinement::Oddly) == Verdict::Full);
  CHECK(at(d, 0, Refinement::Completely) != Verdict::Full);
  CHECK(hat(d, Refinement::Completely) == -2);
}

TEST_CASE("torsion example: s depends on the characteristic") {
  for (int p : {2, 3, 5, 7}) {
    CAPTURE(p);
    LEOTriple t = from_algebraic(torsion_example(p));
    for (uint32_t c : {0u, 2u, 3u, 5u, 7u, 11u}) {
      CAPTURE(c);
      CHECK(s_field(t, c).plus == (c == uint32_t(p) ? 2 : 0));
    }
    CHECK(s_integral(t).plus == 0);
    auto g = graded_s(t);
    CHECK(g.sQ == 0);
    CHECK(g.sZ == 0);
    CHECK(g.length == 0);
    // the p-torsion sits in H^{1,2}(D)
    auto h = homology_at(t.D, 1, 2);
    REQUIRE(h.torsion.size() == 1);
    CHECK(h.torsion[0] == p);
  }
}

TEST_CASE("graded s sees a finite cyclic quotient") {
  // d(e) = 3x - hy: the image of H^{0,q}(D) in Z is Z at q = 0 and 3Z at q = 2
  json j;
  j["flavor"] = "reduced";
  j["generators"] = {{{"label", "e"}, {"i", -1}, {"q", 0}},
                     {{"label", "x"}, {"i", 0}, {"q", 0}},
                     {{"label", "y"}, {"i", 0}, {"q", 2}}};
  j["dD"] = {{"e", "x", "3"}, {"e", "y", "-h"}};
  j["dC"] = {{"e", "x", "3"}};
  LEOTriple t = from_algebraic(j);
  auto g = graded_s(t);
  CHECK(g.sQ == 2);
  CHECK(g.sZ == 0);
  CHECK(g.length == 1);
  REQUIRE(g.c.size() == 1);
  CHECK(g.c[0] == 3);
  CHECK(s_field(t, 0).plus == 2);
  CHECK(s_field(t, 2).plus == 2);
  CHECK(s_field(t, 3).plus == 0);
  CHECK(s_integral(t).plus == 0);
  auto gt = graded_s(tensor(t, trivial_triple(Flavor::Reduced)));
  CHECK(gt.length == 1);
}

TEST_CASE("validation rejects broken data") {
  json j = bockstein_example(1);
  j["f"] = json::array();
  CHECK_THROWS_AS(from_algebraic(j), InvalidTriple);
  json k = bockstein_example(1);
  k["dD"] = {{"e", "v", "1"}};
  CHECK_THROWS_AS(from_algebraic(k), InvalidTriple);  // localized homology vanishes
  json m = spread_example(2);
  m["dD"].push_back({"e", "b", "X"});
  CHECK_THROWS_AS(from_algebraic(m), InvalidTriple);  // not homogeneous
  json e = bockstein_example(1);
  e["f"] = json::array({json::array({"e", "e"}), json::array({"u", "u"}), json::array({"v", "v"})});
  CHECK(from_algebraic(e).f_identity);
}

TEST_CASE("unreduced triviality needs knot structure") {
  LEOTriple t = shift(from_algebraic(spread_example(2)), -2);
  CHECK_THROWS_AS(triviality(t), std::invalid_argument);
  CHECK(triviality(reduce(shift(trivial_triple(Flavor::Unreduced), 0))));
}
