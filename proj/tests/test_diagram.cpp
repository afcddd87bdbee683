#include "doctest.h"
#include "khleo/diagram.hpp"

using namespace khleo;

TEST_CASE("trefoil parses with consistent signs") {
  auto d = parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)");
  CHECK(d.size() == 3);
  CHECK(d.arcs() == 6);
  CHECK(d.n_minus == 3);
  CHECK(d.n_plus == 0);
  auto m = mirror(d);
  CHECK(m.n_plus == 3);
  CHECK(mirror(m).n_minus == 3);
}

TEST_CASE("alternate spellings parse") {
  auto a = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]");
  auto b = parse_pd("3_1 = X(1,4,2,5); X(3,6,4,1); X(5,2,6,3)");
  CHECK(to_pd(a) == to_pd(b));
  CHECK(parse_pd("U").size() == 0);
}

TEST_CASE("malformed diagrams are rejected") {
  CHECK_THROWS_AS(parse_pd("X(1,2,3)"), ParseError);
  CHECK_THROWS_AS(parse_pd("X(1,1,2,3)"), ParseError);
  CHECK_THROWS_AS(parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,7)"), ParseError);
  CHECK_THROWS_AS(parse_pd("Y(1,2,2,1)"), ParseError);
}

TEST_CASE("resolutions of the trefoil") {
  auto d = parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)");
  // Seifert circles: the oriented (all-1 for negative crossings) resolution
  CHECK(circle_count(d, 7) == 2);
  CHECK(circle_count(d, 0) == 3);
  for (uint32_t v = 0; v < 8; ++v) {
    auto r = resolve(d, v);
    int ones = __builtin_popcount(v);
    CHECK((r.circles - 3 + ones) % 2 == 0);
    CHECK(r.split_count >= 0);
  }
}

TEST_CASE("connected sum of trefoils has six crossings and adds signs") {
  auto d = parse_pd("X(1,4,2,5);X(3,6,4,1);X(5,2,6,3)");
  auto s = connected_sum(d, d);
  CHECK(s.size() == 6);
  CHECK(s.n_minus == 6);
  auto t = connected_sum(d, mirror(d));
  CHECK(t.n_minus == 3);
  CHECK(t.n_plus == 3);
  // circles of the all-zero resolution add up minus one
  CHECK(circle_count(s, 0) == 5);
}

TEST_CASE("one-crossing unknot diagram") {
  auto d = parse_pd("X(1,1,2,2)");
  CHECK(d.size() == 1);
  CHECK(circle_count(d, 0) + circle_count(d, 1) == 3);
}
