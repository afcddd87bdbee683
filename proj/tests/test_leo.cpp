#include "doctest.h"
#include "khleo/census.hpp"
#include "khleo/invariants.hpp"
#include "khleo/khovanov.hpp"
#include "support.hpp"

using namespace khleo;
using namespace testing_support;
using nlohmann::json;

namespace {

std::vector<KnotRecord> knots_up_to(int n) {
  std::vector<KnotRecord> out;
  for (int c = 3; c <= n; ++c) {
    char path[64];
    std::snprintf(path, sizeof path, "/data/knots_%02d.tsv", c);
    for (auto& k : read_knot_table_file(std::string(KHLEO_SOURCE_DIR) + path)) out.push_back(k);
  }
  return out;
}

PlanarDiagram knot(const std::string& name) {
  for (auto& k : knots_up_to(7))
    if (k.name == name) return parse_pd(k.pd);
  throw std::runtime_error("no knot " + name);
}

// Every number of a report, without provenance and certification data.
json numbers(const InvariantReport& r) {
  json j = r.to_json();
  for (auto key : {"provenance", "q0", "max_two_power", "cap_sufficient"}) j.erase(key);
  return j;
}

InvariantConfig full_config() {
  InvariantConfig c;
  c.bockstein = {1, 2, 3};
  return c;
}

int hat_c(const LEOTriple& t) { return *refined(t, {Refinement::Completely, 1}).hat; }

}  // namespace

TEST_CASE("trefoil: the negative chirality shifts to the trivial class") {
  PlanarDiagram d = knot("3_1");
  LEOTriple pos = leo_of_knot(d, "3_1"), neg = leo_of_knot(mirror(d), "3_1*");
  CHECK(s_field(pos, 2) == SPair{2, 2});
  CHECK(s_field(neg, 2) == SPair{-2, -2});
  CHECK_FALSE(triviality(neg));
  CHECK(triviality(shift(neg, 2)));
  CHECK_FALSE(triviality(shift(neg, -2)));
  CHECK(triviality(shift(pos, -2)));
  LEOTriple red = reduced_leo_of_knot(mirror(d), "3_1*");
  CHECK(hat_c(red) == -2);
  CHECK(triviality(shift(red, 2)));
}

TEST_CASE("s over Q matches the tabulated Rasmussen invariant") {
  for (auto& k : oracle_knots(8)) {
    CAPTURE(k.name);
    LEOTriple t = leo_of_knot(parse_pd(k.pd), k.name);
    CHECK(s_field(t, 0) == SPair{k.rasmussen, k.rasmussen});
  }
}

TEST_CASE("knot triples validate, and so do their duals") {
  for (auto& k : knots_up_to(7)) {
    CAPTURE(k.name);
    PlanarDiagram d = parse_pd(k.pd);
    KnotTriples t = knot_triples(d, k.name, true, true, true);
    for (auto* x : {&*t.leo, &*t.lee, &*t.reduced}) CHECK(validation_report(dual(*x)).empty());
    CHECK(validation_report(two_reduce(*t.reduced)).empty());
  }
}

TEST_CASE("dual of LEO(K) carries the invariants of the mirror") {
  for (auto& k : knots_up_to(6)) {
    CAPTURE(k.name);
    PlanarDiagram d = parse_pd(k.pd);
    auto cfg = full_config();
    CHECK(numbers(refined_invariants(dual(leo_of_knot(d)), cfg)) ==
          numbers(refined_invariants(leo_of_knot(mirror(d)), cfg)));
    CHECK(numbers(refined_invariants(dual(reduced_leo_of_knot(d)), cfg)) ==
          numbers(refined_invariants(reduced_leo_of_knot(mirror(d)), cfg)));
  }
}

TEST_CASE("cube-level and simplified triples have the same invariants") {
  for (auto& k : knots_up_to(6)) {
    CAPTURE(k.name);
    PlanarDiagram d = parse_pd(k.pd);
    auto cfg = full_config();
    LEOTriple cube = leo_of_knot(d, k.name, false);
    CHECK(cube.has_x());
    CHECK(numbers(refined_invariants(cube, cfg)) == numbers(refined_invariants(leo_of_knot(d, k.name), cfg)));
    CHECK(numbers(refined_invariants(reduced_leo_of_knot(d, k.name, false), cfg)) ==
          numbers(refined_invariants(reduced_leo_of_knot(d, k.name), cfg)));
    CHECK(numbers(refined_invariants(reduce(cube), cfg)) ==
          numbers(refined_invariants(reduced_leo_of_knot(d, k.name), cfg)));
    CHECK(numbers(refined_invariants(lee_of_knot(d, k.name, false), cfg)) ==
          numbers(refined_invariants(lee_of_knot(d, k.name), cfg)));
  }
}

TEST_CASE("tensor product of knot triples matches the connected sum") {
  PlanarDiagram a = knot("3_1"), b = knot("4_1");
  auto cfg = full_config();
  for (auto [x, y] : {std::pair{a, a}, std::pair{a, b}, std::pair{a, mirror(a)}}) {
    LEOTriple t = simplify(tensor(leo_of_knot(x, "", false), leo_of_knot(y, "", false)));
    validate(t);
    LEOTriple sum = leo_of_knot(connected_sum(x, y));
    CHECK(numbers(refined_invariants(t, cfg)) == numbers(refined_invariants(sum, cfg)));
    LEOTriple rt = tensor(reduced_leo_of_knot(x), reduced_leo_of_knot(y));
    CHECK(numbers(refined_invariants(rt, cfg)) == numbers(refined_invariants(reduced_leo_of_knot(connected_sum(x, y)), cfg)));
  }
  // reduction is a homomorphism
  LEOTriple ta = leo_of_knot(a, "", false), tb = leo_of_knot(b, "", false);
  CHECK(numbers(refined_invariants(reduce(tensor(ta, tb)), cfg)) ==
        numbers(refined_invariants(tensor(reduce(ta), reduce(tb)), cfg)));
}

TEST_CASE("a knot triple tensored with its dual is trivial") {
  for (auto& k : knots_up_to(4)) {
    CAPTURE(k.name);
    PlanarDiagram d = parse_pd(k.pd);
    LEOTriple cube = leo_of_knot(d, k.name, false);
    LEOTriple t = tensor(cube, dual(cube));
    CHECK_NOTHROW(check_complex(dual(cube).D));
    CHECK(triviality(simplify(t)));
    LEOTriple r = reduced_leo_of_knot(d);
    CHECK(triviality(tensor(r, dual(r))));
  }
}

TEST_CASE("s is additive and changes sign under mirroring") {
  std::vector<std::pair<std::string, PlanarDiagram>> ks;
  for (auto& k : knots_up_to(5)) {
    PlanarDiagram d = parse_pd(k.pd);
    ks.push_back({k.name, d});
    ks.push_back({k.name + "*", mirror(d)});
  }
  std::map<std::string, LEOTriple> red;
  for (auto& [n, d] : ks) red.emplace(n, reduced_leo_of_knot(d, n));
  for (auto& [n, t] : red) {
    for (uint32_t p : {2u, 3u, 0u}) CHECK(s_field(dual(t), p).plus == -s_field(t, p).plus);
    CHECK(s_integral(dual(t)).plus == -s_integral(t).plus);
  }
  for (auto& [n1, t1] : red)
    for (auto& [n2, t2] : red) {
      if (n1 > n2) continue;
      CAPTURE(n1);
      CAPTURE(n2);
      LEOTriple t = tensor(t1, t2);
      for (uint32_t p : {2u, 3u, 0u}) CHECK(s_field(t, p).plus == s_field(t1, p).plus + s_field(t2, p).plus);
      CHECK(s_integral(t).plus == s_integral(t1).plus + s_integral(t2).plus);
    }
}

TEST_CASE("two-reduction keeps hat s_o and the total order") {
  for (auto& k : knots_up_to(7)) {
    CAPTURE(k.name);
    LEOTriple r = reduced_leo_of_knot(parse_pd(k.pd), k.name);
    Refined a = refined(r, {Refinement::Oddly, 1}), b = refined(two_reduce(r), {Refinement::Oddly, 1});
    CHECK(a == b);
  }
  LEOTriple u = two_reduce(trivial_triple(Flavor::Reduced));
  LEOTriple neg = two_reduce(reduced_leo_of_knot(mirror(knot("3_1"))));
  LEOTriple fig8 = two_reduce(reduced_leo_of_knot(knot("4_1")));
  CHECK(order_compare(neg, u) == Order::Less);
  CHECK(order_compare(u, neg) == Order::Greater);
  CHECK(order_compare(neg, neg) == Order::Equal);
  CHECK(order_compare(fig8, u) == Order::Equal);
  CHECK(order_compare(neg, dual(neg)) == Order::Less);
}

TEST_CASE("triviality of knot triples") {
  CHECK(triviality(leo_of_knot(PlanarDiagram{}, "unknot")));
  CHECK(triviality(leo_of_knot(parse_pd("X(1,1,2,2)"), "kink")));
  CHECK(triviality(leo_of_knot(knot("4_1"))));
  CHECK_FALSE(triviality(leo_of_knot(knot("3_1"))));
  CHECK_FALSE(triviality(leo_of_knot(knot("5_2"))));
  CHECK(triviality(reduced_leo_of_knot(knot("6_1"))));  // slice
}

TEST_CASE("knot-case relations hold on every knot up to 8 crossings") {
  JobSpec job;
  job.mirror = true;
  for (auto& k : knots_up_to(8)) {
    KnotRow row = analyze_knot(k, job);
    CAPTURE(k.name);
    CHECK(row.failures == std::vector<std::string>{});
    int s = row.self.leo->s_field.at(2).plus;
    CHECK(row.self.lee->s_field.at(2).plus == s);
    if (k.alternating.value_or(false)) CHECK(s == *k.signature);
  }
}

TEST_CASE("relation checks catch inconsistent reports") {
  JobSpec job;
  KnotRow row = analyze_knot({"3_1", "X(1,5,2,4);X(3,1,4,6);X(5,3,6,2)", 3, 2, true}, job);
  REQUIRE(row.ok());
  SideReports s = row.self;
  s.leo->completely->r = 4;
  CHECK_FALSE(relation_violations(s).empty());
  s = row.self;
  s.reduced->bockstein.at(1).hat = 0;
  CHECK_FALSE(relation_violations(s).empty());
  CHECK(constant_violations(row.self, 2).empty());
  CHECK_FALSE(constant_violations(row.self, 0).empty());
}
