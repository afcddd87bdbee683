#include <sstream>

#include "doctest.h"
#include "khleo/census.hpp"
#include "support.hpp"

using namespace khleo;

namespace {

std::vector<KnotRecord> table(const std::string& file) {
  return read_knot_table_file(std::string(KHLEO_SOURCE_DIR) + "/data/" + file);
}

std::string csv_of(const std::vector<KnotRecord>& knots, const JobSpec& job) {
  std::string out = csv_header(job);
  run(knots, job, [&](const KnotRow& r) { out += csv_row(r, job); });
  return out;
}

}  // namespace

TEST_CASE("knot table parsing") {
  std::istringstream in(
      "# name\tpd\tsignature\talternating\n"
      "\n"
      "3_1\tX(1,5,2,4);X(3,1,4,6);X(5,3,6,2)\t2\tY\n"
      "12n_242\tX(1,2,3,4)\n"
      "kink\tX(1,1,2,2)\t0\n");
  auto ks = read_knot_table(in);
  REQUIRE(ks.size() == 3);
  CHECK(ks[0].crossings == 3);
  CHECK(*ks[0].signature == 2);
  CHECK(*ks[0].alternating);
  CHECK(ks[1].crossings == 12);
  CHECK_FALSE(ks[1].signature);
  CHECK(ks[2].crossings == -1);
  std::istringstream bad("3_1\tX(1,5,2,4)\tx\n");
  CHECK_THROWS_AS(read_knot_table(bad), ParseError);
  std::istringstream bad_flag("3_1\tX(1,5,2,4)\t2\tmaybe\n");
  CHECK_THROWS_AS(read_knot_table(bad_flag), ParseError);
  std::istringstream one_field("3_1\n");
  CHECK_THROWS_AS(read_knot_table(one_field), ParseError);
}

TEST_CASE("invariant selection") {
  Selection s = parse_selection("s2,betaN,sc");
  CHECK(s.s2);
  CHECK(s.betaN);
  CHECK(s.sc);
  CHECK_FALSE(s.beta);
  CHECK(parse_selection("all").graded);
  CHECK_THROWS_AS(parse_selection("s2,s7"), std::invalid_argument);
  CHECK_THROWS_AS(parse_selection(""), std::invalid_argument);
}

TEST_CASE("unknot and trefoil rows") {
  JobSpec job;
  job.mirror = true;
  KnotRow u = analyze_knot({"0_1", "", 0, 0, true}, job);
  CHECK(u.ok());
  for (auto& [name, t] : u.tuples)
    for (int v : t) CHECK(v == 0);
  CHECK(u.tuples.size() == 5);
  KnotRow t = analyze_knot(table("knots_03.tsv").at(0), job);
  CHECK(t.ok());
  CHECK(t.self.leo->s_field.at(2).plus == 2);
  CHECK(t.mirror.leo->s_field.at(2).plus == -2);
  for (auto& [name, v] : t.tuples) {
    CAPTURE(name);
    CHECK_FALSE(non_constant(v));
    CHECK(v.front() == 2);
  }
  CHECK(t.tuples.at("sq1o").size() == 4);
  CHECK(t.tuples.at("sc").size() == 2);
  std::string line = csv_row(t, job);
  CHECK(line.rfind("3_1,3,2,Y,2,2,2,2,0,,2 2 2 2,2 2 2 2,2 2 2 2,2 2,2 2,-2,-2,-2,-2,ok,", 0) == 0);
}

TEST_CASE("selection limits the work and the columns") {
  JobSpec job;
  job.checks = false;
  job.mirror = false;
  job.invariants = parse_selection("s2");
  KnotRow r = analyze_knot(table("knots_03.tsv").at(0), job);
  CHECK(r.ok());
  CHECK(r.tuples.empty());
  CHECK_FALSE(r.self.reduced);
  CHECK_FALSE(r.self.lee);
  CHECK_FALSE(r.mirror.leo);
  CHECK(csv_row(r, job) == "3_1,3,2,Y,2,,,,,,,,,,,,,,,ok,\n");
}

TEST_CASE("failures are reported in-row and the run continues") {
  std::vector<KnotRecord> ks = table("knots_03.tsv");
  ks.push_back({"broken", "X(1,2,3)", 5, std::nullopt, std::nullopt});
  ks.push_back({"lying", "X(1,5,2,4);X(3,1,4,6);X(5,3,6,2)", 3, 0, true});
  ks.push_back(table("knots_04.tsv").at(0));
  auto rows = run(ks, JobSpec{});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());
  CHECK(rows[1].failures.front().rfind("error:", 0) == 0);
  CHECK_FALSE(rows[2].ok());  // the alternating gate compares with the supplied signature
  CHECK(rows[3].ok());
  auto s = census_summary(rows);
  CHECK(s.by_crossings.at(5).failures == 1);
  CHECK(s.by_crossings.at(3).knots == 2);
}

TEST_CASE("output does not depend on the number of workers") {
  std::vector<KnotRecord> ks;
  for (auto f : {"knots_03.tsv", "knots_04.tsv", "knots_05.tsv", "knots_06.tsv"})
    for (auto& k : table(f)) ks.push_back(k);
  JobSpec one;
  one.mirror = true;
  JobSpec three = one;
  three.jobs = 3;
  CHECK(csv_of(ks, one) == csv_of(ks, three));
  std::string a, b;
  run(ks, one, [&](const KnotRow& r) { a += row_json(r).dump(); });
  run(ks, three, [&](const KnotRow& r) { b += row_json(r).dump(); });
  CHECK(a == b);
}

TEST_CASE("census summary") {
  CensusSummary empty = census_summary({});
  CHECK(empty.by_crossings.empty());
  CHECK(non_constant({0, 2}));
  CHECK_FALSE(non_constant({2, 2, 2, 2}));
  CHECK_FALSE(non_constant({}));

  JobSpec job;
  job.mirror = true;
  CensusSummary s = census_summary(run(table("knots_09.tsv"), job));
  auto& line = s.by_crossings.at(9);
  CHECK(line.knots == 49);
  CHECK(line.failures == 0);
  CHECK(line.non_constant == std::array<int, 5>{0, 1, 1, 1, 1});
  CHECK(summary_text(s, job).find("9,49,0,0,1,1,1,1") != std::string::npos);
  CHECK(summary_json(s, job)["rows"][0]["sq1o"] == 1);
}
