#pragma once
#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "khleo/invariants.hpp"

namespace khleo {

struct KnotRecord {
  std::string name, pd;
  int crossings = 0;
  std::optional<int> signature;
  std::optional<bool> alternating;
};

// Tab-separated rows: name, PD code, optional signature, optional Y/N
// alternating flag. Blank lines and lines starting with '#' are skipped.
std::vector<KnotRecord> read_knot_table(std::istream& in);
std::vector<KnotRecord> read_knot_table_file(const std::string& path);

struct Selection {
  bool s2 = false, s3 = false, sQ = false, sZ = false, graded = false;
  bool sq1e = false, sq1o = false, beta = false, betaN = false, sc = false;
  bool any() const;
};
// Comma-separated names from s2,s3,sQ,sZ,gradedS,sq1e,sq1o,beta,betaN,sc or
// "all"; throws std::invalid_argument on unknown names.
Selection parse_selection(const std::string& list);
Selection all_invariants();

struct JobSpec {
  Selection invariants = all_invariants();
  int beta_cap = 15;
  bool mirror = true;
  int jobs = 1;
  // Knot-case relations and the alternating gate, reported as failures.
  bool checks = true;
};

struct SideReports {
  std::optional<InvariantReport> leo, reduced, lee;
};

inline constexpr std::array<const char*, 5> kTupleNames = {"sq1e", "sq1o", "beta", "betaN", "sc"};

struct KnotRow {
  KnotRecord knot;
  SideReports self, mirror;
  std::map<std::string, std::vector<int>> tuples;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty(); }
};

KnotRow analyze_knot(const KnotRecord& k, const JobSpec& job);

// Rows are handed to sink in input order whatever the number of workers.
void run(const std::vector<KnotRecord>& knots, const JobSpec& job, const std::function<void(const KnotRow&)>& sink);
std::vector<KnotRow> run(const std::vector<KnotRecord>& knots, const JobSpec& job);

// Violations of the knot-case relations among the invariants of one side.
// Discrepancies that the theory leaves open go to notes.
std::vector<std::string> relation_violations(const SideReports& s, std::vector<std::string>* notes = nullptr);
// Every refined invariant of one side compared with the expected value.
std::vector<std::string> constant_violations(const SideReports& s, int expected);

bool non_constant(const std::vector<int>& tuple);

struct CensusSummary {
  struct Line {
    int knots = 0, failures = 0;
    std::array<int, 5> non_constant{};
  };
  std::map<int, Line> by_crossings;
};
CensusSummary census_summary(const std::vector<KnotRow>& rows);
void add_to_summary(CensusSummary& s, const KnotRow& row);

inline constexpr int kCsvVersion = 1;
std::string csv_header(const JobSpec& job);
std::string csv_row(const KnotRow& row, const JobSpec& job);
nlohmann::json row_json(const KnotRow& row);
std::string summary_text(const CensusSummary& s, const JobSpec& job);
nlohmann::json summary_json(const CensusSummary& s, const JobSpec& job);

}  // namespace khleo
