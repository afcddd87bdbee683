#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "khleo/leo.hpp"

namespace khleo {

// h^{-1}D realized as the whole parity class of D at h = 1: every graded
// piece at q <= q0 is that complex, so h acts invertibly there.
struct LocalizedTarget {
  int q0 = 0;
  int parity = 1;
  uint32_t p = 0;  // 0: over Z, else over F_p (rank = dimension)
  HomologyGroup group;
};
LocalizedTarget localized_target(const LEOTriple& t, uint32_t p = 0);

enum class Verdict { NotHalfFull, HalfFull, Full };
const char* verdict_name(Verdict v);

enum class Refinement { Bockstein, BetaSum, Oddly, Completely };
struct FullnessKind {
  Refinement kind = Refinement::Bockstein;
  int n = 1;  // Bockstein order
};

// Reduced flavors report reduced-fullness as Full. Witnesses are chain-level
// cycles a (and b) of the graded piece of D at q, over D's generators.
struct FullnessVerdict {
  int q = 0;
  Verdict status = Verdict::NotHalfFull;
  std::vector<Column> witnesses;
};
FullnessVerdict fullness(const LEOTriple& t, int q, FullnessKind kind);

// (s+, s-) for unreduced triples; reduced ones have plus == minus.
struct SPair {
  int plus = 0, minus = 0;
  bool operator==(const SPair&) const = default;
};
SPair s_field(const LEOTriple& t, uint32_t p);  // p = 0 for Q
SPair s_integral(const LEOTriple& t);

// Reduced only. c lists the orders of image_q / image_{q+2} for
// q = sQ - 2, ..., sZ.
struct GradedS {
  int sQ = 0, sZ = 0, length = 0;
  std::vector<Int> c;
};
GradedS graded_s(const LEOTriple& t);

// r and s for unreduced triples, hat for reduced flavors.
struct Refined {
  std::optional<int> r, s, hat;
  bool operator==(const Refined&) const = default;
};
Refined refined(const LEOTriple& t, FullnessKind kind);

struct InvariantConfig {
  std::vector<uint32_t> fields = {2, 3, 0};  // 0 = Q
  std::vector<int> bockstein = {1};          // explicit orders besides the cap
  int beta_cap = 15;
  bool beta_sum = true, oddly = true, completely = true, integral = true, graded = true;
};

struct InvariantReport {
  std::string provenance;
  Flavor flavor = Flavor::Unreduced;
  int q0 = 0;
  std::map<uint32_t, SPair> s_field;
  std::optional<SPair> s_integral;
  std::optional<GradedS> graded;
  std::map<int, Refined> bockstein;  // by order n; includes the cap
  std::optional<Refined> beta, oddly, completely;
  int beta_cap = 15;
  int max_two_power = 0;  // largest 2-power exponent of torsion met by a Bockstein
  nlohmann::json to_json() const;
};
InvariantReport refined_invariants(const LEOTriple& t, const InvariantConfig& cfg = {});

// Local triviality. Unreduced: r_c of t and t* vanish, only for knot
// triples. Reduced: hat s_c; two-reduced: hat s_o.
bool triviality(const LEOTriple& t, const LEOTriple& t_dual);
bool triviality(const LEOTriple& t);

enum class Order { Less, Equal, Greater };
const char* order_name(Order o);
Order order_compare(const LEOTriple& a, const LEOTriple& b);

}  // namespace khleo
