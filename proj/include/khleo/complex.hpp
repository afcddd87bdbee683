#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "khleo/linalg.hpp"

namespace khleo {

// Coefficient rings. The h rings are polynomial in h (grade -2); complexes
// over R = Z[h,X]/(X^2-hX) are ZH complexes with `xmod` set and the Z[h]
// basis {g, Xg}. Complexes over Z[X]/(X^2) are Z complexes with `xmod`.
enum class Ring { Z, ZH, F2, F2H };

inline bool has_h(Ring r) { return r == Ring::ZH || r == Ring::F2H; }
inline bool is_mod2(Ring r) { return r == Ring::F2 || r == Ring::F2H; }
const char* ring_name(Ring r, bool xmod);

struct Gen {
  int i = 0, q = 0;
};

using Entry = std::pair<int, Int>;
using Column = std::vector<Entry>;  // sorted by target index

// Finitely generated free bigraded cochain complex. An entry c in column a,
// row b stands for c*h^k with k = (q_b - q_a)/2 over the h rings.
struct Complex {
  Ring ring = Ring::Z;
  bool xmod = false;
  std::vector<Gen> gens;
  std::vector<std::string> labels;  // optional, same length as gens when set
  std::vector<Column> d;
  std::vector<Column> x;  // X-action columns (degree q-2) when xmod

  int size() const { return int(gens.size()); }
  void add_entry(int from, int to, const Int& c) { add_to(d, from, to, c); }
  void add_x(int from, int to, const Int& c) { add_to(x, from, to, c); }
  Int entry(int from, int to) const;
  void normalize();  // sort columns, drop zeros, reduce mod 2 if needed

  static void add_to(std::vector<Column>& cols, int from, int to, const Int& c);
};

// Throws std::logic_error describing the first violated condition.
void check_complex(const Complex& c);
bool d_squared_zero(const Complex& c);
bool x_commutes(const Complex& c);

Complex shift(const Complex& c, int n);
// Dual over the base ring with no shift. With an X-action over R the result
// is rewritten in an R-basis {P, XP}.
Complex dual(const Complex& c);
Complex mod2(const Complex& c);
Complex set_h_zero(const Complex& c);
// Tensor over the base ring (Z, or Z[h] for the h rings).
Complex tensor(const Complex& a, const Complex& b);
// Module structure read off the X-action: plain generators and, for each,
// the generator hat = sign * X * plain.
struct XBasis {
  std::vector<int> plain;   // plain generator list
  std::vector<int> base;    // per generator: index into plain
  std::vector<int> is_hat;  // per generator: 0 plain, else sign of hat
};
// Throws std::invalid_argument unless the module is free with these bases.
XBasis x_basis(const Complex& c);

// Tensor over Z[X]/(X^2) (Z rings) or R (h rings); both must carry X-actions
// that make them free with basis the generators outside the image of X.
// Shifted by {-1} so that the unknot complex is a unit.
Complex tensor_over_x(const Complex& a, const Complex& b);
// Quotient by the image of X, shifted by {-1}.
Complex quotient_by_x(const Complex& c);

// Sub-complex of generators with q_g >= q and q_g = q (mod 2), viewed over
// the base ring in quantum grading q (the h-power basis of the graded piece).
Complex graded_piece(const Complex& c, int q);
// Generators of an h complex that survive h = 1, restricted to one parity.
Complex localize(const Complex& c, int parity);

// Dense differential block from degree i to i+1 restricted to generator
// index lists.
IMat block(const Complex& c, const std::vector<int>& rows, const std::vector<int>& cols);
std::vector<int> gens_in_degree(const Complex& c, int i);

struct HomologyGroup {
  int rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  bool operator==(const HomologyGroup& o) const { return rank == o.rank && torsion == o.torsion; }
  std::string str() const;
};

// Presentation of H^i of a Z (or Z-piece) complex: summand k has order
// order[k] (0 = infinite); reps column k is a cycle representative; coord
// maps a cycle (indexed by gens_in_degree) to its summand coordinates.
struct HomologyPresentation {
  int degree = 0;
  std::vector<int> basis;  // generator indices of degree i
  std::vector<Int> order;
  IMat reps;               // basis.size() x summands
  IMat coord;              // summands x basis.size()
  HomologyGroup group() const;
};

HomologyPresentation homology(const Complex& c, int i);
// H^{i,q}: for a Z complex restrict to grading q; for an h complex take the
// graded piece at q first.
HomologyGroup homology_at(const Complex& c, int i, int q);
int homology_dim_mod(const Complex& c, int i, uint32_t p);
// Matrix of the map on homology induced by a chain map phi: src -> dst,
// given as columns over generator indices.
IMat induced_map(const std::vector<Column>& phi, const HomologyPresentation& src,
                 const HomologyPresentation& dst);

// Graded Euler characteristic: map q -> sum (-1)^i rank.
std::map<int, long> euler_characteristic(const Complex& c);

struct TrackedEquivalence {
  std::vector<Column> forward;    // original gens -> simplified gens
  std::vector<Column> backward;   // simplified gens -> original gens
  std::vector<Column> homotopy;   // original -> original, degree -1
};

struct Simplified {
  Complex complex;
  TrackedEquivalence eq;
  std::vector<int> kept;  // original index of each surviving generator
};

// Gaussian elimination of unit entries in grade 0, with tracked maps.
Simplified simplify_tracked(const Complex& c);
// Joint elimination: complexes on the same generators; a pair is cancelled
// only when it is a unit entry in grade 0 in every complex. Returns the
// surviving generator indices. X-actions are dropped.
std::vector<int> simplify_joint(std::vector<Complex*> cs);

// Differential columns with machine-word entries, as produced by the cube
// builders. The columns are released while they are loaded.
struct RawLayer {
  Ring ring = Ring::Z;
  std::vector<std::vector<std::pair<int, int64_t>>> cols;
};
std::vector<Complex> simplify_joint_raw(const std::vector<Gen>& gens, std::vector<RawLayer>& layers,
                                        std::vector<int>* kept = nullptr);

std::vector<Column> compose(const std::vector<Column>& g, const std::vector<Column>& f);
std::vector<Column> identity_map(int n);
bool maps_equal(const std::vector<Column>& a, const std::vector<Column>& b);

}  // namespace khleo
