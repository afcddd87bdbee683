#pragma once
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "khleo/complex.hpp"
#include "khleo/diagram.hpp"

namespace khleo {

enum class Flavor { Unreduced, Reduced, TwoReduced };
const char* flavor_name(Flavor f);

struct InvalidTriple : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C over Z (Z[X]/(X^2) when it carries an X-action) and D over Z[h] (R when
// it carries an X-action, F2[h] for two-reduced) on one common generator
// list. f is a mod-2 chain map from C mod 2 to D mod (2,h), stored by
// columns; f_identity marks the cube identity, with f left empty.
struct LEOTriple {
  Flavor flavor = Flavor::Unreduced;
  Complex C, D;
  bool f_identity = true;
  std::vector<Column> f;
  std::string provenance = "algebraic";
  // LEO(K) or LEE(K) of a knot, possibly dualized, shifted or tensored with
  // other knot triples.
  bool from_knot = false;
  bool even = false;  // C is the even complex
  // Set while the triple is diagram(K){diagram_shift}, so that the reduced
  // triple can be rebuilt after the X-actions were dropped by simplification.
  std::optional<PlanarDiagram> diagram;
  int diagram_shift = 0;

  int size() const { return D.size(); }
  bool has_x() const { return C.xmod && D.xmod; }
};

LEOTriple trivial_triple(Flavor flavor);

// LEO(K); with simplify the complexes are jointly simplified and lose their
// X-actions, otherwise they are the cube complexes.
LEOTriple leo_of_knot(const PlanarDiagram& d, const std::string& name = "", bool simplify = true);
// LEE(K): C is the even complex.
LEOTriple lee_of_knot(const PlanarDiagram& d, const std::string& name = "", bool simplify = true);
// The reduced triple of K built directly from the reduced cube.
LEOTriple reduced_leo_of_knot(const PlanarDiagram& d, const std::string& name = "", bool simplify = true);

// The simplified triples of one knot, sharing the unreduced build between
// LEO and LEE.
struct KnotTriples {
  std::optional<LEOTriple> leo, lee, reduced;
};
KnotTriples knot_triples(const PlanarDiagram& d, const std::string& name, bool leo, bool lee, bool reduced);

LEOTriple reduce(const LEOTriple& t);
LEOTriple two_reduce(const LEOTriple& t);
LEOTriple tensor(const LEOTriple& a, const LEOTriple& b);
LEOTriple dual(const LEOTriple& t);
LEOTriple shift(const LEOTriple& t, int n);
// Joint elimination of C and D when f is the identity, otherwise separate
// elimination with f carried through the tracked equivalences. Drops X-actions.
LEOTriple simplify(const LEOTriple& t);

// Explicit mod-2 matrix of f.
std::vector<Column> f_matrix(const LEOTriple& t);

// Reads the JSON triple format: {flavor, name?, generators: [{label, i, q}],
// dC, dD: [[from, to, monomial], ...], f?: [[from, to(, monomial)], ...]}.
// Monomials are products of an integer, X and h^k ("3", "-X*h^2", "h").
// Unreduced generators are module generators over Z[X]/(X^2) and R.
LEOTriple from_algebraic(const nlohmann::json& j);

// Every violated condition of the definition; empty for a valid triple.
std::vector<std::string> validation_report(const LEOTriple& t);
void validate(const LEOTriple& t);

}  // namespace khleo
