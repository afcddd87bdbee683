#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "khleo/complex.hpp"
#include "khleo/diagram.hpp"

namespace khleo {

enum class Theory { Even, BarNatan, Odd };

// Resolutions of every cube vertex plus the generator numbering. Generator
// (v, mask) sits at offset[v] + mask; bit c of mask labels circle c of K_v
// by X (even, Bar-Natan) or puts Z_c in the wedge (odd), so the three
// theories share one generator set.
struct Cube {
  PlanarDiagram diagram;
  int n = 0;
  std::vector<Resolution> res;
  std::vector<int64_t> offset;  // size 2^n + 1
  std::vector<Gen> gens;

  int64_t size() const { return offset.back(); }
  uint32_t vertex_of(int64_t g) const;
};

Cube make_cube(const PlanarDiagram& d);

// Sign bits (1 = -1) for the edges of the cube, indexed v * n + c for the
// edge v -> v + e_c (bit c of v clear).
struct EdgeAssignment {
  int n = 0;
  std::vector<uint8_t> bit;
  int sign(uint32_t v, int c) const { return bit[size_t(v) * n + c] ? -1 : 1; }
};

enum class FaceType { A, C, X, Y };

// Face type of the square spanned by crossings i < j at vertex v.
FaceType face_type(const Cube& cube, uint32_t v, int i, int j);
EdgeAssignment edge_assignment(const Cube& cube);
// Checks the face conditions of an assignment.
bool edge_assignment_valid(const Cube& cube, const EdgeAssignment& e);

// Full cube complex with the basepoint X-action.
Complex khovanov_complex(const Cube& cube, Theory t, const EdgeAssignment* e = nullptr);
// Reduced complex: generators whose basepoint circle is labelled 1 (resp.
// not in the wedge), quantum grading shifted by -1.
Complex reduced_khovanov_complex(const Cube& cube, Theory t, const EdgeAssignment* e = nullptr);

struct KhovanovPackage {
  Complex even, barnatan, odd;
};
KhovanovPackage build(const PlanarDiagram& d);

// Odd and Bar-Natan complexes of a knot jointly simplified, so the cube
// identification between odd mod 2 and Bar-Natan mod (2,h) survives as the
// identity on the remaining generators.
struct KnotComplexes {
  Complex odd, barnatan;
  int64_t cube_generators = 0;
};
KnotComplexes knot_complexes(const PlanarDiagram& d, bool reduced);

// Conjugation involution on the Bar-Natan cube complex (columns over the
// generators of khovanov_complex(cube, BarNatan)).
std::vector<Column> involution_I(const Cube& cube);
// Signs eps_q with x + eps_q I(x) divisible by h for every x of grading q.
std::map<int, int> chain_T_signs(const Cube& cube);
// T = (id + eps_q I) / h from graded_piece(barnatan, q) to
// graded_piece(barnatan, q + 2); not Z[h]-linear.
std::vector<Column> chain_T(const Cube& cube, const std::map<int, int>& eps, int q);
// Shumakovitch's nu on the even cube complex mod 2.
std::vector<Column> shumakovitch_nu(const Cube& cube);

}  // namespace khleo
