#pragma once
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace khleo {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oriented knot diagram. Arcs are relabelled 0..2n-1; crossing tuples list
// arcs counterclockwise starting from the incoming under-strand.
struct PlanarDiagram {
  std::vector<std::array<int, 4>> crossings;
  std::vector<int> sign;       // +1 / -1 per crossing
  int n_plus = 0, n_minus = 0;
  int basepoint = 0;           // arc index
  std::vector<int> labels;     // original arc label of each arc index

  int size() const { return int(crossings.size()); }
  int arcs() const { return 2 * size(); }
};

PlanarDiagram parse_pd(const std::string& text);
std::string to_pd(const PlanarDiagram& d);
PlanarDiagram mirror(const PlanarDiagram& d);
PlanarDiagram connected_sum(const PlanarDiagram& d1, const PlanarDiagram& d2);
PlanarDiagram with_basepoint(PlanarDiagram d, int arc);

// One strand of a smoothing at crossing c: joins positions (p, (p+1)%4).
// The 0-smoothing uses corners 0 (a-b) and 2 (c-d), the 1-smoothing corners
// 1 (b-c) and 3 (d-a).
struct Resolution {
  uint32_t vertex = 0;
  int circles = 0;
  std::vector<int> arc_circle;     // circle index per arc
  int basepoint_circle = 0;
  int split_count = 0;
};

// Circles are numbered by their smallest arc.
Resolution resolve(const PlanarDiagram& d, uint32_t v);
int circle_count(const PlanarDiagram& d, uint32_t v);

}  // namespace khleo
