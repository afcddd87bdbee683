#include "khleo/khovanov.hpp"

#include <algorithm>
#include <stdexcept>

namespace khleo {

namespace {

struct Occ {
  int crossing, pos;
};

// Sign of the permutation sorting a list of distinct circle indices.
int sort_sign(const int* xs, int k) {
  int inv = 0;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (xs[a] > xs[b]) ++inv;
  return (inv & 1) ? -1 : 1;
}

uint32_t mask_of(const int* xs, int k) {
  uint32_t m = 0;
  for (int a = 0; a < k; ++a) m |= 1u << xs[a];
  return m;
}

// Circle bookkeeping for the edge v -> v + e_c.
struct EdgeInfo {
  bool merge = false;
  int A = -1, B = -1, M = -1;    // merge: circles A, B of K_v into M of K_w
  int S = -1, S1 = -1, S2 = -1;  // split: S of K_v into S1 (bc strand), S2 (da strand)
  std::vector<int> phi;          // circle of K_v -> circle of K_w (S -> S1)
  std::vector<int> psi;          // circle of K_w -> circle of K_v
};

std::vector<int> circle_reps(const Resolution& r) {
  std::vector<int> rep(r.circles, -1);
  for (int a = 0; a < int(r.arc_circle.size()); ++a)
    if (rep[r.arc_circle[a]] < 0) rep[r.arc_circle[a]] = a;
  return rep;
}

EdgeInfo edge_info(const Cube& cube, uint32_t v, int c) {
  const auto& cr = cube.diagram.crossings[c];
  const Resolution& rv = cube.res[v];
  const Resolution& rw = cube.res[v | (1u << c)];
  EdgeInfo e;
  auto repv = circle_reps(rv), repw = circle_reps(rw);
  e.phi.resize(rv.circles);
  for (int k = 0; k < rv.circles; ++k) e.phi[k] = rw.arc_circle[repv[k]];
  e.psi.resize(rw.circles);
  for (int k = 0; k < rw.circles; ++k) e.psi[k] = rv.arc_circle[repw[k]];
  if (rw.circles < rv.circles) {
    e.merge = true;
    e.A = rv.arc_circle[cr[0]];
    e.B = rv.arc_circle[cr[2]];
    e.M = rw.arc_circle[cr[0]];
  } else {
    e.S = rv.arc_circle[cr[0]];
    e.S1 = rw.arc_circle[cr[1]];
    e.S2 = rw.arc_circle[cr[3]];
    e.phi[e.S] = e.S1;
  }
  return e;
}

struct Term {
  uint32_t mask;
  int coef;
};

// Even / Bar-Natan edge map on one generator, without the edge sign.
int even_edge(const EdgeInfo& e, uint32_t m, bool bn, Term* out) {
  int nw = int(e.psi.size());
  if (e.merge) {
    uint32_t t = 0;
    for (int k = 0; k < int(e.phi.size()); ++k)
      if (k != e.A && k != e.B && ((m >> k) & 1)) t |= 1u << e.phi[k];
    bool xa = (m >> e.A) & 1, xb = (m >> e.B) & 1;
    if (xa && xb) {
      if (!bn) return 0;
      out[0] = {t | (1u << e.M), 1};
      return 1;
    }
    if (xa || xb) t |= 1u << e.M;
    out[0] = {t, 1};
    return 1;
  }
  uint32_t t = 0;
  for (int k = 0; k < nw; ++k)
    if (k != e.S1 && k != e.S2 && ((m >> e.psi[k]) & 1)) t |= 1u << k;
  uint32_t a = 1u << e.S1, b = 1u << e.S2;
  if ((m >> e.S) & 1) {
    out[0] = {t | a | b, 1};
    return 1;
  }
  out[0] = {t | b, 1};
  out[1] = {t | a, 1};
  if (!bn) return 2;
  out[2] = {t, -1};
  return 3;
}

// Odd edge map on one wedge, without the edge sign.
int odd_edge(const EdgeInfo& e, uint32_t m, Term* out) {
  int xs[33];
  int k = 0;
  if (e.merge) {
    if (((m >> e.A) & 1) && ((m >> e.B) & 1)) return 0;
    for (int c = 0; c < int(e.phi.size()); ++c)
      if ((m >> c) & 1) xs[k++] = e.phi[c];
    out[0] = {mask_of(xs, k), sort_sign(xs, k)};
    return 1;
  }
  int r = 0;
  for (int side = 0; side < 2; ++side) {
    int head = side == 0 ? e.S1 : e.S2;
    k = 0;
    xs[k++] = head;
    bool dead = false;
    for (int c = 0; c < int(e.phi.size()); ++c)
      if ((m >> c) & 1) {
        if (e.phi[c] == head) dead = true;
        xs[k++] = e.phi[c];
      }
    if (dead) continue;
    int s = sort_sign(xs, k) * (side == 0 ? 1 : -1);
    out[r++] = {mask_of(xs, k), s};
  }
  return r;
}

int even_sign(uint32_t v, int c) {
  return (__builtin_popcount(v & ((1u << c) - 1)) & 1) ? -1 : 1;
}

std::vector<std::array<Occ, 2>> occurrences(const PlanarDiagram& d) {
  std::vector<std::array<Occ, 2>> occ(d.arcs(), {Occ{-1, -1}, Occ{-1, -1}});
  std::vector<int> seen(d.arcs(), 0);
  for (int x = 0; x < d.size(); ++x)
    for (int p = 0; p < 4; ++p) {
      int a = d.crossings[x][p];
      occ[a][seen[a]++] = {x, p};
    }
  return occ;
}

int partner(int p, int bit) {
  if (bit == 0) return p ^ 1;
  static const int one[4] = {3, 2, 1, 0};
  return one[p];
}

// Ladybug face: the circle of K_v carrying both chords, read as X (0) or Y (1).
int ladybug_sigma(const Cube& cube, uint32_t v, int i, int j) {
  const PlanarDiagram& d = cube.diagram;
  auto occ = occurrences(d);
  int start_arc = d.crossings[i][0];
  struct Visit {
    int crossing;
    bool tail;
    bool right;
  };
  std::vector<Visit> seq;
  Occ cur = occ[start_arc][1];
  Occ first = cur;
  int guard = 0;
  do {
    int x = cur.crossing, p = cur.pos;
    int q = partner(p, (v >> x) & 1);
    if (x == i || x == j) seq.push_back({x, p <= 1 && q <= 1, q == (p + 1) % 4});
    int a = d.crossings[x][q];
    auto& o = occ[a];
    cur = (o[0].crossing == x && o[0].pos == q) ? o[1] : o[0];
    if (++guard > 4 * d.size() + 4) throw std::logic_error("circle traversal did not close");
  } while (!(cur.crossing == first.crossing && cur.pos == first.pos));
  if (seq.size() != 4) throw std::logic_error("ladybug circle does not carry both chords");
  int side_i = -1, side_j = -1;
  for (auto& s : seq) {
    int& side = s.crossing == i ? side_i : side_j;
    if (side >= 0 && side != int(s.right)) throw std::logic_error("chord changes side");
    side = s.right;
  }
  if (side_i == side_j) throw std::logic_error("ladybug chords on the same side");
  int left = side_i == 0 ? i : j, right = left == i ? j : i;
  for (int t = 0; t < 4; ++t)
    if (seq[t].crossing == left && seq[t].tail) {
      const Visit& nx = seq[(t + 1) % 4];
      return (nx.crossing == right && !nx.tail) ? 0 : 1;
    }
  throw std::logic_error("ladybug tail not found");
}

std::map<uint32_t, long> apply_odd(const EdgeInfo& e, const std::map<uint32_t, long>& x) {
  std::map<uint32_t, long> r;
  Term t[3];
  for (auto& [m, c] : x) {
    int k = odd_edge(e, m, t);
    for (int a = 0; a < k; ++a) r[t[a].mask] += c * t[a].coef;
  }
  for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
  return r;
}

template <class Emit>
void emit_differential(const Cube& cube, Theory th, const EdgeAssignment* ea, Emit&& emit) {
  int n = cube.n;
  Term t[3];
  for (uint32_t v = 0; v < (1u << n); ++v) {
    int circles = cube.res[v].circles;
    for (int c = 0; c < n; ++c) {
      if ((v >> c) & 1) continue;
      uint32_t w = v | (1u << c);
      EdgeInfo e = edge_info(cube, v, c);
      int sg = th == Theory::Odd ? ea->sign(v, c) : even_sign(v, c);
      for (uint32_t m = 0; m < (1u << circles); ++m) {
        int k = th == Theory::Odd ? odd_edge(e, m, t) : even_edge(e, m, th == Theory::BarNatan, t);
        for (int a = 0; a < k; ++a)
          emit(cube.offset[v] + m, cube.offset[w] + t[a].mask, int64_t(sg * t[a].coef));
      }
    }
  }
}

template <class Emit>
void emit_x_action(const Cube& cube, Theory th, Emit&& emit) {
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int p = cube.res[v].basepoint_circle;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      int64_t g = cube.offset[v] + m;
      if ((m >> p) & 1) {
        if (th == Theory::BarNatan) emit(g, g, 1);
        continue;
      }
      int sg = 1;
      if (th == Theory::Odd && (__builtin_popcount(m >> (p + 1)) & 1)) sg = -1;
      emit(g, cube.offset[v] + (m | (1u << p)), sg);
    }
  }
}

Ring ring_of(Theory t) { return t == Theory::BarNatan ? Ring::ZH : Ring::Z; }

}  // namespace

uint32_t Cube::vertex_of(int64_t g) const {
  auto it = std::upper_bound(offset.begin(), offset.end(), g);
  return uint32_t(it - offset.begin() - 1);
}

Cube make_cube(const PlanarDiagram& d) {
  if (d.size() > 24) throw std::invalid_argument("diagram too large for the full cube");
  Cube cube;
  cube.diagram = d;
  cube.n = d.size();
  uint32_t nv = 1u << cube.n;
  cube.res.resize(nv);
  cube.offset.assign(nv + 1, 0);
  for (uint32_t v = 0; v < nv; ++v) {
    cube.res[v] = resolve(d, v);
    cube.offset[v + 1] = cube.offset[v] + (int64_t(1) << cube.res[v].circles);
  }
  if (cube.size() > (int64_t(1) << 30)) throw std::invalid_argument("cube too large");
  cube.gens.resize(cube.size());
  for (uint32_t v = 0; v < nv; ++v) {
    int k = cube.res[v].circles, ones = __builtin_popcount(v);
    for (uint32_t m = 0; m < (1u << k); ++m) {
      int x = __builtin_popcount(m);
      cube.gens[cube.offset[v] + m] = {ones - d.n_minus, ones + (k - x) - x + d.n_plus - 2 * d.n_minus};
    }
  }
  return cube;
}

FaceType face_type(const Cube& cube, uint32_t v, int i, int j) {
  uint32_t vi = v | (1u << i), vj = v | (1u << j);
  std::map<uint32_t, long> one{{0u, 1}};
  auto p1 = apply_odd(edge_info(cube, vi, j), apply_odd(edge_info(cube, v, i), one));
  auto p2 = apply_odd(edge_info(cube, vj, i), apply_odd(edge_info(cube, v, j), one));
  if (p1.empty() && p2.empty()) return ladybug_sigma(cube, v, i, j) == 0 ? FaceType::X : FaceType::Y;
  if (p1 == p2) return FaceType::C;
  for (auto& [m, c] : p2) c = -c;
  if (p1 == p2) return FaceType::A;
  throw std::logic_error("face neither commutes nor anticommutes");
}

namespace {

int face_bit(FaceType t) { return (t == FaceType::C || t == FaceType::Y) ? 1 : 0; }

}  // namespace

EdgeAssignment edge_assignment(const Cube& cube) {
  int n = cube.n;
  EdgeAssignment ea;
  ea.n = n;
  ea.bit.assign(size_t(1u << n) * std::max(n, 1), 0);
  auto at = [&](uint32_t v, int c) -> uint8_t& { return ea.bit[size_t(v) * n + c]; };
  for (int i = 0; i < n; ++i)
    for (uint32_t v = 0; v < (1u << n); ++v) {
      if ((v >> i) & 1) continue;
      uint32_t below = v & ((1u << i) - 1);
      if (!below) continue;
      int j = __builtin_ctz(below);
      uint32_t w = v & ~(1u << j);
      int b = face_bit(face_type(cube, w, j, i));
      at(v, i) = uint8_t((b + at(w, j) + at(w, i) + at(w | (1u << i), j)) & 1);
    }
  if (!edge_assignment_valid(cube, ea)) throw std::logic_error("edge assignment: inconsistent face system");
  return ea;
}

bool edge_assignment_valid(const Cube& cube, const EdgeAssignment& ea) {
  int n = cube.n;
  for (uint32_t v = 0; v < (1u << n); ++v)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (((v >> i) & 1) || ((v >> j) & 1)) continue;
        int s = ea.bit[size_t(v) * n + i] + ea.bit[size_t(v) * n + j] +
                ea.bit[size_t(v | (1u << i)) * n + j] + ea.bit[size_t(v | (1u << j)) * n + i];
        if ((s & 1) != face_bit(face_type(cube, v, i, j))) return false;
      }
  return true;
}

Complex khovanov_complex(const Cube& cube, Theory t, const EdgeAssignment* ea) {
  EdgeAssignment own;
  if (t == Theory::Odd && !ea) {
    own = edge_assignment(cube);
    ea = &own;
  }
  Complex c;
  c.ring = ring_of(t);
  c.xmod = true;
  c.gens = cube.gens;
  c.d.assign(c.size(), {});
  c.x.assign(c.size(), {});
  emit_differential(cube, t, ea, [&](int64_t a, int64_t b, int64_t v) { c.d[a].push_back({int(b), Int(long(v))}); });
  emit_x_action(cube, t, [&](int64_t a, int64_t b, int64_t v) {
    if (v) c.x[a].push_back({int(b), Int(long(v))});
  });
  c.normalize();
  return c;
}

Complex reduced_khovanov_complex(const Cube& cube, Theory t, const EdgeAssignment* ea) {
  EdgeAssignment own;
  if (t == Theory::Odd && !ea) {
    own = edge_assignment(cube);
    ea = &own;
  }
  std::vector<int> idx(cube.size(), -1);
  Complex c;
  c.ring = ring_of(t);
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int p = cube.res[v].basepoint_circle;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      if ((m >> p) & 1) continue;
      int64_t g = cube.offset[v] + m;
      idx[g] = c.size();
      c.gens.push_back({cube.gens[g].i, cube.gens[g].q - 1});
    }
  }
  c.d.assign(c.size(), {});
  emit_differential(cube, t, ea, [&](int64_t a, int64_t b, int64_t v) {
    if (idx[a] >= 0 && idx[b] >= 0) c.d[idx[a]].push_back({idx[b], Int(long(v))});
  });
  c.normalize();
  return c;
}

KhovanovPackage build(const PlanarDiagram& d) {
  Cube cube = make_cube(d);
  EdgeAssignment ea = edge_assignment(cube);
  KhovanovPackage p;
  p.even = khovanov_complex(cube, Theory::Even);
  p.barnatan = khovanov_complex(cube, Theory::BarNatan);
  p.odd = khovanov_complex(cube, Theory::Odd, &ea);
  return p;
}

KnotComplexes knot_complexes(const PlanarDiagram& d, bool reduced) {
  Cube cube = make_cube(d);
  EdgeAssignment ea = edge_assignment(cube);
  std::vector<int> idx(cube.size(), -1);
  std::vector<Gen> gens;
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int p = cube.res[v].basepoint_circle;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      if (reduced && ((m >> p) & 1)) continue;
      int64_t g = cube.offset[v] + m;
      idx[g] = int(gens.size());
      gens.push_back({cube.gens[g].i, cube.gens[g].q - (reduced ? 1 : 0)});
    }
  }
  std::vector<RawLayer> layers(2);
  layers[0].ring = Ring::Z;
  layers[1].ring = Ring::ZH;
  for (auto& L : layers) L.cols.resize(gens.size());
  emit_differential(cube, Theory::Odd, &ea, [&](int64_t a, int64_t b, int64_t v) {
    if (idx[a] >= 0 && idx[b] >= 0) layers[0].cols[idx[a]].push_back({idx[b], v});
  });
  emit_differential(cube, Theory::BarNatan, nullptr, [&](int64_t a, int64_t b, int64_t v) {
    if (idx[a] >= 0 && idx[b] >= 0) layers[1].cols[idx[a]].push_back({idx[b], v});
  });
  KnotComplexes k;
  k.cube_generators = int64_t(gens.size());
  cube = Cube{};
  auto out = simplify_joint_raw(gens, layers);
  k.odd = std::move(out[0]);
  k.barnatan = std::move(out[1]);
  return k;
}

std::vector<Column> involution_I(const Cube& cube) {
  std::vector<Column> I(cube.size());
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int split = cube.res[v].split_count;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      int j = __builtin_popcount(m);
      auto& col = I[cube.offset[v] + m];
      // X -> h - X on every X label
      for (uint32_t s = m;; s = (s - 1) & m) {
        int e = split + j - __builtin_popcount(s);
        col.push_back({int(cube.offset[v] + (m & ~s)), Int((e & 1) ? -1 : 1)});
        if (s == 0) break;
      }
      std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    }
  }
  return I;
}

std::map<int, int> chain_T_signs(const Cube& cube) {
  std::map<int, int> eps;
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int split = cube.res[v].split_count;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      int e = ((split + __builtin_popcount(m)) & 1) ? 1 : -1;  // cancels the h^0 term of I
      auto [it, fresh] = eps.emplace(cube.gens[cube.offset[v] + m].q, e);
      if (!fresh && it->second != e) throw std::logic_error("chain_T: sign depends on more than q");
    }
  }
  return eps;
}

std::vector<Column> chain_T(const Cube& cube, const std::map<int, int>& eps, int q) {
  auto index_in = [&](int piece) {
    std::vector<int> idx(cube.size(), -1);
    int k = 0;
    for (int64_t g = 0; g < cube.size(); ++g) {
      int dq = cube.gens[g].q - piece;
      if (dq >= 0 && dq % 2 == 0) idx[g] = k++;
    }
    return idx;
  };
  auto src = index_in(q), dst = index_in(q + 2);
  auto it = eps.find(q);
  int e = it == eps.end() ? 1 : it->second;
  std::vector<Column> T;
  for (uint32_t v = 0; v < (1u << cube.n); ++v) {
    int split = cube.res[v].split_count;
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      int64_t g = cube.offset[v] + m;
      if (src[g] < 0) continue;
      int j = __builtin_popcount(m);
      Column col;
      for (uint32_t s = m;; s = (s - 1) & m) {
        int c = ((split + j - __builtin_popcount(s)) & 1) ? -1 : 1;
        int64_t t = cube.offset[v] + (m & ~s);
        int coef = s ? e * c : 1 + e * c;
        if (coef) {
          if (dst[t] < 0) throw std::logic_error("chain_T: not divisible by h");
          col.push_back({dst[t], Int(coef)});
        }
        if (s == 0) break;
      }
      std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
      T.push_back(std::move(col));
    }
  }
  return T;
}

std::vector<Column> shumakovitch_nu(const Cube& cube) {
  std::vector<Column> nu(cube.size());
  for (uint32_t v = 0; v < (1u << cube.n); ++v)
    for (uint32_t m = 0; m < (1u << cube.res[v].circles); ++m) {
      auto& col = nu[cube.offset[v] + m];
      for (int c = 0; c < cube.res[v].circles; ++c)
        if ((m >> c) & 1) col.push_back({int(cube.offset[v] + (m & ~(1u << c))), Int(1)});
      std::sort(col.begin(), col.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    }
  return nu;
}

}  // namespace khleo
