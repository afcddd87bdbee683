#include "khleo/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <sstream>

namespace khleo {

namespace {

struct Occ {
  int crossing, pos;
};

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void join(int a, int b) { p[find(a)] = find(b); }
};

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

// Walks the knot along its orientation. Fills sign[], and for every arc the
// occurrence it leaves from (tail) and the one it enters (head).
void orient(PlanarDiagram& d, std::vector<Occ>* tails = nullptr,
            std::vector<Occ>* heads = nullptr) {
  int n = d.size();
  d.sign.assign(n, 0);
  d.n_plus = d.n_minus = 0;
  if (n == 0) return;
  auto occ = occurrences(d);
  std::vector<Occ> tail(d.arcs(), {-1, -1}), head(d.arcs(), {-1, -1});
  std::vector<int> under_seen(n, 0);
  int x = 0, out = 2, visited = 0;
  do {
    int a = d.crossings[x][out];
    if (tail[a].crossing >= 0) throw ParseError("orientation inconsistency");
    auto o = occ[a];
    Occ next = (o[0].crossing == x && o[0].pos == out) ? o[1] : o[0];
    tail[a] = {x, out};
    head[a] = next;
    ++visited;
    x = next.crossing;
    int p = next.pos;
    if (p == 2) throw ParseError("orientation inconsistency");
    if (p == 0) {
      under_seen[x]++;
    } else {
      int s = (p == 3) ? 1 : -1;
      if (d.sign[x] != 0) throw ParseError("orientation inconsistency");
      d.sign[x] = s;
    }
    out = (p + 2) % 4;
  } while (!(x == 0 && out == 2));
  if (visited != d.arcs())
    throw ParseError("not a single closed component");
  for (int c = 0; c < n; ++c) {
    if (d.sign[c] == 0 || under_seen[c] != 1)
      throw ParseError("orientation inconsistency");
    (d.sign[c] > 0 ? d.n_plus : d.n_minus)++;
  }
  if (tails) *tails = tail;
  if (heads) *heads = head;
}

PlanarDiagram from_tuples(const std::vector<std::array<long, 4>>& raw) {
  PlanarDiagram d;
  std::map<long, int> count;
  for (auto& t : raw)
    for (long a : t) {
      if (a <= 0) throw ParseError("arc labels must be positive integers");
      count[a]++;
    }
  std::map<long, int> index;
  for (auto& [label, c] : count) {
    if (c != 2)
      throw ParseError("arc " + std::to_string(label) + " used " +
                       std::to_string(c) + " times (expected 2)");
    index[label] = int(d.labels.size());
    d.labels.push_back(int(label));
  }
  for (auto& t : raw)
    d.crossings.push_back({index[t[0]], index[t[1]], index[t[2]], index[t[3]]});
  orient(d);
  d.basepoint = 0;
  return d;
}

}  // namespace

PlanarDiagram parse_pd(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (auto eq = s.find('='); eq != std::string::npos) s = s.substr(eq + 1);
  if (s.rfind("PD[", 0) == 0 && s.back() == ']') s = s.substr(3, s.size() - 4);
  if (s.empty() || s == "U" || s == "0_1") return PlanarDiagram{};

  std::vector<std::array<long, 4>> raw;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 'X') throw ParseError("expected 'X' at offset " + std::to_string(i));
    ++i;
    if (i >= s.size() || (s[i] != '(' && s[i] != '['))
      throw ParseError("expected '(' after X");
    char close = s[i] == '(' ? ')' : ']';
    ++i;
    std::array<long, 4> t{};
    for (int k = 0; k < 4; ++k) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw ParseError("expected arc label at offset " + std::to_string(i));
      t[k] = std::stol(s.substr(i, j - i));
      i = j;
      char want = k < 3 ? ',' : close;
      if (i >= s.size() || s[i] != want)
        throw ParseError(std::string("expected '") + want + "' at offset " + std::to_string(i));
      ++i;
    }
    raw.push_back(t);
    if (i < s.size()) {
      if (s[i] != ';' && s[i] != ',') throw ParseError("expected ';' between crossings");
      ++i;
    }
  }
  return from_tuples(raw);
}

std::string to_pd(const PlanarDiagram& d) {
  if (d.size() == 0) return "U";
  std::ostringstream os;
  for (int x = 0; x < d.size(); ++x) {
    if (x) os << ';';
    auto& c = d.crossings[x];
    os << "X(" << c[0] + 1 << ',' << c[1] + 1 << ',' << c[2] + 1 << ',' << c[3] + 1 << ')';
  }
  return os.str();
}

PlanarDiagram with_basepoint(PlanarDiagram d, int arc) {
  if (d.size() == 0) return d;
  if (arc < 0 || arc >= d.arcs()) throw ParseError("basepoint arc out of range");
  d.basepoint = arc;
  return d;
}

PlanarDiagram mirror(const PlanarDiagram& d) {
  PlanarDiagram m = d;
  for (int x = 0; x < d.size(); ++x) {
    auto c = d.crossings[x];
    // the over strand becomes the under strand; start from its incoming end
    m.crossings[x] = d.sign[x] > 0 ? std::array<int, 4>{c[3], c[0], c[1], c[2]}
                                   : std::array<int, 4>{c[1], c[2], c[3], c[0]};
  }
  orient(m);
  return m;
}

PlanarDiagram connected_sum(const PlanarDiagram& d1, const PlanarDiagram& d2) {
  if (d2.size() == 0) return d1;
  if (d1.size() == 0) return d2;
  PlanarDiagram a = d1, b = d2;
  std::vector<Occ> t1, h1, t2, h2;
  orient(a, &t1, &h1);
  orient(b, &t2, &h2);
  int off = a.arcs();
  int p1 = a.basepoint;
  int fresh = off + b.arcs();
  PlanarDiagram s;
  s.crossings = a.crossings;
  for (auto c : b.crossings) {
    for (int& x : c) x += off;
    s.crossings.push_back(c);
  }
  int nx1 = a.size();
  // p1 keeps its tail in d1 and now ends where p2 ended; a fresh arc runs
  // from p2's tail to p1's old head.
  Occ hp1 = h1[a.basepoint], tp2 = t2[b.basepoint];
  s.crossings[hp1.crossing][hp1.pos] = fresh;
  s.crossings[nx1 + tp2.crossing][tp2.pos] = fresh;
  Occ hp2 = h2[b.basepoint];
  s.crossings[nx1 + hp2.crossing][hp2.pos] = p1;
  // compact labels
  std::vector<std::array<long, 4>> raw;
  for (auto& c : s.crossings) raw.push_back({c[0] + 1L, c[1] + 1L, c[2] + 1L, c[3] + 1L});
  PlanarDiagram r = from_tuples(raw);
  // arc p1 is relabelled by from_tuples in sorted order; it keeps label p1+1
  for (int i = 0; i < r.arcs(); ++i)
    if (r.labels[i] == p1 + 1) r.basepoint = i;
  for (int i = 0; i < r.arcs(); ++i) r.labels[i] = i + 1;
  return r;
}

int circle_count(const PlanarDiagram& d, uint32_t v) {
  return resolve(d, v).circles;
}

Resolution resolve(const PlanarDiagram& d, uint32_t v) {
  Resolution r;
  r.vertex = v;
  int n = d.size();
  if (n == 0) {
    r.circles = 1;
    return r;
  }
  auto component = [&](uint32_t w, std::vector<int>& arc_circle) {
    UnionFind uf(d.arcs());
    for (int x = 0; x < n; ++x) {
      int b = (w >> x) & 1;
      auto& c = d.crossings[x];
      uf.join(c[b], c[b + 1]);
      uf.join(c[b + 2], c[(b + 3) % 4]);
    }
    arc_circle.assign(d.arcs(), -1);
    std::vector<int> root_id(d.arcs(), -1);
    int k = 0;
    for (int a = 0; a < d.arcs(); ++a) {
      int root = uf.find(a);
      if (root_id[root] < 0) root_id[root] = k++;
      arc_circle[a] = root_id[root];
    }
    return k;
  };
  r.circles = component(v, r.arc_circle);
  r.basepoint_circle = r.arc_circle[d.basepoint];
  std::vector<int> tmp;
  int c0 = component(0, tmp);
  int ones = __builtin_popcount(v);
  r.split_count = (r.circles - c0 + ones) / 2;
  return r;
}

}  // namespace khleo
